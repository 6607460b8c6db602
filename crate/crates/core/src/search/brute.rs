//! Exhaustive minimum over all admissible hypotheses, for small corpora.
//!
//! Every candidate is scored with a lexicon rebuilt from scratch, which keeps
//! this path independent of the incremental engine it is used to check.

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::hypothesis::{Position, Segmentation};
use crate::mdl::{total_dl, DLReport};
use crate::phonotactics::{is_legal_word, legal_points, ClusterRules};

use super::TIE_TOLERANCE;

pub const DEFAULT_BRUTE_FORCE_LIMIT: usize = 20;

#[derive(Debug, Clone)]
pub struct BruteForceOutcome {
    pub best: Segmentation,
    pub report: DLReport,
    /// Points the enumeration ranged over.
    pub candidate_points: usize,
    /// Subsets enumerated, `2^candidate_points`.
    pub enumerated: u64,
    /// Subsets that passed the phonotactic filter.
    pub admissible: u64,
}

/// With rules, a point is a candidate iff it is legal in the unsegmented
/// utterance, and a subset is admissible iff every word of every utterance
/// it cuts is legal. Any concatenation of legal words is legal, so these are
/// exactly the hypotheses reachable by legal insertions.
pub fn brute_force(
    corpus: &Corpus,
    rules: Option<&ClusterRules>,
    limit: usize,
) -> Result<BruteForceOutcome> {
    let points: Vec<Position> = match rules {
        None => corpus.candidate_positions().collect(),
        Some(r) => corpus
            .utterances()
            .iter()
            .enumerate()
            .flat_map(|(u, utt)| {
                legal_points(utt.phonemes(), &[], r, corpus.inventory())
                    .into_iter()
                    .map(move |o| Position::new(u, o))
            })
            .collect(),
    };
    if points.len() > limit || points.len() >= 63 {
        return Err(Error::TooManyCandidates {
            count: points.len(),
            limit,
        });
    }
    let lengths = corpus.utterance_lengths();
    let total: u64 = 1 << points.len();

    let admissible = |seg: &Segmentation| match rules {
        None => true,
        Some(r) => corpus.utterances().iter().enumerate().all(|(u, utt)| {
            seg.offsets(u).is_empty()
                || seg
                    .word_spans(u)
                    .all(|(s, e)| is_legal_word(&utt.phonemes()[s..e], r, corpus.inventory()))
        }),
    };

    let scored: Vec<Option<DLReport>> = (0..total)
        .into_par_iter()
        .map(|mask| {
            let chosen = (0..points.len())
                .filter(|&i| mask >> i & 1 == 1)
                .map(|i| points[i]);
            let seg = Segmentation::from_positions(lengths.clone(), chosen)
                .expect("distinct internal points");
            admissible(&seg).then(|| total_dl(corpus, &seg))
        })
        .collect();

    let min = scored
        .iter()
        .flatten()
        .map(|r| r.total_bits)
        .fold(f64::INFINITY, f64::min);
    let threshold = min + TIE_TOLERANCE;
    let key = |mask: u64| {
        let idx: Vec<usize> = (0..points.len()).filter(|&i| mask >> i & 1 == 1).collect();
        (idx.len(), idx)
    };
    let best_mask = (0..total)
        .filter(|&m| scored[m as usize].is_some_and(|r| r.total_bits <= threshold))
        .min_by_key(|&m| key(m))
        .expect("the empty subset is always admissible");
    let best = Segmentation::from_positions(
        lengths,
        (0..points.len())
            .filter(|&i| best_mask >> i & 1 == 1)
            .map(|i| points[i]),
    )?;
    Ok(BruteForceOutcome {
        report: scored[best_mask as usize].expect("admissible"),
        best,
        candidate_points: points.len(),
        enumerated: total,
        admissible: scored.iter().filter(|r| r.is_some()).count() as u64,
    })
}
