//! Scoring hypotheses against a gold segmentation.
//!
//! Ratios with a zero denominator are `None` and stay that way; averaging
//! code skips them and reports how many were skipped.

use std::collections::HashSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{Lexicon, Segmentation};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Score {
    pub hits: u64,
    pub misses: u64,
    pub false_alarms: u64,
    /// Percent, `hits / (hits + misses)`.
    pub recall: Option<f64>,
    /// Percent, `hits / (hits + false_alarms)`.
    pub accuracy: Option<f64>,
}

fn percent(num: u64, den: u64) -> Option<f64> {
    (den > 0).then(|| 100.0 * num as f64 / den as f64)
}

impl Score {
    pub fn from_counts(hits: u64, misses: u64, false_alarms: u64) -> Self {
        Self {
            hits,
            misses,
            false_alarms,
            recall: percent(hits, hits + misses),
            accuracy: percent(hits, hits + false_alarms),
        }
    }
}

/// Compares utterance-internal boundaries. Utterance ends are given and
/// never scored.
pub fn boundary_score(hypothesis: &Segmentation, gold: &Segmentation) -> Result<Score> {
    if hypothesis.lengths() != gold.lengths() {
        return Err(Error::contract(
            "hypothesis and gold segment different corpora",
        ));
    }
    let (mut hits, mut misses, mut false_alarms) = (0u64, 0u64, 0u64);
    for u in 0..gold.utterance_count() {
        let (h, g) = (hypothesis.offsets(u), gold.offsets(u));
        let (mut i, mut j) = (0, 0);
        while i < h.len() && j < g.len() {
            match h[i].cmp(&g[j]) {
                std::cmp::Ordering::Equal => {
                    hits += 1;
                    i += 1;
                    j += 1;
                }
                std::cmp::Ordering::Less => {
                    false_alarms += 1;
                    i += 1;
                }
                std::cmp::Ordering::Greater => {
                    misses += 1;
                    j += 1;
                }
            }
        }
        false_alarms += (h.len() - i) as u64;
        misses += (g.len() - j) as u64;
    }
    Ok(Score::from_counts(hits, misses, false_alarms))
}

/// Compares word types as exact sequences; frequencies are ignored.
pub fn type_score(hypothesis: &Lexicon, gold: &Lexicon) -> Score {
    type_score_sets(hypothesis.types(), gold.types())
}

pub fn type_score_sets<'a, H, G>(hypothesis: H, gold: G) -> Score
where
    H: IntoIterator<Item = &'a str>,
    G: IntoIterator<Item = &'a str>,
{
    let hyp: HashSet<&str> = hypothesis.into_iter().collect();
    let gold: HashSet<&str> = gold.into_iter().collect();
    let hits = hyp.intersection(&gold).count() as u64;
    Score::from_counts(hits, gold.len() as u64 - hits, hyp.len() as u64 - hits)
}

/// Mean of the defined values plus the number of undefined ones.
pub fn mean_defined(values: impl IntoIterator<Item = Option<f64>>) -> (Option<f64>, usize) {
    let (mut sum, mut count, mut undefined) = (0.0, 0usize, 0usize);
    for v in values {
        match v {
            Some(v) => {
                sum += v;
                count += 1;
            }
            None => undefined += 1,
        }
    }
    ((count > 0).then(|| sum / count as f64), undefined)
}
