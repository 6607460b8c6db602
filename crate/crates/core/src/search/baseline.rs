//! Random-insertion baselines (Rand-Free, Rand-Phono).
//!
//! Trials use ChaCha8 seeded with `seed_from_u64(seed)`; trial `t` runs on
//! stream `t` of that key, so any single trial can be replayed on its own and
//! results do not depend on thread scheduling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::evaluation::{boundary_score, mean_defined, type_score, Score};
use crate::hypothesis::{build_lexicon, Segmentation};
use crate::phonotactics::{ClusterRules, ValidPointSet};

#[derive(Debug, Clone, PartialEq)]
pub struct BaselineOutcome {
    pub segmentation: Segmentation,
    /// Can fall short of the requested count when valid points run out.
    pub placed: usize,
}

/// Generator for trial `trial` under `seed`.
pub fn trial_rng(seed: u64, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(trial);
    rng
}

/// Inserts up to `k` boundaries, each drawn uniformly from the currently
/// valid points.
pub fn random_baseline<R: Rng + ?Sized>(
    corpus: &Corpus,
    k: usize,
    rules: Option<&ClusterRules>,
    rng: &mut R,
) -> BaselineOutcome {
    let mut seg = Segmentation::for_corpus(corpus);
    let mut valid = ValidPointSet::compute(corpus, &seg, rules);
    let mut placed = 0;
    let mut pool = Vec::new();
    while placed < k {
        pool.clear();
        pool.extend(valid.iter());
        if pool.is_empty() {
            break;
        }
        let pick = pool[rng.gen_range(0..pool.len())];
        seg.insert(pick).expect("valid points are never committed");
        valid.refresh_after_insertion(corpus, &seg, pick, rules);
        placed += 1;
    }
    BaselineOutcome {
        segmentation: seg,
        placed,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrialSummary {
    pub trials: usize,
    pub k: usize,
    pub mean_recall: Option<f64>,
    pub mean_accuracy: Option<f64>,
    pub undefined_recall: usize,
    pub undefined_accuracy: usize,
    pub mean_type_recall: Option<f64>,
    pub mean_type_accuracy: Option<f64>,
    pub mean_placed: f64,
    /// Trials that ran out of valid points before placing `k`.
    pub short_trials: usize,
}

struct TrialResult {
    boundary: Score,
    types: Score,
    placed: usize,
}

/// Runs `trials` seeded baselines against the corpus gold and averages the
/// scores. Undefined ratios are left out of the means and counted.
pub fn run_trials(
    corpus: &Corpus,
    k: usize,
    rules: Option<&ClusterRules>,
    trials: usize,
    seed: u64,
) -> Result<TrialSummary> {
    if trials == 0 {
        return Err(Error::contract("at least one trial is required"));
    }
    let gold = corpus
        .gold()
        .ok_or_else(|| Error::contract("scoring trials needs a gold segmentation"))?;
    let gold_lexicon = build_lexicon(corpus, gold);

    let results: Vec<TrialResult> = (0..trials as u64)
        .into_par_iter()
        .map(|t| {
            let mut rng = trial_rng(seed, t);
            let out = random_baseline(corpus, k, rules, &mut rng);
            TrialResult {
                boundary: boundary_score(&out.segmentation, gold).expect("same corpus"),
                types: type_score(&build_lexicon(corpus, &out.segmentation), &gold_lexicon),
                placed: out.placed,
            }
        })
        .collect();

    let (mean_recall, undefined_recall) = mean_defined(results.iter().map(|r| r.boundary.recall));
    let (mean_accuracy, undefined_accuracy) =
        mean_defined(results.iter().map(|r| r.boundary.accuracy));
    let (mean_type_recall, _) = mean_defined(results.iter().map(|r| r.types.recall));
    let (mean_type_accuracy, _) = mean_defined(results.iter().map(|r| r.types.accuracy));
    Ok(TrialSummary {
        trials,
        k,
        mean_recall,
        mean_accuracy,
        undefined_recall,
        undefined_accuracy,
        mean_type_recall,
        mean_type_accuracy,
        mean_placed: results.iter().map(|r| r.placed as f64).sum::<f64>() / trials as f64,
        short_trials: results.iter().filter(|r| r.placed < k).count(),
    })
}
