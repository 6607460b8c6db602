//! Greedy MDL search, random baselines, and an exhaustive oracle.
//!
//! The greedy search starts from the unsegmented corpus and, at every step,
//! commits the cheapest hypothesis reachable by adding one or two boundaries,
//! even when that makes the description longer. It runs until no insertion
//! point is left and returns the shortest hypothesis it ever held.

mod baseline;
mod brute;
mod incremental;

use std::fmt::Write as _;

use crate::corpus::Corpus;
use crate::hypothesis::{Position, Segmentation};
use crate::mdl::DLReport;
use crate::phonotactics::ClusterRules;

pub use baseline::{random_baseline, run_trials, trial_rng, BaselineOutcome, TrialSummary};
pub use brute::{brute_force, BruteForceOutcome, DEFAULT_BRUTE_FORCE_LIMIT};
pub use incremental::{Candidate, IncrementalState, TIE_TOLERANCE};

/// Points added per greedy step, at most.
pub const MAX_POINTS_PER_STEP: usize = 2;

#[derive(Debug, Clone, Default)]
pub struct SearchConfig {
    /// `None` runs unconstrained (Dist-Free / Rand-Free).
    pub phonotactics: Option<ClusterRules>,
    pub seed: u64,
    /// Baseline trial count.
    pub trials: usize,
    /// Stop as soon as no candidate shortens the committed hypothesis.
    /// Off by default: the search normally runs to full segmentation.
    pub stop_when_no_improvement: bool,
}

impl SearchConfig {
    pub fn free() -> Self {
        Self {
            trials: 1000,
            ..Self::default()
        }
    }

    pub fn phono(rules: ClusterRules) -> Self {
        Self {
            phonotactics: Some(rules),
            ..Self::free()
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStep {
    pub step: usize,
    pub points: Vec<Position>,
    /// Both points landed in one word of the previous hypothesis.
    pub same_word: bool,
    pub committed_bits: f64,
    pub best_bits: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchTrace {
    pub initial: DLReport,
    pub steps: Vec<SearchStep>,
}

impl SearchTrace {
    /// CSV with columns `step,pointsAdded,committedDL,bestDL`. Step 0 is the
    /// unsegmented start; `pointsAdded` lists `utterance:offset` pairs
    /// separated by spaces.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,pointsAdded,committedDL,bestDL\n");
        let _ = writeln!(
            out,
            "0,,{},{}",
            self.initial.total_bits, self.initial.total_bits
        );
        for s in &self.steps {
            let pts: Vec<String> = s
                .points
                .iter()
                .map(|p| format!("{}:{}", p.utterance, p.offset))
                .collect();
            let _ = writeln!(
                out,
                "{},{},{},{}",
                s.step,
                pts.join(" "),
                s.committed_bits,
                s.best_bits
            );
        }
        out
    }
}

#[derive(Debug, Clone)]
pub struct SearchOutcome {
    pub best: Segmentation,
    pub report: DLReport,
    /// Where the search stopped, not necessarily the best state.
    pub last: Segmentation,
    pub trace: SearchTrace,
}

/// Runs the greedy search (Dist-Free without rules, Dist-Phono with).
pub fn greedy_search(corpus: &Corpus, config: &SearchConfig) -> SearchOutcome {
    let mut state = IncrementalState::new(corpus, config.phonotactics.as_ref());
    let initial = state.report();
    let mut best = state.segmentation().clone();
    let mut best_report = initial;
    let mut current_bits = initial.total_bits;
    let mut steps = Vec::new();

    while let Some(candidate) = state.best_candidate(MAX_POINTS_PER_STEP) {
        if config.stop_when_no_improvement && candidate.total_bits >= current_bits - TIE_TOLERANCE {
            break;
        }
        state
            .commit(&candidate.points)
            .expect("best candidate is always committable");
        let report = state.report();
        current_bits = report.total_bits;
        if report.total_bits < best_report.total_bits - TIE_TOLERANCE {
            best_report = report;
            best = state.segmentation().clone();
        }
        steps.push(SearchStep {
            step: steps.len() + 1,
            points: candidate.points,
            same_word: candidate.same_word,
            committed_bits: report.total_bits,
            best_bits: best_report.total_bits,
        });
    }

    SearchOutcome {
        best,
        report: best_report,
        last: state.segmentation().clone(),
        trace: SearchTrace { initial, steps },
    }
}
