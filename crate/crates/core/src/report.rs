//! Serializable run reports.
//!
//! Reports carry the full effective configuration, including defaulted
//! values, so a JSON report is enough to rerun the job. Field order is fixed
//! by the struct definitions, which keeps the output byte-stable.

use serde::Serialize;

use crate::corpus::Corpus;
use crate::evaluation::Score;
use crate::mdl::DLReport;
use crate::search::TrialSummary;

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub mode: Option<String>,
    pub corpus: String,
    pub inventory: String,
    pub rules: Option<String>,
    pub seed: u64,
    pub trials: Option<usize>,
    pub k: Option<usize>,
    pub limit: Option<usize>,
    pub stop_when_no_improvement: Option<bool>,
}

impl RunMetadata {
    pub fn new(subcommand: &str, corpus: &str, inventory: &str) -> Self {
        Self {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_owned(),
            mode: None,
            corpus: corpus.to_owned(),
            inventory: inventory.to_owned(),
            rules: None,
            seed: 0,
            trials: None,
            k: None,
            limit: None,
            stop_when_no_improvement: None,
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct CorpusSummary {
    pub utterances: usize,
    pub candidate_points: usize,
    pub gold_boundaries: Option<usize>,
    pub phonemes_used: usize,
}

impl CorpusSummary {
    pub fn of(corpus: &Corpus) -> Self {
        Self {
            utterances: corpus.utterances().len(),
            candidate_points: corpus.candidate_count(),
            gold_boundaries: corpus.gold().map(|g| g.boundary_count()),
            phonemes_used: corpus.phoneme_count(),
        }
    }
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct SegmentReport {
    pub metadata: RunMetadata,
    pub corpus: CorpusSummary,
    pub description_length: DLReport,
    pub unsegmented_description_length: DLReport,
    pub boundaries: Option<Score>,
    pub types: Option<Score>,
    pub steps: usize,
    pub same_word_pair_steps: usize,
    pub boundaries_inserted: usize,
    pub segmentation: Vec<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct BaselineReport {
    pub metadata: RunMetadata,
    pub corpus: CorpusSummary,
    pub summary: TrialSummary,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct HypothesisSummary {
    pub description_length: DLReport,
    pub boundaries_inserted: usize,
    pub segmentation: Vec<String>,
}

#[derive(Debug, Clone, Copy, Serialize, PartialEq, Eq)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Equal,
    GreedySuboptimal,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct VerifyReport {
    pub metadata: RunMetadata,
    pub corpus: CorpusSummary,
    pub greedy: HypothesisSummary,
    pub brute_force: HypothesisSummary,
    pub hypotheses_enumerated: u64,
    pub hypotheses_admissible: u64,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct ScoreReport {
    pub metadata: RunMetadata,
    pub corpus: CorpusSummary,
    pub description_length: DLReport,
    pub boundaries: Score,
    pub types: Score,
}

/// One decimal place, `-` for undefined.
pub fn fmt_percent(value: Option<f64>) -> String {
    value.map_or_else(|| "-".to_owned(), |v| format!("{v:.1}"))
}
