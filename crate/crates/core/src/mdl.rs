//! Description length of a segmentation hypothesis, in bits.
//!
//! A hypothesis is charged for three things: the word inventory column (the
//! phoneme strings of the lexicon with their length fields), the code word
//! inventory column (the code word lengths with their fields), and the sample
//! encoded as a sequence of code words. All lengths use the continuous
//! approximations, so the values are real-valued bit counts.
//!
//! Everything here is a function of [`LexiconStats`], which makes the same
//! formulas usable for a lexicon built from scratch and for the O(1) deltas
//! evaluated by the search.

use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::hypothesis::{build_lexicon, Segmentation};

/// Aggregates of a lexicon sufficient to compute its description length.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LexiconStats {
    /// `n`, number of word types.
    pub types: u64,
    /// `m`, number of word tokens.
    pub tokens: u64,
    /// Sum of word lengths over types, in phonemes.
    pub total_len: u64,
    pub max_len: u64,
    /// Sum of `log2 f(w)` over types.
    pub sum_log_freq: f64,
    /// Sum of `f(w) log2 f(w)` over types.
    pub sum_freq_log_freq: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DLReport {
    pub word_inventory_bits: f64,
    pub code_inventory_bits: f64,
    pub sample_bits: f64,
    pub total_bits: f64,
}

impl DLReport {
    fn from_parts(word_inventory_bits: f64, code_inventory_bits: f64, sample_bits: f64) -> Self {
        Self {
            word_inventory_bits,
            code_inventory_bits,
            sample_bits,
            total_bits: word_inventory_bits + code_inventory_bits + sample_bits,
        }
    }
}

/// Continuous self-delimiting integer length,
/// `1.5 + log2(x + 1) + 2 log2(log2(x + 2) + 0.5)`.
///
/// Strictly increasing; `x` is nonnegative by type.
pub fn int_code_len(x: u64) -> f64 {
    let x = x as f64;
    1.5 + (x + 1.0).log2() + 2.0 * ((x + 2.0).log2() + 0.5).log2()
}

/// Width in bits of a fixed-length field holding integers `1..=max`.
/// Never negative: `max` below 1 is clamped.
fn field_width(max: f64) -> f64 {
    max.max(1.0).log2()
}

/// Word inventory column: `l2(n) + log2(p) * sum len + 1 + (n + 1) log2(max len)`.
pub fn word_inventory_len(stats: &LexiconStats, phoneme_count: usize) -> f64 {
    let n = stats.types;
    let per_phoneme = field_width(phoneme_count as f64);
    int_code_len(n)
        + per_phoneme * stats.total_len as f64
        + 1.0
        + (n + 1) as f64 * field_width(stats.max_len as f64)
}

/// Length of the code word for a word of frequency `freq` among `tokens`
/// tokens, `log2(m / f)`.
pub fn code_word_len(freq: u64, tokens: u64) -> Result<f64> {
    if freq < 1 || freq > tokens {
        return Err(Error::contract(format!(
            "code word length needs 1 <= f <= m, got f = {freq}, m = {tokens}"
        )));
    }
    Ok((tokens as f64 / freq as f64).log2())
}

/// Code word inventory column: `sum log2(m / f) + 1 + (n + 1) log2(log2 m)`,
/// with the code word sum taken as `n log2 m - sum log2 f`.
pub fn code_inventory_len(stats: &LexiconStats) -> f64 {
    let n = stats.types as f64;
    let log_m = log2_tokens(stats.tokens);
    let codes = (n * log_m - stats.sum_log_freq).max(0.0);
    codes + 1.0 + (n + 1.0) * field_width(log_m)
}

/// Encoded sample: `l2(m) + sum f log2(m / f)`, with the sum taken as
/// `m log2 m - sum f log2 f`.
pub fn sample_code_len(stats: &LexiconStats) -> f64 {
    let m = stats.tokens as f64;
    let entropy = (m * log2_tokens(stats.tokens) - stats.sum_freq_log_freq).max(0.0);
    int_code_len(stats.tokens) + entropy
}

fn log2_tokens(tokens: u64) -> f64 {
    if tokens == 0 {
        0.0
    } else {
        (tokens as f64).log2()
    }
}

pub fn description_length(stats: &LexiconStats, phoneme_count: usize) -> DLReport {
    DLReport::from_parts(
        word_inventory_len(stats, phoneme_count),
        code_inventory_len(stats),
        sample_code_len(stats),
    )
}

/// Description length of `seg` over `corpus`, from a freshly built lexicon.
pub fn total_dl(corpus: &Corpus, seg: &Segmentation) -> DLReport {
    let lexicon = build_lexicon(corpus, seg);
    description_length(&lexicon.stats(), corpus.phoneme_count())
}

/// Table-driven evaluation of [`description_length`] for stats whose counts
/// never exceed a known bound (the corpus phoneme total).
#[derive(Debug, Clone)]
pub struct DlKernel {
    int_len: Vec<f64>,
    log2: Vec<f64>,
    bits_per_phoneme: f64,
}

impl DlKernel {
    pub fn new(max_count: usize, phoneme_count: usize) -> Self {
        let size = max_count + 3;
        Self {
            int_len: (0..size as u64).map(int_code_len).collect(),
            log2: (0..size)
                .map(|k| if k == 0 { 0.0 } else { (k as f64).log2() })
                .collect(),
            bits_per_phoneme: field_width(phoneme_count as f64),
        }
    }

    #[inline]
    fn lg(&self, k: u64) -> f64 {
        self.log2[k as usize]
    }

    /// Same value as `description_length(stats, p).total_bits` up to
    /// rounding.
    #[inline]
    pub fn total(&self, stats: &LexiconStats) -> f64 {
        let n = stats.types as f64;
        let m = stats.tokens as f64;
        let log_m = self.lg(stats.tokens);
        let words = self.int_len[stats.types as usize]
            + self.bits_per_phoneme * stats.total_len as f64
            + 1.0
            + (n + 1.0) * self.lg(stats.max_len.max(1));
        let codes =
            (n * log_m - stats.sum_log_freq).max(0.0) + 1.0 + (n + 1.0) * field_width(log_m);
        let sample =
            self.int_len[stats.tokens as usize] + (m * log_m - stats.sum_freq_log_freq).max(0.0);
        words + codes + sample
    }

    /// `log2 k` for `k` within the table, 0 at `k = 0`.
    #[inline]
    pub fn log2_count(&self, k: u64) -> f64 {
        self.lg(k)
    }
}
