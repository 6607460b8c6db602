//! Unsupervised word segmentation of phoneme sequences by minimum
//! description length.
//!
//! A corpus of unsegmented utterances is segmented by a greedy search over
//! boundary insertions, scoring each hypothesis by the number of bits needed
//! to transmit its lexicon plus the sample encoded with that lexicon. Word
//! boundary phonotactics (legal initial and final consonant clusters, and a
//! vowel in every word) can restrict which boundaries are allowed. Random
//! baselines and boundary/word-type scoring against a gold segmentation are
//! included for comparison.
//!
//! ```
//! use mdlseg::corpus::{parse_corpus, PhonemeInventory};
//! use mdlseg::search::{greedy_search, SearchConfig};
//!
//! let inventory = PhonemeInventory::from_classes("ai", "bdk");
//! let corpus = parse_corpus("ba di\nba ki\ndi ba", &inventory).unwrap();
//! let outcome = greedy_search(&corpus, &SearchConfig::free());
//! assert!(outcome.report.total_bits <= outcome.trace.initial.total_bits);
//! ```

pub mod cli;
pub mod corpus;
pub mod error;
pub mod evaluation;
pub mod hypothesis;
pub mod mdl;
pub mod phonotactics;
pub mod report;
pub mod search;

pub use corpus::{parse_corpus, Corpus, PhonemeInventory};
pub use error::{Error, Result};
pub use hypothesis::{Lexicon, Position, Segmentation};
pub use mdl::DLReport;
pub use phonotactics::ClusterRules;
