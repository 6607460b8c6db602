//! Phonemic corpora and phoneme inventories.
//!
//! A corpus file holds one utterance per line with words separated by single
//! spaces. Parsing strips the spaces and keeps their positions as the gold
//! segmentation, so the search only ever sees the bare phoneme string with
//! utterance ends as the sole given boundaries.
//!
//! Every phoneme is a single `char`. Multi-character transcriptions
//! (diphthongs, affricates, syllabic consonants) must be mapped to one
//! character before parsing.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hypothesis::{Position, Segmentation};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PhonemeClass {
    Vowel,
    Consonant,
}

impl PhonemeClass {
    fn code(self) -> char {
        match self {
            PhonemeClass::Vowel => 'V',
            PhonemeClass::Consonant => 'C',
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Phoneme {
    pub symbol: char,
    pub class: PhonemeClass,
}

/// The symbol set with its vowel/consonant classification.
///
/// Syllabic consonants belong in the vowel class.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct PhonemeInventory {
    classes: BTreeMap<char, PhonemeClass>,
}

impl PhonemeInventory {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_phonemes<I: IntoIterator<Item = Phoneme>>(phonemes: I) -> Self {
        let mut inv = Self::new();
        for ph in phonemes {
            inv.insert(ph);
        }
        inv
    }

    /// Convenience constructor: every char of `vowels` is a vowel, every char
    /// of `consonants` a consonant.
    pub fn from_classes(vowels: &str, consonants: &str) -> Self {
        let mut inv = Self::new();
        for c in vowels.chars() {
            inv.insert(Phoneme {
                symbol: c,
                class: PhonemeClass::Vowel,
            });
        }
        for c in consonants.chars() {
            inv.insert(Phoneme {
                symbol: c,
                class: PhonemeClass::Consonant,
            });
        }
        inv
    }

    pub fn insert(&mut self, phoneme: Phoneme) -> Option<PhonemeClass> {
        self.classes.insert(phoneme.symbol, phoneme.class)
    }

    /// Parses the inventory file format: one `<char> V` or `<char> C` per
    /// line. Blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Self> {
        let mut inv = Self::new();
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields.len() != 2 {
                return Err(Error::parse(
                    line_no,
                    1,
                    "expected `<symbol> V` or `<symbol> C`",
                ));
            }
            let mut chars = fields[0].chars();
            let symbol = match (chars.next(), chars.next()) {
                (Some(c), None) => c,
                _ => {
                    return Err(Error::parse(
                        line_no,
                        1,
                        format!("phoneme `{}` is not a single character", fields[0]),
                    ))
                }
            };
            let class = match fields[1] {
                "V" | "v" => PhonemeClass::Vowel,
                "C" | "c" => PhonemeClass::Consonant,
                other => {
                    return Err(Error::parse(
                        line_no,
                        fields[0].chars().count() + 2,
                        format!("unknown phoneme class `{other}`"),
                    ))
                }
            };
            if inv.insert(Phoneme { symbol, class }).is_some() {
                return Err(Error::parse(
                    line_no,
                    1,
                    format!("duplicate phoneme `{symbol}`"),
                ));
            }
        }
        Ok(inv)
    }

    pub fn class_of(&self, symbol: char) -> Option<PhonemeClass> {
        self.classes.get(&symbol).copied()
    }

    pub fn contains(&self, symbol: char) -> bool {
        self.classes.contains_key(&symbol)
    }

    /// Unknown symbols are not vowels.
    pub fn is_vowel(&self, symbol: char) -> bool {
        self.class_of(symbol) == Some(PhonemeClass::Vowel)
    }

    pub fn is_consonant(&self, symbol: char) -> bool {
        self.class_of(symbol) == Some(PhonemeClass::Consonant)
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn phonemes(&self) -> impl Iterator<Item = Phoneme> + '_ {
        self.classes
            .iter()
            .map(|(&symbol, &class)| Phoneme { symbol, class })
    }
}

impl fmt::Display for PhonemeInventory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for ph in self.phonemes() {
            writeln!(f, "{} {}", ph.symbol, ph.class.code())?;
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Utterance {
    phonemes: Vec<char>,
}

impl Utterance {
    pub fn new(phonemes: Vec<char>) -> Result<Self> {
        if phonemes.is_empty() {
            return Err(Error::contract(
                "utterance must contain at least one phoneme",
            ));
        }
        Ok(Self { phonemes })
    }

    pub fn phonemes(&self) -> &[char] {
        &self.phonemes
    }

    pub fn len(&self) -> usize {
        self.phonemes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phonemes.is_empty()
    }

    /// Number of internal candidate positions, `L - 1`.
    pub fn internal_positions(&self) -> usize {
        self.phonemes.len() - 1
    }
}

impl fmt::Display for Utterance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.phonemes {
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// An immutable parsed corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    utterances: Vec<Utterance>,
    gold: Option<Segmentation>,
    inventory: PhonemeInventory,
    used: BTreeSet<char>,
}

impl Corpus {
    /// Builds a corpus from already-unsegmented utterances, without gold.
    pub fn from_utterances(
        utterances: Vec<Utterance>,
        inventory: PhonemeInventory,
    ) -> Result<Self> {
        let mut used = BTreeSet::new();
        for (u, utt) in utterances.iter().enumerate() {
            for (i, &c) in utt.phonemes().iter().enumerate() {
                if !inventory.contains(c) {
                    return Err(Error::parse(
                        u + 1,
                        i + 1,
                        format!("symbol `{c}` is not in the phoneme inventory"),
                    ));
                }
                used.insert(c);
            }
        }
        Ok(Self {
            utterances,
            gold: None,
            inventory,
            used,
        })
    }

    pub fn utterances(&self) -> &[Utterance] {
        &self.utterances
    }

    pub fn gold(&self) -> Option<&Segmentation> {
        self.gold.as_ref()
    }

    pub fn inventory(&self) -> &PhonemeInventory {
        &self.inventory
    }

    /// Symbols that actually occur in the sample.
    pub fn used_symbols(&self) -> &BTreeSet<char> {
        &self.used
    }

    /// `p`, the number of distinct phonemes used in the sample.
    pub fn phoneme_count(&self) -> usize {
        self.used.len()
    }

    pub fn phoneme_total(&self) -> usize {
        self.utterances.iter().map(Utterance::len).sum()
    }

    pub fn utterance_lengths(&self) -> Vec<usize> {
        self.utterances.iter().map(Utterance::len).collect()
    }

    /// Total number of internal candidate positions.
    pub fn candidate_count(&self) -> usize {
        self.utterances
            .iter()
            .map(Utterance::internal_positions)
            .sum()
    }

    /// All internal positions ordered by (utterance, offset).
    pub fn candidate_positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.utterances
            .iter()
            .enumerate()
            .flat_map(|(u, utt)| (1..utt.len()).map(move |offset| Position::new(u, offset)))
    }

    /// Renders `seg` as word-separated text, one utterance per line.
    pub fn render(&self, seg: &Segmentation) -> Vec<String> {
        self.utterances
            .iter()
            .enumerate()
            .map(|(u, utt)| {
                let mut out = String::with_capacity(utt.len() * 2);
                let mut cuts = seg.offsets(u).iter().peekable();
                for (i, &c) in utt.phonemes().iter().enumerate() {
                    if cuts.peek() == Some(&&i) {
                        out.push(' ');
                        cuts.next();
                    }
                    out.push(c);
                }
                out
            })
            .collect()
    }

    /// Same utterance sequence, ignoring gold.
    pub fn same_text(&self, other: &Corpus) -> bool {
        self.utterances == other.utterances
    }
}

/// Parses word-separated transcription text into a corpus whose gold
/// segmentation is the set of removed spaces.
pub fn parse_corpus(text: &str, inventory: &PhonemeInventory) -> Result<Corpus> {
    let mut utterances = Vec::new();
    let mut gold = Vec::new();
    let mut used = BTreeSet::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.strip_suffix('\r').unwrap_or(raw);
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut phonemes = Vec::with_capacity(line.len());
        let mut offsets = Vec::new();
        let mut word_len = 0usize;
        for (col, c) in line.chars().enumerate() {
            let column = col + 1;
            if c == ' ' {
                if word_len == 0 {
                    return Err(Error::parse(line_no, column, "empty word"));
                }
                offsets.push(phonemes.len());
                word_len = 0;
                continue;
            }
            if !inventory.contains(c) {
                return Err(Error::parse(
                    line_no,
                    column,
                    format!("symbol `{c}` is not in the phoneme inventory"),
                ));
            }
            used.insert(c);
            phonemes.push(c);
            word_len += 1;
        }
        if word_len == 0 {
            return Err(Error::parse(line_no, line.chars().count(), "empty word"));
        }
        gold.push(offsets);
        utterances.push(Utterance { phonemes });
    }

    if utterances.is_empty() {
        return Err(Error::parse(1, 1, "corpus contains no utterances"));
    }

    let lengths = utterances.iter().map(Utterance::len).collect();
    let gold = Segmentation::from_offsets(lengths, gold)?;
    Ok(Corpus {
        utterances,
        gold: Some(gold),
        inventory: inventory.clone(),
        used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) fn kitty_inventory() -> PhonemeInventory {
        PhonemeInventory::from_classes("uiəɪY", "djsðktl")
    }

    const KITTY: &str = "du ju si ðə kɪti\nsi ðə kɪti\ndu ju lYk ðə kɪti\n";

    #[test]
    fn gold_positions_come_from_spacing() {
        let inv = PhonemeInventory::from_classes("ui", "djs");
        let corpus = parse_corpus("du ju si", &inv).unwrap();
        assert_eq!(corpus.utterances()[0].to_string(), "dujusi");
        assert_eq!(corpus.gold().unwrap().offsets(0), &[2, 4]);
    }

    #[test]
    fn kitty_counts() {
        let corpus = parse_corpus(KITTY, &kitty_inventory()).unwrap();
        let lens: Vec<_> = corpus
            .utterances()
            .iter()
            .map(|u| u.internal_positions())
            .collect();
        assert_eq!(lens, vec![11, 7, 12]);
        assert_eq!(corpus.candidate_count(), 30);
        assert_eq!(corpus.gold().unwrap().boundary_count(), 10);
        assert_eq!(corpus.phoneme_count(), 12);
    }

    #[test]
    fn unknown_symbol_names_line_and_column() {
        let inv = PhonemeInventory::from_classes("a", "b");
        let err = parse_corpus("# header\nab ba\nab xa\n", &inv).unwrap_err();
        match err {
            Error::Parse { line, column, .. } => assert_eq!((line, column), (3, 4)),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn double_space_is_an_empty_word() {
        let inv = PhonemeInventory::from_classes("a", "b");
        assert!(matches!(
            parse_corpus("ab  ba", &inv),
            Err(Error::Parse { column: 4, .. })
        ));
        assert!(parse_corpus("ab ", &inv).is_err());
        assert!(parse_corpus(" ab", &inv).is_err());
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let inv = PhonemeInventory::from_classes("a", "b");
        let corpus = parse_corpus("# c\n\nab\r\n\nba b\n", &inv).unwrap();
        assert_eq!(corpus.utterances().len(), 2);
        assert_eq!(corpus.render(corpus.gold().unwrap()), vec!["ab", "ba b"]);
    }

    #[test]
    fn empty_text_is_rejected() {
        let inv = PhonemeInventory::from_classes("a", "b");
        assert!(parse_corpus("\n# only a comment\n", &inv).is_err());
    }

    #[test]
    fn candidate_counts_for_small_shapes() {
        let inv = PhonemeInventory::from_classes("a", "b");
        assert_eq!(parse_corpus("a", &inv).unwrap().candidate_count(), 0);
        let c = parse_corpus("ab\naba", &inv).unwrap();
        assert_eq!(c.candidate_count(), 3);
        let pos: Vec<_> = c
            .candidate_positions()
            .map(|p| (p.utterance, p.offset))
            .collect();
        assert_eq!(pos, vec![(0, 1), (1, 1), (1, 2)]);
    }

    #[test]
    fn inventory_file_format() {
        let inv = PhonemeInventory::parse("# vowels\na V\n\nb C\nY V\n").unwrap();
        assert_eq!(inv.len(), 3);
        assert!(inv.is_vowel('Y'));
        assert!(inv.is_consonant('b'));
        assert_eq!(PhonemeInventory::parse(&inv.to_string()).unwrap(), inv);
        assert!(PhonemeInventory::parse("ab V").is_err());
        assert!(PhonemeInventory::parse("a X").is_err());
        assert!(PhonemeInventory::parse("a V\na C").is_err());
    }
}
