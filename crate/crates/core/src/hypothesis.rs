//! Segmentation hypotheses and the lexicons they induce.

use std::collections::{BTreeMap, HashMap};

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::mdl::LexiconStats;

/// A candidate boundary: `offset` phonemes into utterance `utterance`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Position {
    pub utterance: usize,
    pub offset: usize,
}

impl Position {
    pub const fn new(utterance: usize, offset: usize) -> Self {
        Self { utterance, offset }
    }
}

/// Per-utterance sorted sets of internal boundary offsets.
///
/// Utterance ends are implicit boundaries and are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Segmentation {
    lengths: Vec<usize>,
    offsets: Vec<Vec<usize>>,
}

impl Segmentation {
    /// The unsegmented hypothesis for utterances of the given lengths.
    pub fn empty(lengths: Vec<usize>) -> Self {
        let offsets = vec![Vec::new(); lengths.len()];
        Self { lengths, offsets }
    }

    pub fn for_corpus(corpus: &Corpus) -> Self {
        Self::empty(corpus.utterance_lengths())
    }

    /// Every internal position is a boundary.
    pub fn full(lengths: Vec<usize>) -> Self {
        let offsets = lengths.iter().map(|&l| (1..l).collect()).collect();
        Self { lengths, offsets }
    }

    pub fn from_offsets(lengths: Vec<usize>, mut offsets: Vec<Vec<usize>>) -> Result<Self> {
        if lengths.len() != offsets.len() {
            return Err(Error::contract(format!(
                "segmentation has {} utterances, corpus has {}",
                offsets.len(),
                lengths.len()
            )));
        }
        for (u, (cuts, &len)) in offsets.iter_mut().zip(&lengths).enumerate() {
            cuts.sort_unstable();
            if cuts.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::contract(format!(
                    "duplicate offset in utterance {u}"
                )));
            }
            if let Some(&bad) = cuts.iter().find(|&&o| o == 0 || o >= len) {
                return Err(Error::contract(format!(
                    "offset {bad} outside 1..{len} in utterance {u}"
                )));
            }
        }
        Ok(Self { lengths, offsets })
    }

    pub fn from_positions(
        lengths: Vec<usize>,
        positions: impl IntoIterator<Item = Position>,
    ) -> Result<Self> {
        let mut seg = Self::empty(lengths);
        for pos in positions {
            seg.insert(pos)?;
        }
        Ok(seg)
    }

    pub fn utterance_count(&self) -> usize {
        self.lengths.len()
    }

    pub fn lengths(&self) -> &[usize] {
        &self.lengths
    }

    pub fn offsets(&self, utterance: usize) -> &[usize] {
        &self.offsets[utterance]
    }

    pub fn boundary_count(&self) -> usize {
        self.offsets.iter().map(Vec::len).sum()
    }

    /// Number of word tokens the hypothesis implies.
    pub fn token_count(&self) -> usize {
        self.boundary_count() + self.lengths.len()
    }

    pub fn is_valid_position(&self, pos: Position) -> bool {
        pos.utterance < self.lengths.len()
            && pos.offset >= 1
            && pos.offset < self.lengths[pos.utterance]
    }

    pub fn contains(&self, pos: Position) -> bool {
        pos.utterance < self.offsets.len()
            && self.offsets[pos.utterance]
                .binary_search(&pos.offset)
                .is_ok()
    }

    pub fn insert(&mut self, pos: Position) -> Result<()> {
        if !self.is_valid_position(pos) {
            return Err(Error::contract(format!(
                "position ({}, {}) is not an internal position",
                pos.utterance, pos.offset
            )));
        }
        let cuts = &mut self.offsets[pos.utterance];
        match cuts.binary_search(&pos.offset) {
            Ok(_) => Err(Error::contract(format!(
                "boundary ({}, {}) already present",
                pos.utterance, pos.offset
            ))),
            Err(at) => {
                cuts.insert(at, pos.offset);
                Ok(())
            }
        }
    }

    /// All boundaries, ordered by (utterance, offset).
    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.offsets
            .iter()
            .enumerate()
            .flat_map(|(u, cuts)| cuts.iter().map(move |&o| Position::new(u, o)))
    }

    /// Half-open phoneme spans of the words of one utterance.
    pub fn word_spans(&self, utterance: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let cuts = &self.offsets[utterance];
        let len = self.lengths[utterance];
        (0..=cuts.len()).map(move |i| {
            let start = if i == 0 { 0 } else { cuts[i - 1] };
            let end = if i == cuts.len() { len } else { cuts[i] };
            (start, end)
        })
    }

    /// Span of the word that currently contains `pos` strictly inside it.
    pub fn containing_word(&self, pos: Position) -> Option<(usize, usize)> {
        if !self.is_valid_position(pos) || self.contains(pos) {
            return None;
        }
        let cuts = &self.offsets[pos.utterance];
        let at = cuts.partition_point(|&o| o < pos.offset);
        let start = if at == 0 { 0 } else { cuts[at - 1] };
        let end = cuts.get(at).copied().unwrap_or(self.lengths[pos.utterance]);
        Some((start, end))
    }
}

/// Word type to token frequency, with aggregates kept in step for
/// description-length evaluation.
#[derive(Debug, Clone, Default)]
pub struct Lexicon {
    entries: HashMap<String, u64>,
    tokens: u64,
    total_len: u64,
    len_counts: BTreeMap<usize, usize>,
    sum_log_freq: f64,
    sum_freq_log_freq: f64,
}

fn freq_log_freq(f: u64) -> f64 {
    if f == 0 {
        0.0
    } else {
        let f = f as f64;
        f * f.log2()
    }
}

fn log_freq(f: u64) -> f64 {
    if f == 0 {
        0.0
    } else {
        (f as f64).log2()
    }
}

impl Lexicon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_token(&mut self, word: &str) {
        let len = word.chars().count();
        let f = self.entries.entry(word.to_owned()).or_insert(0);
        let old = *f;
        *f += 1;
        let new = *f;
        if old == 0 {
            self.total_len += len as u64;
            *self.len_counts.entry(len).or_insert(0) += 1;
        }
        self.tokens += 1;
        self.sum_log_freq += log_freq(new) - log_freq(old);
        self.sum_freq_log_freq += freq_log_freq(new) - freq_log_freq(old);
    }

    pub fn remove_token(&mut self, word: &str) -> Result<()> {
        let Some(f) = self.entries.get_mut(word) else {
            return Err(Error::contract(format!(
                "word `{word}` is not in the lexicon"
            )));
        };
        let old = *f;
        *f -= 1;
        let new = *f;
        if new == 0 {
            self.entries.remove(word);
            let len = word.chars().count();
            self.total_len -= len as u64;
            if let Some(c) = self.len_counts.get_mut(&len) {
                *c -= 1;
                if *c == 0 {
                    self.len_counts.remove(&len);
                }
            }
        }
        self.tokens -= 1;
        self.sum_log_freq += log_freq(new) - log_freq(old);
        self.sum_freq_log_freq += freq_log_freq(new) - freq_log_freq(old);
        Ok(())
    }

    pub fn frequency(&self, word: &str) -> u64 {
        self.entries.get(word).copied().unwrap_or(0)
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    /// `n`
    pub fn type_count(&self) -> usize {
        self.entries.len()
    }

    /// `m`
    pub fn token_count(&self) -> u64 {
        self.tokens
    }

    pub fn total_len(&self) -> u64 {
        self.total_len
    }

    pub fn max_len(&self) -> usize {
        self.len_counts.keys().next_back().copied().unwrap_or(0)
    }

    pub fn sum_log_freq(&self) -> f64 {
        self.sum_log_freq
    }

    pub fn sum_freq_log_freq(&self) -> f64 {
        self.sum_freq_log_freq
    }

    pub fn types(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    /// Entries sorted by word.
    pub fn sorted_entries(&self) -> Vec<(&str, u64)> {
        let mut v: Vec<_> = self.entries.iter().map(|(w, &f)| (w.as_str(), f)).collect();
        v.sort_unstable();
        v
    }

    pub fn stats(&self) -> LexiconStats {
        LexiconStats {
            types: self.entries.len() as u64,
            tokens: self.tokens,
            total_len: self.total_len,
            max_len: self.max_len() as u64,
            sum_log_freq: self.sum_log_freq,
            sum_freq_log_freq: self.sum_freq_log_freq,
        }
    }
}

impl PartialEq for Lexicon {
    /// Entries and integer aggregates must match exactly; the float sums
    /// within 1e-9 relative.
    fn eq(&self, other: &Self) -> bool {
        fn close(a: f64, b: f64) -> bool {
            (a - b).abs() <= 1e-9 * a.abs().max(b.abs()).max(1.0)
        }
        self.entries == other.entries
            && self.tokens == other.tokens
            && self.total_len == other.total_len
            && self.len_counts == other.len_counts
            && close(self.sum_log_freq, other.sum_log_freq)
            && close(self.sum_freq_log_freq, other.sum_freq_log_freq)
    }
}

fn word_of(phonemes: &[char], span: (usize, usize)) -> String {
    phonemes[span.0..span.1].iter().collect()
}

/// Tallies the words produced by splitting every utterance at its offsets.
pub fn build_lexicon(corpus: &Corpus, seg: &Segmentation) -> Lexicon {
    let mut lexicon = Lexicon::new();
    for (u, utt) in corpus.utterances().iter().enumerate() {
        for span in seg.word_spans(u) {
            lexicon.add_token(&word_of(utt.phonemes(), span));
        }
    }
    lexicon
}

/// Adds one or two boundaries, splitting the affected tokens and updating
/// the lexicon in place. Only the touched word types are revisited.
pub fn apply_insertion(
    corpus: &Corpus,
    seg: &mut Segmentation,
    lexicon: &mut Lexicon,
    points: &[Position],
) -> Result<()> {
    if points.is_empty() || points.len() > 2 {
        return Err(Error::contract(format!(
            "an insertion adds one or two points, got {}",
            points.len()
        )));
    }
    if points.len() == 2 && points[0] == points[1] {
        return Err(Error::contract("the two inserted points are identical"));
    }
    let mut spans = Vec::with_capacity(2);
    for &pos in points {
        if seg.contains(pos) {
            return Err(Error::contract(format!(
                "boundary ({}, {}) already present",
                pos.utterance, pos.offset
            )));
        }
        let span = seg.containing_word(pos).ok_or_else(|| {
            Error::contract(format!(
                "position ({}, {}) is not an internal position",
                pos.utterance, pos.offset
            ))
        })?;
        let key = (pos.utterance, span);
        if !spans.contains(&key) {
            spans.push(key);
        }
    }

    for &(u, span) in &spans {
        lexicon.remove_token(&word_of(corpus.utterances()[u].phonemes(), span))?;
    }
    for &pos in points {
        seg.insert(pos)?;
    }
    for &(u, (start, end)) in &spans {
        let phonemes = corpus.utterances()[u].phonemes();
        let mut left = start;
        for &cut in seg.offsets(u).iter().filter(|&&o| o > start && o < end) {
            lexicon.add_token(&word_of(phonemes, (left, cut)));
            left = cut;
        }
        lexicon.add_token(&word_of(phonemes, (left, end)));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, PhonemeInventory};

    fn kitty() -> Corpus {
        let inv = PhonemeInventory::from_classes("uiəɪY", "djsðktl");
        parse_corpus("du ju si ðə kɪti\nsi ðə kɪti\ndu ju lYk ðə kɪti\n", &inv).unwrap()
    }

    fn kitty_seg2(corpus: &Corpus) -> Segmentation {
        Segmentation::from_offsets(
            corpus.utterance_lengths(),
            vec![vec![3, 5, 7, 11], vec![3, 5], vec![2, 5, 7, 10]],
        )
        .unwrap()
    }

    #[test]
    fn segmentation_one_lexicon() {
        let corpus = kitty();
        let lex = build_lexicon(&corpus, corpus.gold().unwrap());
        assert_eq!(lex.type_count(), 6);
        assert_eq!(lex.token_count(), 13);
        assert_eq!(lex.frequency("ðə"), 3);
        assert_eq!(lex.frequency("du"), 2);
        assert_eq!(lex.frequency("kɪti"), 3);
        assert_eq!(lex.frequency("lYk"), 1);
        assert_eq!(lex.total_len(), 15);
        assert_eq!(lex.max_len(), 4);
    }

    #[test]
    fn segmentation_two_lexicon() {
        let corpus = kitty();
        let lex = build_lexicon(&corpus, &kitty_seg2(&corpus));
        assert_eq!(lex.type_count(), 12);
        let mut types: Vec<_> = lex.types().collect();
        types.sort_unstable();
        let mut expected = vec![
            "Yk", "du", "duj", "ðək", "ək", "əkɪt", "i", "ið", "ɪti", "jul", "sið", "us",
        ];
        expected.sort_unstable();
        assert_eq!(types, expected);
    }

    #[test]
    fn empty_segmentation_is_one_word_per_utterance() {
        let corpus = kitty();
        let lex = build_lexicon(&corpus, &Segmentation::for_corpus(&corpus));
        assert_eq!((lex.type_count(), lex.token_count()), (3, 3));
    }

    #[test]
    fn single_and_double_split() {
        let corpus = kitty();
        let mut seg = Segmentation::for_corpus(&corpus);
        let mut lex = build_lexicon(&corpus, &seg);
        apply_insertion(&corpus, &mut seg, &mut lex, &[Position::new(0, 2)]).unwrap();
        assert_eq!(lex.token_count(), 4);
        assert_eq!(lex.frequency("du"), 1);
        assert_eq!(lex.frequency("jusiðəkɪti"), 1);
        assert_eq!(lex, build_lexicon(&corpus, &seg));

        let mut seg = Segmentation::for_corpus(&corpus);
        let mut lex = build_lexicon(&corpus, &seg);
        apply_insertion(
            &corpus,
            &mut seg,
            &mut lex,
            &[Position::new(0, 4), Position::new(0, 2)],
        )
        .unwrap();
        assert_eq!(lex.token_count(), 5);
        assert_eq!(lex.frequency("ju"), 1);
        assert_eq!(lex, build_lexicon(&corpus, &seg));
    }

    #[test]
    fn split_across_utterances_shares_types() {
        let corpus = kitty();
        let mut seg = Segmentation::for_corpus(&corpus);
        let mut lex = build_lexicon(&corpus, &seg);
        apply_insertion(
            &corpus,
            &mut seg,
            &mut lex,
            &[Position::new(0, 6), Position::new(1, 2)],
        )
        .unwrap();
        assert_eq!(lex.frequency("ðəkɪti"), 2);
        assert_eq!(lex, build_lexicon(&corpus, &seg));
    }

    #[test]
    fn duplicate_point_is_rejected() {
        let corpus = kitty();
        let mut seg = Segmentation::for_corpus(&corpus);
        let mut lex = build_lexicon(&corpus, &seg);
        apply_insertion(&corpus, &mut seg, &mut lex, &[Position::new(0, 2)]).unwrap();
        let err = apply_insertion(&corpus, &mut seg, &mut lex, &[Position::new(0, 2)]);
        assert!(matches!(err, Err(Error::Contract(_))));
        let err = apply_insertion(
            &corpus,
            &mut seg,
            &mut lex,
            &[Position::new(1, 3), Position::new(1, 3)],
        );
        assert!(matches!(err, Err(Error::Contract(_))));
        assert!(seg.insert(Position::new(0, 12)).is_err());
        assert!(seg.insert(Position::new(0, 0)).is_err());
    }

    #[test]
    fn containing_word_spans() {
        let seg = Segmentation::from_offsets(vec![8], vec![vec![3, 5]]).unwrap();
        assert_eq!(seg.containing_word(Position::new(0, 1)), Some((0, 3)));
        assert_eq!(seg.containing_word(Position::new(0, 4)), Some((3, 5)));
        assert_eq!(seg.containing_word(Position::new(0, 7)), Some((5, 8)));
        assert_eq!(seg.containing_word(Position::new(0, 3)), None);
        let spans: Vec<_> = seg.word_spans(0).collect();
        assert_eq!(spans, vec![(0, 3), (3, 5), (5, 8)]);
    }

    #[test]
    fn from_offsets_validates() {
        assert!(Segmentation::from_offsets(vec![3], vec![vec![1, 1]]).is_err());
        assert!(Segmentation::from_offsets(vec![3], vec![vec![3]]).is_err());
        assert!(Segmentation::from_offsets(vec![3], vec![]).is_err());
        let seg = Segmentation::from_offsets(vec![4], vec![vec![3, 1]]).unwrap();
        assert_eq!(seg.offsets(0), &[1, 3]);
    }
}
