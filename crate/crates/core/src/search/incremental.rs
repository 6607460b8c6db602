//! Committed search state with O(1) candidate evaluation.
//!
//! Every substring of every utterance is interned once, so a word type is a
//! dense integer id and its frequency an array slot. Splitting one token
//! touches at most three types; a two-point candidate at most six. A
//! candidate's description length is the committed [`LexiconStats`] plus the
//! delta of those few types, fed through a [`DlKernel`].

use std::collections::HashMap;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::hypothesis::{Position, Segmentation};
use crate::mdl::{description_length, DLReport, DlKernel, LexiconStats};
use crate::phonotactics::ClusterRules;

/// Two description lengths closer than this are tied.
pub const TIE_TOLERANCE: f64 = 1e-9;

struct WordTable {
    base: Vec<usize>,
    lens: Vec<usize>,
    ids: Vec<u32>,
    word_len: Vec<u32>,
    legal: Vec<bool>,
}

impl WordTable {
    fn build(corpus: &Corpus, rules: Option<&ClusterRules>) -> Self {
        let inventory = corpus.inventory();
        let max_final = rules
            .map(|r| {
                r.final_clusters()
                    .iter()
                    .map(|c| c.chars().count())
                    .max()
                    .unwrap_or(0)
            })
            .unwrap_or(0);
        let mut base = Vec::with_capacity(corpus.utterances().len());
        let mut lens = Vec::with_capacity(corpus.utterances().len());
        let mut total = 0usize;
        for utt in corpus.utterances() {
            base.push(total);
            lens.push(utt.len());
            total += utt.len() * utt.len();
        }
        let mut ids = vec![u32::MAX; total];
        let mut word_len = Vec::new();
        let mut legal = Vec::new();
        let mut children: HashMap<(u32, char), u32> = HashMap::new();
        const ROOT: u32 = u32::MAX;

        for (u, utt) in corpus.utterances().iter().enumerate() {
            let ph = utt.phonemes();
            let l = ph.len();
            for s in 0..l {
                let mut node = ROOT;
                let mut onset_ok = None;
                let mut last_vowel = None;
                for e in s + 1..=l {
                    let c = ph[e - 1];
                    if inventory.is_vowel(c) {
                        last_vowel = Some(e - 1);
                        if onset_ok.is_none() {
                            onset_ok = Some(rules.is_none_or(|r| {
                                r.allows_initial(&ph[s..e - 1].iter().collect::<String>())
                            }));
                        }
                    }
                    let next = word_len.len() as u32;
                    let id = *children.entry((node, c)).or_insert_with(|| {
                        word_len.push((e - s) as u32);
                        let ok = match (rules, onset_ok, last_vowel) {
                            (None, _, _) => true,
                            (Some(_), None, _) | (Some(_), _, None) => false,
                            (Some(r), Some(onset), Some(lv)) => {
                                let coda = &ph[lv + 1..e];
                                onset
                                    && coda.len() <= max_final
                                    && r.allows_final(&coda.iter().collect::<String>())
                            }
                        };
                        legal.push(ok);
                        next
                    });
                    ids[base[u] + s * l + (e - 1)] = id;
                    node = id;
                }
            }
        }
        Self {
            base,
            lens,
            ids,
            word_len,
            legal,
        }
    }

    #[inline]
    fn id(&self, u: usize, start: usize, end: usize) -> u32 {
        self.ids[self.base[u] + start * self.lens[u] + (end - 1)]
    }

    fn count(&self) -> usize {
        self.word_len.len()
    }
}

#[derive(Default, Clone, Copy)]
struct Delta {
    ids: [u32; 6],
    diff: [i32; 6],
    len: usize,
}

impl Delta {
    #[inline]
    fn push(&mut self, id: u32, d: i32) {
        for k in 0..self.len {
            if self.ids[k] == id {
                self.diff[k] += d;
                return;
            }
        }
        self.ids[self.len] = id;
        self.diff[self.len] = d;
        self.len += 1;
    }
}

/// The best move found in one greedy step.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub points: Vec<Position>,
    pub total_bits: f64,
    /// Both points split the same token.
    pub same_word: bool,
}

pub struct IncrementalState<'a> {
    corpus: &'a Corpus,
    rules: Option<&'a ClusterRules>,
    kernel: DlKernel,
    freq_log_freq: Vec<f64>,
    words: WordTable,
    freq: Vec<u32>,
    len_counts: Vec<u32>,
    top_lens: [u32; 3],
    stats: LexiconStats,
    seg: Segmentation,
    point_base: Vec<usize>,
    positions: Vec<Position>,
    token: Vec<(u32, u32)>,
    committed: Vec<bool>,
    valid: Vec<bool>,
}

impl<'a> IncrementalState<'a> {
    /// Starts from the unsegmented hypothesis.
    pub fn new(corpus: &'a Corpus, rules: Option<&'a ClusterRules>) -> Self {
        let words = WordTable::build(corpus, rules);
        let total = corpus.phoneme_total();
        let kernel = DlKernel::new(total, corpus.phoneme_count());
        let freq_log_freq = (0..=total + 2)
            .map(|f| {
                if f == 0 {
                    0.0
                } else {
                    f as f64 * (f as f64).log2()
                }
            })
            .collect();
        let max_utt = corpus
            .utterances()
            .iter()
            .map(|u| u.len())
            .max()
            .unwrap_or(0);

        let mut point_base = Vec::with_capacity(corpus.utterances().len());
        let mut positions = Vec::with_capacity(corpus.candidate_count());
        let mut token = Vec::with_capacity(corpus.candidate_count());
        for (u, utt) in corpus.utterances().iter().enumerate() {
            point_base.push(positions.len());
            for o in 1..utt.len() {
                positions.push(Position::new(u, o));
                token.push((0, utt.len() as u32));
            }
        }

        let mut state = Self {
            corpus,
            rules,
            kernel,
            freq_log_freq,
            freq: vec![0; words.count()],
            words,
            len_counts: vec![0; max_utt + 1],
            top_lens: [0; 3],
            stats: LexiconStats::default(),
            seg: Segmentation::for_corpus(corpus),
            point_base,
            valid: vec![false; positions.len()],
            committed: vec![false; positions.len()],
            positions,
            token,
        };
        for (u, utt) in corpus.utterances().iter().enumerate() {
            let id = state.words.id(u, 0, utt.len());
            state.add_type_tokens(id, 1);
        }
        state.refresh_top_lens();
        for g in 0..state.positions.len() {
            state.valid[g] = state.point_is_legal(g);
        }
        state
    }

    fn add_type_tokens(&mut self, id: u32, d: i32) {
        let old = self.freq[id as usize] as i64;
        let new = old + d as i64;
        debug_assert!(new >= 0);
        let len = self.words.word_len[id as usize];
        if old == 0 && new > 0 {
            self.stats.types += 1;
            self.stats.total_len += len as u64;
            self.len_counts[len as usize] += 1;
        } else if old > 0 && new == 0 {
            self.stats.types -= 1;
            self.stats.total_len -= len as u64;
            self.len_counts[len as usize] -= 1;
        }
        self.stats.tokens = (self.stats.tokens as i64 + d as i64) as u64;
        self.stats.sum_log_freq +=
            self.kernel.log2_count(new as u64) - self.kernel.log2_count(old as u64);
        self.stats.sum_freq_log_freq +=
            self.freq_log_freq[new as usize] - self.freq_log_freq[old as usize];
        self.freq[id as usize] = new as u32;
    }

    fn refresh_top_lens(&mut self) {
        self.top_lens = [0; 3];
        let mut k = 0;
        for l in (1..self.len_counts.len()).rev() {
            if self.len_counts[l] > 0 {
                self.top_lens[k] = l as u32;
                k += 1;
                if k == 3 {
                    break;
                }
            }
        }
        self.stats.max_len = self.top_lens[0] as u64;
    }

    fn point_is_legal(&self, g: usize) -> bool {
        if self.committed[g] {
            return false;
        }
        let Some(_) = self.rules else {
            return true;
        };
        let pos = self.positions[g];
        let (s, e) = self.token[g];
        self.words.legal[self.words.id(pos.utterance, s as usize, pos.offset) as usize]
            && self.words.legal[self.words.id(pos.utterance, pos.offset, e as usize) as usize]
    }

    pub fn corpus(&self) -> &'a Corpus {
        self.corpus
    }

    pub fn segmentation(&self) -> &Segmentation {
        &self.seg
    }

    pub fn stats(&self) -> LexiconStats {
        self.stats
    }

    pub fn report(&self) -> DLReport {
        description_length(&self.stats, self.corpus.phoneme_count())
    }

    pub fn global_index(&self, pos: Position) -> Option<usize> {
        let utt = self.corpus.utterances().get(pos.utterance)?;
        (pos.offset >= 1 && pos.offset < utt.len())
            .then(|| self.point_base[pos.utterance] + pos.offset - 1)
    }

    pub fn is_valid(&self, pos: Position) -> bool {
        self.global_index(pos).is_some_and(|g| self.valid[g])
    }

    /// Currently valid insertion points, ordered by (utterance, offset).
    pub fn valid_points(&self) -> Vec<Position> {
        self.valid_indices()
            .into_iter()
            .map(|g| self.positions[g])
            .collect()
    }

    fn valid_indices(&self) -> Vec<usize> {
        (0..self.positions.len())
            .filter(|&g| self.valid[g])
            .collect()
    }

    pub fn has_valid_points(&self) -> bool {
        self.valid.iter().any(|&v| v)
    }

    /// Token delta of a candidate over valid points, or `None` when the pair
    /// is jointly illegal.
    #[inline]
    fn delta(&self, gi: usize, gj: Option<usize>) -> Option<Delta> {
        let mut d = Delta::default();
        let pi = self.positions[gi];
        let (s, e) = self.token[gi];
        let (s, e) = (s as usize, e as usize);
        let u = pi.utterance;
        match gj {
            Some(gj) if self.positions[gj].utterance == u && self.token[gj] == self.token[gi] => {
                let (o1, o2) = {
                    let o2 = self.positions[gj].offset;
                    (pi.offset.min(o2), pi.offset.max(o2))
                };
                let mid = self.words.id(u, o1, o2);
                if self.rules.is_some() && !self.words.legal[mid as usize] {
                    return None;
                }
                d.push(self.words.id(u, s, e), -1);
                d.push(self.words.id(u, s, o1), 1);
                d.push(mid, 1);
                d.push(self.words.id(u, o2, e), 1);
            }
            other => {
                d.push(self.words.id(u, s, e), -1);
                d.push(self.words.id(u, s, pi.offset), 1);
                d.push(self.words.id(u, pi.offset, e), 1);
                if let Some(gj) = other {
                    let pj = self.positions[gj];
                    let (s2, e2) = self.token[gj];
                    let (s2, e2) = (s2 as usize, e2 as usize);
                    d.push(self.words.id(pj.utterance, s2, e2), -1);
                    d.push(self.words.id(pj.utterance, s2, pj.offset), 1);
                    d.push(self.words.id(pj.utterance, pj.offset, e2), 1);
                }
            }
        }
        Some(d)
    }

    #[inline]
    fn stats_after(&self, delta: &Delta, added_tokens: u64) -> LexiconStats {
        let mut st = self.stats;
        st.tokens += added_tokens;
        let mut removed = [(0u32, 0i32); 6];
        let mut n_removed = 0;
        let mut max_added = 0u32;
        for k in 0..delta.len {
            let d = delta.diff[k];
            if d == 0 {
                continue;
            }
            let id = delta.ids[k] as usize;
            let old = self.freq[id] as i64;
            let new = old + d as i64;
            st.sum_log_freq +=
                self.kernel.log2_count(new as u64) - self.kernel.log2_count(old as u64);
            st.sum_freq_log_freq +=
                self.freq_log_freq[new as usize] - self.freq_log_freq[old as usize];
            let len = self.words.word_len[id];
            if old == 0 {
                st.types += 1;
                st.total_len += len as u64;
                max_added = max_added.max(len);
            } else if new == 0 {
                st.types -= 1;
                st.total_len -= len as u64;
                removed[n_removed] = (len, -1);
                n_removed += 1;
            }
        }
        let mut max_len = 0u32;
        for &l in &self.top_lens {
            if l == 0 {
                break;
            }
            let gone: i32 = removed[..n_removed]
                .iter()
                .filter(|r| r.0 == l)
                .map(|r| r.1)
                .sum();
            if self.len_counts[l as usize] as i32 + gone > 0 {
                max_len = l;
                break;
            }
        }
        st.max_len = max_len.max(max_added) as u64;
        st
    }

    #[inline]
    fn eval_indices(&self, gi: usize, gj: Option<usize>) -> Option<f64> {
        let d = self.delta(gi, gj)?;
        let st = self.stats_after(&d, if gj.is_some() { 2 } else { 1 });
        Some(self.kernel.total(&st))
    }

    fn indices_for(&self, points: &[Position]) -> Result<(usize, Option<usize>)> {
        let lookup = |p: Position| {
            self.global_index(p)
                .filter(|&g| self.valid[g])
                .ok_or_else(|| {
                    Error::contract(format!(
                        "({}, {}) is not a valid insertion point",
                        p.utterance, p.offset
                    ))
                })
        };
        match points {
            [a] => Ok((lookup(*a)?, None)),
            [a, b] if a != b => {
                let (ga, gb) = (lookup(*a)?, lookup(*b)?);
                Ok((ga.min(gb), Some(ga.max(gb))))
            }
            _ => Err(Error::contract(
                "a candidate adds one or two distinct points",
            )),
        }
    }

    /// Lexicon aggregates the hypothesis would have after adding `points`.
    pub fn candidate_stats(&self, points: &[Position]) -> Result<LexiconStats> {
        let (gi, gj) = self.indices_for(points)?;
        let d = self
            .delta(gi, gj)
            .ok_or_else(|| Error::contract("the two points are not jointly legal"))?;
        Ok(self.stats_after(&d, points.len() as u64))
    }

    pub fn evaluate(&self, points: &[Position]) -> Result<DLReport> {
        let st = self.candidate_stats(points)?;
        Ok(description_length(&st, self.corpus.phoneme_count()))
    }

    /// Commits one or two valid points.
    pub fn commit(&mut self, points: &[Position]) -> Result<()> {
        let (gi, gj) = self.indices_for(points)?;
        let d = self
            .delta(gi, gj)
            .ok_or_else(|| Error::contract("the two points are not jointly legal"))?;
        let mut spans = vec![(self.positions[gi].utterance, self.token[gi])];
        if let Some(gj) = gj {
            let key = (self.positions[gj].utterance, self.token[gj]);
            if key != spans[0] {
                spans.push(key);
            }
        }
        for k in 0..d.len {
            if d.diff[k] != 0 {
                self.add_type_tokens(d.ids[k], d.diff[k]);
            }
        }
        // tokens were counted per type change; the net is the point count
        debug_assert_eq!(
            self.stats.tokens as usize,
            self.seg.token_count() + points.len()
        );
        self.refresh_top_lens();
        for &p in points {
            self.seg.insert(p)?;
        }
        for (u, (s, e)) in spans {
            let cuts: Vec<usize> = self
                .seg
                .offsets(u)
                .iter()
                .copied()
                .filter(|&o| o > s as usize && o < e as usize)
                .collect();
            let mut left = s as usize;
            let mut next_cut = 0;
            for o in s as usize + 1..e as usize {
                let g = self.point_base[u] + o - 1;
                if next_cut < cuts.len() && cuts[next_cut] == o {
                    self.committed[g] = true;
                    self.valid[g] = false;
                    left = o;
                    next_cut += 1;
                    continue;
                }
                let right = cuts.get(next_cut).copied().unwrap_or(e as usize);
                self.token[g] = (left as u32, right as u32);
            }
            for o in s as usize + 1..e as usize {
                let g = self.point_base[u] + o - 1;
                self.valid[g] = self.point_is_legal(g);
            }
        }
        Ok(())
    }

    /// Evaluates every single valid point and every unordered pair of valid
    /// points, and returns the minimum. Ties within [`TIE_TOLERANCE`] of the
    /// minimum go to single points, then to the lexicographically smallest
    /// coordinates, so the choice does not depend on evaluation order.
    pub fn best_candidate(&self, max_points: usize) -> Option<Candidate> {
        let valid = self.valid_indices();
        if valid.is_empty() {
            return None;
        }
        let rows: Vec<Vec<f64>> = valid
            .par_iter()
            .enumerate()
            .map(|(ii, &gi)| {
                let rest = if max_points >= 2 {
                    &valid[ii + 1..]
                } else {
                    &[][..]
                };
                let mut row = Vec::with_capacity(rest.len() + 1);
                row.push(self.eval_indices(gi, None).unwrap_or(f64::INFINITY));
                row.extend(
                    rest.iter()
                        .map(|&gj| self.eval_indices(gi, Some(gj)).unwrap_or(f64::INFINITY)),
                );
                row
            })
            .collect();
        let min = rows
            .par_iter()
            .map(|row| row.iter().copied().fold(f64::INFINITY, f64::min))
            .reduce(|| f64::INFINITY, f64::min);
        if !min.is_finite() {
            return None;
        }
        let threshold = min + TIE_TOLERANCE;
        if let Some(ii) = rows.iter().position(|row| row[0] <= threshold) {
            return Some(Candidate {
                points: vec![self.positions[valid[ii]]],
                total_bits: rows[ii][0],
                same_word: false,
            });
        }
        for (ii, row) in rows.iter().enumerate() {
            if let Some(k) = row[1..].iter().position(|&v| v <= threshold) {
                let (gi, gj) = (valid[ii], valid[ii + 1 + k]);
                let (pi, pj) = (self.positions[gi], self.positions[gj]);
                return Some(Candidate {
                    points: vec![pi, pj],
                    total_bits: row[1 + k],
                    same_word: pi.utterance == pj.utterance && self.token[gi] == self.token[gj],
                });
            }
        }
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{parse_corpus, PhonemeInventory};
    use crate::hypothesis::build_lexicon;
    use crate::mdl::total_dl;
    use crate::phonotactics::ValidPointSet;

    fn kitty() -> Corpus {
        let inv = PhonemeInventory::from_classes("uiəɪY", "djsðktl");
        parse_corpus("du ju si ðə kɪti\nsi ðə kɪti\ndu ju lYk ðə kɪti\n", &inv).unwrap()
    }

    #[test]
    fn initial_state_matches_scratch() {
        let corpus = kitty();
        let state = IncrementalState::new(&corpus, None);
        let scratch = build_lexicon(&corpus, state.segmentation()).stats();
        assert_eq!(state.stats().types, scratch.types);
        assert_eq!(state.stats().max_len, scratch.max_len);
        assert_eq!(state.valid_points().len(), 30);
    }

    #[test]
    fn candidates_match_scratch_along_gold_path() {
        let corpus = kitty();
        let mut state = IncrementalState::new(&corpus, None);
        let gold: Vec<_> = corpus.gold().unwrap().positions().collect();
        for pair in gold.chunks(2) {
            for cand in state.valid_points().into_iter().take(8) {
                let mut seg = state.segmentation().clone();
                seg.insert(cand).unwrap();
                let scratch = total_dl(&corpus, &seg).total_bits;
                let inc = state.evaluate(&[cand]).unwrap().total_bits;
                assert!((scratch - inc).abs() < 1e-9);
            }
            state.commit(pair).unwrap();
            let scratch = total_dl(&corpus, state.segmentation());
            assert!((scratch.total_bits - state.report().total_bits).abs() < 1e-9);
        }
        assert_eq!(state.segmentation(), corpus.gold().unwrap());
    }

    #[test]
    fn shared_types_across_tokens_net_out() {
        let inv = PhonemeInventory::from_classes("a", "b");
        let corpus = parse_corpus("ab\nabab", &inv).unwrap();
        let state = IncrementalState::new(&corpus, None);
        // splitting "abab" at 2 creates two copies of the existing "ab"
        let pts = [Position::new(1, 2)];
        let st = state.candidate_stats(&pts).unwrap();
        assert_eq!((st.types, st.tokens, st.max_len), (1, 3, 2));
        let mut seg = state.segmentation().clone();
        seg.insert(pts[0]).unwrap();
        assert!(
            (state.evaluate(&pts).unwrap().total_bits - total_dl(&corpus, &seg).total_bits).abs()
                < 1e-9
        );
        // a pair whose child equals the other parent
        let pts = [Position::new(0, 1), Position::new(1, 2)];
        let mut seg = state.segmentation().clone();
        for p in pts {
            seg.insert(p).unwrap();
        }
        assert!(
            (state.evaluate(&pts).unwrap().total_bits - total_dl(&corpus, &seg).total_bits).abs()
                < 1e-9
        );
    }

    #[test]
    fn phonotactic_validity_tracks_reference() {
        let inv = PhonemeInventory::from_classes("iæ", "grnd");
        let rules = ClusterRules::new(["gr", "n"], ["n", "nd"]);
        let corpus = parse_corpus("grinænd\ngrinænd", &inv).unwrap();
        let mut state = IncrementalState::new(&corpus, Some(&rules));
        let reference = ValidPointSet::compute(&corpus, state.segmentation(), Some(&rules));
        assert_eq!(state.valid_points(), reference.iter().collect::<Vec<_>>());
        state.commit(&[Position::new(0, 4)]).unwrap();
        let reference = ValidPointSet::compute(&corpus, state.segmentation(), Some(&rules));
        assert_eq!(state.valid_points(), reference.iter().collect::<Vec<_>>());
        assert!(!state.is_valid(Position::new(0, 3)));
        assert!(state.commit(&[Position::new(0, 3)]).is_err());
    }

    #[test]
    fn joint_legality_of_same_word_pairs() {
        let inv = PhonemeInventory::from_classes("a", "b");
        let rules = ClusterRules::new(["b"], ["b"]);
        let corpus = parse_corpus("abab", &inv).unwrap();
        let state = IncrementalState::new(&corpus, Some(&rules));
        assert!(state.is_valid(Position::new(0, 1)));
        assert!(state.is_valid(Position::new(0, 2)));
        // a|b|ab leaves "b" without a vowel
        assert!(state
            .evaluate(&[Position::new(0, 1), Position::new(0, 2)])
            .is_err());
    }

    #[test]
    fn best_candidate_is_order_independent_minimum() {
        let corpus = kitty();
        let state = IncrementalState::new(&corpus, None);
        let best = state.best_candidate(2).unwrap();
        let mut all = Vec::new();
        let pts = state.valid_points();
        for (i, &a) in pts.iter().enumerate() {
            all.push((state.evaluate(&[a]).unwrap().total_bits, vec![a]));
            for &b in &pts[i + 1..] {
                all.push((state.evaluate(&[a, b]).unwrap().total_bits, vec![a, b]));
            }
        }
        let min = all.iter().map(|c| c.0).fold(f64::INFINITY, f64::min);
        assert!((best.total_bits - min).abs() <= TIE_TOLERANCE);
        let chosen = all
            .iter()
            .filter(|c| c.0 <= min + TIE_TOLERANCE)
            .min_by(|a, b| a.1.len().cmp(&b.1.len()).then(a.1.cmp(&b.1)))
            .unwrap();
        assert_eq!(best.points, chosen.1);
    }
}
