//! Word-boundary phonotactics: legal word-initial and word-final consonant
//! clusters, plus the requirement that every word contains a vowel.
//!
//! Legality of a boundary is judged on the two words it would create inside
//! the current hypothesis, so committing one boundary can invalidate points
//! nearby (`gri.n.ænd` loses the point after `i` once `grin|ænd` is in).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use crate::corpus::{Corpus, PhonemeInventory};
use crate::error::{Error, Result};
use crate::hypothesis::{Position, Segmentation};

/// Legal word-initial and word-final consonant clusters.
///
/// The empty cluster is always a member of both sets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterRules {
    initial: BTreeSet<String>,
    final_: BTreeSet<String>,
}

impl Default for ClusterRules {
    fn default() -> Self {
        Self::new(Vec::<String>::new(), Vec::<String>::new())
    }
}

impl ClusterRules {
    pub fn new<I, F, S, T>(initial: I, final_: F) -> Self
    where
        I: IntoIterator<Item = S>,
        F: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut initial: BTreeSet<String> = initial.into_iter().map(Into::into).collect();
        let mut final_: BTreeSet<String> = final_.into_iter().map(Into::into).collect();
        initial.insert(String::new());
        final_.insert(String::new());
        Self { initial, final_ }
    }

    /// Checks that every cluster consists of consonants only.
    pub fn validate(&self, inventory: &PhonemeInventory) -> Result<()> {
        for cluster in self.initial.iter().chain(&self.final_) {
            if let Some(c) = cluster.chars().find(|&c| !inventory.is_consonant(c)) {
                return Err(Error::contract(format!(
                    "cluster `{cluster}` contains `{c}`, which is not a consonant"
                )));
            }
        }
        Ok(())
    }

    pub fn initial_clusters(&self) -> &BTreeSet<String> {
        &self.initial
    }

    pub fn final_clusters(&self) -> &BTreeSet<String> {
        &self.final_
    }

    pub fn allows_initial(&self, cluster: &str) -> bool {
        self.initial.contains(cluster)
    }

    pub fn allows_final(&self, cluster: &str) -> bool {
        self.final_.contains(cluster)
    }

    /// Parses a rules file: an `INITIAL:` and a `FINAL:` section, one cluster
    /// per line, `-` for the empty cluster, `#` comments.
    pub fn parse(text: &str, inventory: &PhonemeInventory) -> Result<Self> {
        enum Section {
            None,
            Initial,
            Final,
        }
        let mut section = Section::None;
        let mut initial = Vec::new();
        let mut final_ = Vec::new();
        let (mut saw_initial, mut saw_final) = (false, false);
        for (idx, raw) in text.lines().enumerate() {
            let line_no = idx + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line {
                "INITIAL:" => {
                    section = Section::Initial;
                    saw_initial = true;
                    continue;
                }
                "FINAL:" => {
                    section = Section::Final;
                    saw_final = true;
                    continue;
                }
                _ => {}
            }
            let cluster = if line == "-" {
                String::new()
            } else {
                line.to_owned()
            };
            if let Some((col, c)) = cluster
                .chars()
                .enumerate()
                .find(|&(_, c)| !inventory.is_consonant(c))
            {
                let column = raw.find(line).map_or(0, |b| raw[..b].chars().count()) + col + 1;
                return Err(Error::parse(
                    line_no,
                    column,
                    format!("`{c}` is not a consonant in the inventory"),
                ));
            }
            match section {
                Section::Initial => initial.push(cluster),
                Section::Final => final_.push(cluster),
                Section::None => {
                    return Err(Error::parse(
                        line_no,
                        1,
                        "cluster before any INITIAL: or FINAL: header",
                    ))
                }
            }
        }
        if !saw_initial || !saw_final {
            return Err(Error::parse(
                1,
                1,
                "rules file needs both INITIAL: and FINAL: sections",
            ));
        }
        Ok(Self::new(initial, final_))
    }

    /// Serializes in the rules file format. Clusters are sorted.
    pub fn to_rules_file(&self) -> String {
        let mut out = String::new();
        for (header, set) in [("INITIAL:", &self.initial), ("FINAL:", &self.final_)] {
            out.push_str(header);
            out.push('\n');
            for cluster in set {
                let shown = if cluster.is_empty() { "-" } else { cluster };
                let _ = writeln!(out, "{shown}");
            }
        }
        out
    }
}

fn leading_run<'a>(word: &'a [char], inventory: &PhonemeInventory) -> &'a [char] {
    let end = word
        .iter()
        .position(|&c| inventory.is_vowel(c))
        .unwrap_or(word.len());
    &word[..end]
}

fn trailing_run<'a>(word: &'a [char], inventory: &PhonemeInventory) -> &'a [char] {
    let start = word
        .iter()
        .rposition(|&c| inventory.is_vowel(c))
        .map_or(0, |i| i + 1);
    &word[start..]
}

/// True iff the word has a vowel and both of its edge consonant runs are
/// licensed.
pub fn is_legal_word(word: &[char], rules: &ClusterRules, inventory: &PhonemeInventory) -> bool {
    if !word.iter().any(|&c| inventory.is_vowel(c)) {
        return false;
    }
    let onset: String = leading_run(word, inventory).iter().collect();
    let coda: String = trailing_run(word, inventory).iter().collect();
    rules.allows_initial(&onset) && rules.allows_final(&coda)
}

/// Offsets of `utterance` where a boundary could be inserted given the
/// boundaries in `current_offsets` (sorted).
pub fn legal_points(
    utterance: &[char],
    current_offsets: &[usize],
    rules: &ClusterRules,
    inventory: &PhonemeInventory,
) -> Vec<usize> {
    let mut out = Vec::new();
    let mut start = 0;
    for &end in current_offsets
        .iter()
        .chain(std::iter::once(&utterance.len()))
    {
        legal_points_in_word(utterance, start, end, rules, inventory, &mut out);
        start = end;
    }
    out
}

fn legal_points_in_word(
    utterance: &[char],
    start: usize,
    end: usize,
    rules: &ClusterRules,
    inventory: &PhonemeInventory,
    out: &mut Vec<usize>,
) {
    for cut in start + 1..end {
        if is_legal_word(&utterance[start..cut], rules, inventory)
            && is_legal_word(&utterance[cut..end], rules, inventory)
        {
            out.push(cut);
        }
    }
}

/// The currently legal insertion offsets of every utterance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidPointSet {
    points: Vec<BTreeSet<usize>>,
}

impl ValidPointSet {
    /// Recomputes everything. With `rules = None` every uncommitted internal
    /// position is valid.
    pub fn compute(corpus: &Corpus, seg: &Segmentation, rules: Option<&ClusterRules>) -> Self {
        let points = corpus
            .utterances()
            .iter()
            .enumerate()
            .map(|(u, utt)| match rules {
                Some(rules) => {
                    legal_points(utt.phonemes(), seg.offsets(u), rules, corpus.inventory())
                        .into_iter()
                        .collect()
                }
                None => (1..utt.len())
                    .filter(|&o| !seg.contains(Position::new(u, o)))
                    .collect(),
            })
            .collect();
        Self { points }
    }

    pub fn utterance(&self, u: usize) -> &BTreeSet<usize> {
        &self.points[u]
    }

    pub fn contains(&self, pos: Position) -> bool {
        self.points
            .get(pos.utterance)
            .is_some_and(|s| s.contains(&pos.offset))
    }

    pub fn len(&self) -> usize {
        self.points.iter().map(BTreeSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.points.iter().all(BTreeSet::is_empty)
    }

    /// Ordered by (utterance, offset).
    pub fn iter(&self) -> impl Iterator<Item = Position> + '_ {
        self.points
            .iter()
            .enumerate()
            .flat_map(|(u, s)| s.iter().map(move |&o| Position::new(u, o)))
    }

    /// Call after `inserted` has been committed to `seg`. Re-examines only the
    /// offsets inside the two words created by the insertion.
    pub fn refresh_after_insertion(
        &mut self,
        corpus: &Corpus,
        seg: &Segmentation,
        inserted: Position,
        rules: Option<&ClusterRules>,
    ) {
        let u = inserted.utterance;
        let set = &mut self.points[u];
        set.remove(&inserted.offset);
        let Some(rules) = rules else {
            return;
        };
        let phonemes = corpus.utterances()[u].phonemes();
        let cuts = seg.offsets(u);
        let at = cuts.partition_point(|&o| o < inserted.offset);
        let start = if at == 0 { 0 } else { cuts[at - 1] };
        let end = cuts.get(at + 1).copied().unwrap_or(phonemes.len());
        let stale: Vec<usize> = set.range(start + 1..end).copied().collect();
        for o in stale {
            set.remove(&o);
        }
        let mut fresh = Vec::new();
        legal_points_in_word(
            phonemes,
            start,
            inserted.offset,
            rules,
            corpus.inventory(),
            &mut fresh,
        );
        legal_points_in_word(
            phonemes,
            inserted.offset,
            end,
            rules,
            corpus.inventory(),
            &mut fresh,
        );
        set.extend(fresh);
    }
}

/// Result of reading clusters off a gold segmentation.
#[derive(Debug, Clone)]
pub struct ExtractedRules {
    pub rules: ClusterRules,
    /// Gold words without a vowel. They contribute no clusters.
    pub vowelless_words: Vec<String>,
}

/// Collects the maximal leading and trailing consonant runs of every gold
/// word, which yields the most restrictive rules under which every gold
/// boundary is still legal.
pub fn extract_rules(corpus: &Corpus) -> Result<ExtractedRules> {
    let gold = corpus
        .gold()
        .ok_or_else(|| Error::contract("rule extraction needs a gold segmentation"))?;
    let inventory = corpus.inventory();
    let mut initial = BTreeSet::new();
    let mut final_ = BTreeSet::new();
    let mut vowelless = BTreeSet::new();
    for (u, utt) in corpus.utterances().iter().enumerate() {
        for (s, e) in gold.word_spans(u) {
            let word = &utt.phonemes()[s..e];
            if !word.iter().any(|&c| inventory.is_vowel(c)) {
                vowelless.insert(word.iter().collect::<String>());
                continue;
            }
            initial.insert(leading_run(word, inventory).iter().collect::<String>());
            final_.insert(trailing_run(word, inventory).iter().collect::<String>());
        }
    }
    Ok(ExtractedRules {
        rules: ClusterRules::new(initial, final_),
        vowelless_words: vowelless.into_iter().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;

    fn inventory() -> PhonemeInventory {
        PhonemeInventory::from_classes("aæɑɔəεeiɪouʊ", "bdfghjklmnprstvwzðŋʃ")
    }

    fn english_like() -> ClusterRules {
        ClusterRules::new(
            ["w", "m", "t", "h", "b", "k", "p", "sp", "gr", "n", "spl"],
            ["nt", "t", "lp", "ts", "z", "n", "nd"],
        )
    }

    fn chars(s: &str) -> Vec<char> {
        s.chars().collect()
    }

    #[test]
    fn vowel_requirement_and_clusters() {
        let inv = inventory();
        let rules = english_like();
        assert!(!is_legal_word(&chars("n"), &rules, &inv));
        assert!(!is_legal_word(&chars("ntmi"), &rules, &inv));
        assert!(is_legal_word(&chars("ænd"), &rules, &inv));
        assert!(is_legal_word(&chars("want"), &rules, &inv));
    }

    #[test]
    fn want_me_to_help_baby() {
        let pts = legal_points(
            &chars("wantmituhεlpbebi"),
            &[],
            &english_like(),
            &inventory(),
        );
        assert_eq!(pts, vec![4, 6, 7, 8, 12, 14]);
    }

    #[test]
    fn cats_paws_has_two_points() {
        let pts = legal_points(&chars("kætspɔz"), &[], &english_like(), &inventory());
        assert_eq!(pts, vec![3, 4]);
    }

    #[test]
    fn empty_rules_need_cluster_free_sides() {
        let rules = ClusterRules::default();
        let inv = inventory();
        assert_eq!(legal_points(&chars("aia"), &[], &rules, &inv), vec![1, 2]);
        // "ab|a": left word ends in b, which needs a final cluster.
        assert_eq!(
            legal_points(&chars("aba"), &[], &rules, &inv),
            Vec::<usize>::new()
        );
    }

    #[test]
    fn green_and_invalidates_after_commit() {
        let inv = inventory();
        let rules = english_like();
        let corpus = parse_corpus("grinænd\nkætspɔz", &inv).unwrap();
        let mut seg = Segmentation::for_corpus(&corpus);
        let mut valid = ValidPointSet::compute(&corpus, &seg, Some(&rules));
        assert_eq!(
            valid.utterance(0).iter().copied().collect::<Vec<_>>(),
            vec![3, 4]
        );
        let before_other = valid.utterance(1).clone();

        let commit = Position::new(0, 4);
        seg.insert(commit).unwrap();
        valid.refresh_after_insertion(&corpus, &seg, commit, Some(&rules));
        assert!(valid.utterance(0).is_empty());
        assert_eq!(valid.utterance(1), &before_other);
        assert_eq!(valid, ValidPointSet::compute(&corpus, &seg, Some(&rules)));
    }

    #[test]
    fn free_mode_drops_only_the_committed_point() {
        let inv = inventory();
        let corpus = parse_corpus("abab", &inv).unwrap();
        let mut seg = Segmentation::for_corpus(&corpus);
        let mut valid = ValidPointSet::compute(&corpus, &seg, None);
        assert_eq!(valid.len(), 3);
        seg.insert(Position::new(0, 2)).unwrap();
        valid.refresh_after_insertion(&corpus, &seg, Position::new(0, 2), None);
        assert_eq!(
            valid.iter().map(|p| p.offset).collect::<Vec<_>>(),
            vec![1, 3]
        );
    }

    #[test]
    fn extraction_reads_consonant_runs() {
        let inv = inventory();
        let corpus = parse_corpus("kæts pɔz", &inv).unwrap();
        let ex = extract_rules(&corpus).unwrap();
        assert!(ex.vowelless_words.is_empty());
        let init: Vec<_> = ex
            .rules
            .initial_clusters()
            .iter()
            .map(String::as_str)
            .collect();
        let fin: Vec<_> = ex
            .rules
            .final_clusters()
            .iter()
            .map(String::as_str)
            .collect();
        assert_eq!(init, vec!["", "k", "p"]);
        assert_eq!(fin, vec!["", "ts", "z"]);

        let corpus = parse_corpus("ænd splæʃ n", &inv).unwrap();
        let ex = extract_rules(&corpus).unwrap();
        assert!(ex.rules.allows_initial(""));
        assert!(ex.rules.allows_initial("spl"));
        assert_eq!(ex.vowelless_words, vec!["n".to_owned()]);
    }

    #[test]
    fn rules_file_round_trip() {
        let inv = inventory();
        let rules = english_like();
        let text = rules.to_rules_file();
        assert!(text.starts_with("INITIAL:\n-\n"));
        assert_eq!(ClusterRules::parse(&text, &inv).unwrap(), rules);
    }

    #[test]
    fn rules_file_errors() {
        let inv = inventory();
        assert!(ClusterRules::parse("INITIAL:\nk\n", &inv).is_err());
        assert!(ClusterRules::parse("k\nINITIAL:\nFINAL:\n", &inv).is_err());
        let err = ClusterRules::parse("INITIAL:\nka\nFINAL:\n", &inv).unwrap_err();
        assert!(matches!(
            err,
            Error::Parse {
                line: 2,
                column: 2,
                ..
            }
        ));
        assert!(ClusterRules::new(["ka"], Vec::<String>::new())
            .validate(&inv)
            .is_err());
        let rules = ClusterRules::parse("# x\nINITIAL:\n-\nsp\nFINAL:\n  nd  \n", &inv).unwrap();
        assert!(rules.allows_final("nd") && rules.allows_final(""));
    }
}
