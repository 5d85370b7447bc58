//! Brute-force factor oracle over a finite prefix.
//!
//! The index is built by occurrence-list refinement: factors of length `n+1`
//! are obtained by bucketing the occurrences of each length-`n` factor on the
//! following letter. One pass per length costs `O(N)` and only two adjacent
//! levels are alive at a time, so memory stays `O(N)` even for deep indexes.
//! Per-level aggregates (complexity, bispecial records, trusted horizon,
//! extension-pattern scan results) are retained; point queries on individual
//! factors recompute occurrence lists directly from the prefix, which gives
//! identical answers without storing every level.
//!
//! Boundary rule: occurrences touching the prefix ends contribute to
//! occurrence data but a left (right) extension is only recorded when the
//! occurrence has a left (right) neighbour inside the prefix.

use std::collections::BTreeSet;

use crate::word::{Letter, Word};
use crate::{Error, Result};

/// Extension data of a single factor.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ExtensionRecord {
    pub factor: Word,
    pub lext: BTreeSet<Letter>,
    pub rext: BTreeSet<Letter>,
    pub bext: BTreeSet<(Letter, Letter)>,
    pub count: usize,
    pub first_occ: usize,
    pub last_occ: usize,
}

impl ExtensionRecord {
    /// Bilateral order `b(w) = #Bext - #Lext - #Rext + 1`.
    pub fn bilateral_order(&self) -> i64 {
        self.bext.len() as i64 - self.lext.len() as i64 - self.rext.len() as i64 + 1
    }

    /// Left- and right-special at once.
    pub fn is_bispecial(&self) -> bool {
        self.lext.len() >= 2 && self.rext.len() >= 2
    }

    /// Letters `i` with `iwi` recorded.
    pub fn palindromic_extensions(&self) -> BTreeSet<Letter> {
        self.bext
            .iter()
            .filter(|(i, j)| i == j)
            .map(|&(i, _)| i)
            .collect()
    }
}

/// A pair of extension pairs `(i w k, j w l)` with `i != j`, `k != l` and
/// `max(i, j) <= min(k, l)`; sequences of the `u_d` family admit none.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CrossingPair {
    pub factor: Word,
    pub first: (Letter, Letter),
    pub second: (Letter, Letter),
}

/// Immutable factor index over a prefix; safe to query concurrently.
pub struct FactorIndex {
    prefix: Word,
    alphabet: usize,
    max_len: usize,
    trusted: usize,
    complexity: Vec<usize>,
    rext_sums: Vec<usize>,
    bispecials: Vec<ExtensionRecord>,
    crossing_pairs: Vec<CrossingPair>,
}

impl FactorIndex {
    /// Index all factors of `prefix` up to length `max_len`.
    pub fn build(prefix: &Word, max_len: usize) -> Result<FactorIndex> {
        if max_len > prefix.len() {
            return Err(Error::InvalidInput(format!(
                "max factor length {max_len} exceeds prefix length {}",
                prefix.len()
            )));
        }
        let alphabet = prefix.min_alphabet();
        if alphabet > 32 {
            return Err(Error::InvalidInput(
                "alphabet sizes above 32 are not supported".into(),
            ));
        }
        let text = prefix.letters();
        let n_text = text.len();

        let mut complexity = vec![0usize; max_len + 1];
        let mut rext_sums = vec![0usize; max_len + 1];
        let mut bispecials = Vec::new();
        let mut crossing_pairs = Vec::new();
        // level m is "fully observed" when every factor of length m occurs
        // at least twice, once starting in the second half of the prefix
        let mut levels_ok = 0usize;
        let mut levels_ok_done = false;

        complexity[0] = 1;
        {
            let occs: Vec<u32> = (0..=n_text as u32).collect();
            let stats = level_stats(text, 0, &occs);
            rext_sums[0] = stats.rext.len();
            scan_crossing(&stats, &mut crossing_pairs);
            if stats.is_bispecial() {
                bispecials.push(stats);
            }
        }

        walk_levels(text, alphabet, max_len, |n, level| {
            complexity[n] = level.len();
            let mut level_trusted = true;
            for occs in level {
                let stats = level_stats(text, n, occs);
                rext_sums[n] += stats.rext.len();
                scan_crossing(&stats, &mut crossing_pairs);
                if stats.count < 2 || stats.last_occ < n_text / 2 {
                    level_trusted = false;
                }
                if stats.is_bispecial() {
                    bispecials.push(stats);
                }
            }
            if level_trusted && !levels_ok_done {
                levels_ok = n;
            } else {
                levels_ok_done = true;
            }
            true
        });

        let trusted = levels_ok.saturating_sub(2).min(max_len.saturating_sub(2));
        Ok(FactorIndex {
            prefix: prefix.clone(),
            alphabet,
            max_len,
            trusted,
            complexity,
            rext_sums,
            bispecials,
            crossing_pairs,
        })
    }

    pub fn prefix(&self) -> &Word {
        &self.prefix
    }

    pub fn alphabet_size(&self) -> usize {
        self.alphabet
    }

    pub fn max_len(&self) -> usize {
        self.max_len
    }

    /// Largest `h` such that extension data for factors of length `<= h` is
    /// considered complete: every factor of length `<= h + 2` occurs at
    /// least twice, with an occurrence starting in the second half.
    pub fn trusted_horizon(&self) -> usize {
        self.trusted
    }

    /// Number of distinct factors of length `n` in the prefix.
    pub fn complexity(&self, n: usize) -> Result<usize> {
        self.complexity
            .get(n)
            .copied()
            .ok_or_else(|| Error::Query(format!("length {n} beyond indexed horizon")))
    }

    /// Whether `sum over |w| = n of (#Rext(w) - 1) == C(n+1) - C(n)`.
    pub fn complexity_consistent(&self, n: usize) -> Result<bool> {
        let c_next = self.complexity(n + 1)?;
        Ok(self.rext_sums[n] == c_next)
    }

    /// Sorted start positions of `w` in the prefix (empty word: every
    /// position `0..=N`).
    pub fn occurrences(&self, w: &Word) -> Vec<usize> {
        let text = self.prefix.letters();
        if w.is_empty() {
            return (0..=text.len()).collect();
        }
        if w.len() > text.len() {
            return Vec::new();
        }
        text.windows(w.len())
            .enumerate()
            .filter(|(_, win)| *win == w.letters())
            .map(|(i, _)| i)
            .collect()
    }

    pub fn contains(&self, w: &Word) -> bool {
        !self.occurrences(w).is_empty()
    }

    /// Full extension data of one factor, recomputed from its occurrences.
    pub fn extension_record(&self, w: &Word) -> Result<ExtensionRecord> {
        let occs: Vec<u32> = self.occurrences(w).iter().map(|&i| i as u32).collect();
        if occs.is_empty() {
            return Err(Error::Query(format!("{w} is not a factor of the prefix")));
        }
        Ok(level_stats(self.prefix.letters(), w.len(), &occs))
    }

    /// `b(w) = #Bext - #Lext - #Rext + 1`.
    pub fn bilateral_order(&self, w: &Word) -> Result<i64> {
        Ok(self.extension_record(w)?.bilateral_order())
    }

    /// Letters `i` such that `iwi` is a factor; `w` must be a palindrome.
    pub fn palindromic_extensions(&self, w: &Word) -> Result<BTreeSet<Letter>> {
        if !w.is_palindrome() {
            return Err(Error::Query(format!("{w} is not a palindrome")));
        }
        Ok(self.extension_record(w)?.palindromic_extensions())
    }

    /// All bispecial factors of length `<= up_to`, sorted by length then
    /// lexicographically.
    pub fn bispecial_factors(&self, up_to: usize) -> Result<Vec<Word>> {
        if up_to + 2 > self.max_len {
            return Err(Error::Query(format!(
                "bispecial query to length {up_to} needs index depth {}",
                up_to + 2
            )));
        }
        Ok(self
            .bispecials
            .iter()
            .filter(|r| r.factor.len() <= up_to)
            .map(|r| r.factor.clone())
            .collect())
    }

    /// Extension records of every bispecial factor found during the build,
    /// sorted by length then lexicographically.
    pub fn bispecial_records(&self) -> &[ExtensionRecord] {
        &self.bispecials
    }

    /// Distinct return words to `w`: the words between consecutive
    /// occurrence starts, sorted by length then lexicographically. Complete
    /// return words are obtained as `r.concat(w)`.
    pub fn return_words(&self, w: &Word) -> Result<Vec<Word>> {
        let occs = self.occurrences(w);
        if occs.len() < 2 {
            return Err(Error::Query(format!(
                "{w} occurs fewer than twice in the prefix"
            )));
        }
        let text = self.prefix.letters();
        let mut set: BTreeSet<&[Letter]> = BTreeSet::new();
        for pair in occs.windows(2) {
            set.insert(&text[pair[0]..pair[1]]);
        }
        let mut out: Vec<Word> = set.into_iter().map(Word::from).collect();
        out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
        Ok(out)
    }

    /// Number of distinct return words for every factor of length
    /// `<= max_f_len`, sorted by length then lexicographically. Factors with
    /// fewer than two occurrences are reported with count 0.
    pub fn return_word_counts(&self, max_f_len: usize) -> Result<Vec<(Word, usize)>> {
        if max_f_len > self.max_len {
            return Err(Error::Query(format!(
                "length {max_f_len} beyond indexed horizon"
            )));
        }
        let text = self.prefix.letters();
        let mut out: Vec<(Word, usize)> = Vec::new();
        {
            let occs: Vec<u32> = (0..=text.len() as u32).collect();
            out.push((Word::empty(), distinct_gaps(text, &occs)));
        }
        walk_levels(text, self.alphabet, max_f_len, |n, level| {
            for occs in level {
                let first = occs[0] as usize;
                let w = Word::from(&text[first..first + n]);
                let cnt = if occs.len() >= 2 {
                    distinct_gaps(text, occs)
                } else {
                    0
                };
                out.push((w, cnt));
            }
            true
        });
        Ok(out)
    }

    /// All recorded crossing extension pairs; empty for `u_d` prefixes.
    pub fn crossing_pairs(&self) -> &[CrossingPair] {
        &self.crossing_pairs
    }
}

/// Stream levels `1..=max_len` of the occurrence-list refinement, invoking
/// `visit(n, occurrence lists in lexicographic factor order)` per level.
/// Returning `false` from the callback stops the walk.
fn walk_levels<F>(text: &[Letter], alphabet: usize, max_len: usize, mut visit: F)
where
    F: FnMut(usize, &[Vec<u32>]) -> bool,
{
    if max_len == 0 || text.is_empty() {
        return;
    }
    let mut level: Vec<Vec<u32>> = {
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); alphabet];
        for (i, &a) in text.iter().enumerate() {
            buckets[a as usize].push(i as u32);
        }
        buckets.into_iter().filter(|b| !b.is_empty()).collect()
    };
    for n in 1..=max_len {
        if level.is_empty() || !visit(n, &level) {
            return;
        }
        if n == max_len {
            break;
        }
        let mut next: Vec<Vec<u32>> = Vec::with_capacity(level.len());
        let mut buckets: Vec<Vec<u32>> = vec![Vec::new(); alphabet];
        for occs in &level {
            for &i in occs {
                let j = i as usize + n;
                if j < text.len() {
                    buckets[text[j] as usize].push(i);
                }
            }
            for b in buckets.iter_mut() {
                if !b.is_empty() {
                    next.push(std::mem::take(b));
                }
            }
        }
        level = next;
    }
}

/// Extension record of the factor of length `n` with the given occurrence
/// starts.
fn level_stats(text: &[Letter], n: usize, occs: &[u32]) -> ExtensionRecord {
    let n_text = text.len();
    let mut lext = BTreeSet::new();
    let mut rext = BTreeSet::new();
    let mut bext = BTreeSet::new();
    for &i in occs {
        let i = i as usize;
        let left = (i > 0).then(|| text[i - 1]);
        let right = (i + n < n_text).then(|| text[i + n]);
        if let Some(l) = left {
            lext.insert(l);
        }
        if let Some(r) = right {
            rext.insert(r);
        }
        if let (Some(l), Some(r)) = (left, right) {
            bext.insert((l, r));
        }
    }
    let first = occs[0] as usize;
    ExtensionRecord {
        factor: Word::from(&text[first..first + n]),
        lext,
        rext,
        bext,
        count: occs.len(),
        first_occ: first,
        last_occ: *occs.last().unwrap() as usize,
    }
}

/// Record pairs `(iwk, jwl)` with `i != j`, `k != l`, `max(i,j) <= min(k,l)`.
fn scan_crossing(rec: &ExtensionRecord, out: &mut Vec<CrossingPair>) {
    let pairs: Vec<(Letter, Letter)> = rec.bext.iter().copied().collect();
    for (idx, &(i, k)) in pairs.iter().enumerate() {
        for &(j, l) in &pairs[idx + 1..] {
            if i != j && k != l && i.max(j) <= k.min(l) {
                out.push(CrossingPair {
                    factor: rec.factor.clone(),
                    first: (i, k),
                    second: (j, l),
                });
            }
        }
    }
}

/// Number of distinct gap words between consecutive occurrence starts.
fn distinct_gaps(text: &[Letter], occs: &[u32]) -> usize {
    let mut set: std::collections::HashSet<&[Letter]> = Default::default();
    for pair in occs.windows(2) {
        set.insert(&text[pair[0] as usize..pair[1] as usize]);
    }
    set.len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::morphism::Morphism;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    fn u3(n: usize) -> Word {
        Morphism::phi(3).unwrap().fixed_point_prefix(n).unwrap()
    }

    #[test]
    fn build_basics() {
        let idx = FactorIndex::build(&w("010201022"), 2).unwrap();
        assert_eq!(idx.complexity(0).unwrap(), 1);
        assert_eq!(idx.complexity(1).unwrap(), 3);
        let mut len2: Vec<Word> = idx
            .return_word_counts(2)
            .unwrap()
            .into_iter()
            .map(|(f, _)| f)
            .filter(|f| f.len() == 2)
            .collect();
        len2.sort();
        assert_eq!(len2, vec![w("01"), w("02"), w("10"), w("20"), w("22")]);
        assert!(idx.complexity(3).is_err());
        assert!(FactorIndex::build(&w("01"), 3).is_err());
        let trivial = FactorIndex::build(&w("0102"), 0).unwrap();
        assert_eq!(trivial.complexity(0).unwrap(), 1);
    }

    #[test]
    fn bilateral_orders() {
        let idx = FactorIndex::build(&u3(10_000), 50).unwrap();
        assert_eq!(idx.complexity(1).unwrap(), 3);
        // Bext(eps) has 5 elements, Lext = Rext = {0,1,2}
        assert_eq!(idx.bilateral_order(&Word::empty()).unwrap(), 0);
        // Bext(2) = {(0,2),(2,0),(0,0)}
        assert_eq!(idx.bilateral_order(&w("2")).unwrap(), 0);
        assert!(idx.bilateral_order(&w("11")).is_err());

        let pi = Morphism::pi(3).unwrap();
        let proj = pi.apply(&u3(10_000)).unwrap();
        let pidx = FactorIndex::build(&proj, 50).unwrap();
        assert_eq!(pidx.bilateral_order(&Word::empty()).unwrap(), 1);
    }

    #[test]
    fn palindromic_extension_queries() {
        let idx = FactorIndex::build(&u3(10_000), 50).unwrap();
        let p = idx.palindromic_extensions(&Word::empty()).unwrap();
        assert_eq!(p, BTreeSet::from([2]));
        assert!(idx.palindromic_extensions(&w("01")).is_err());

        let pi = Morphism::pi(3).unwrap();
        let proj = pi.apply(&u3(10_000)).unwrap();
        let pidx = FactorIndex::build(&proj, 50).unwrap();
        assert_eq!(
            pidx.palindromic_extensions(&Word::empty()).unwrap(),
            BTreeSet::from([0, 1])
        );
        // b^{d-2} = 1 for d = 3: Pext = {a}
        assert_eq!(
            pidx.palindromic_extensions(&w("1")).unwrap(),
            BTreeSet::from([0])
        );
    }

    #[test]
    fn bispecial_listing() {
        let idx = FactorIndex::build(&u3(20_000), 60).unwrap();
        let bs = idx.bispecial_factors(1).unwrap();
        assert!(bs.contains(&Word::empty()));
        assert!(bs.contains(&w("0")));
        assert!(bs.contains(&w("2")));
        // mirror closure within the trusted horizon
        let all = idx.bispecial_factors(idx.trusted_horizon()).unwrap();
        for word in &all {
            assert!(all.contains(&word.mirror()), "mirror of {word} missing");
        }
        // sorted by length, then lexicographically
        for pair in all.windows(2) {
            assert!(
                pair[0].len() < pair[1].len()
                    || (pair[0].len() == pair[1].len() && pair[0] < pair[1])
            );
        }
        assert!(idx.bispecial_factors(59).is_err());
    }

    #[test]
    fn return_word_queries() {
        let idx = FactorIndex::build(&u3(1_000), 40).unwrap();
        assert_eq!(
            idx.return_words(&w("0")).unwrap(),
            vec![w("01"), w("02"), w("022")]
        );
        let r22 = idx.return_words(&w("22")).unwrap();
        assert_eq!(r22.len(), 3);
        assert!(idx.return_words(&w("11")).is_err());
        // every short factor of u_3 has exactly 3 return words
        let counts = idx.return_word_counts(idx.trusted_horizon().min(10)).unwrap();
        for (f, c) in counts {
            if f.len() <= idx.trusted_horizon().min(10) {
                assert_eq!(c, 3, "factor {f}");
            }
        }
    }

    #[test]
    fn crossing_scan_and_consistency() {
        let idx = FactorIndex::build(&u3(20_000), 60).unwrap();
        assert!(idx.crossing_pairs().is_empty());
        for n in 0..idx.trusted_horizon() {
            assert!(idx.complexity_consistent(n).unwrap(), "length {n}");
        }
        assert!(idx.trusted_horizon() > 20);
    }

    #[test]
    fn occurrences_and_records() {
        let idx = FactorIndex::build(&w("010201022"), 4).unwrap();
        assert_eq!(idx.occurrences(&w("010")), vec![0, 4]);
        assert_eq!(idx.occurrences(&Word::empty()).len(), 10);
        let rec = idx.extension_record(&w("010")).unwrap();
        assert_eq!(rec.count, 2);
        assert_eq!(rec.first_occ, 0);
        assert_eq!(rec.last_occ, 4);
        // occurrence at position 0 has no left neighbour
        assert_eq!(rec.lext, BTreeSet::from([2]));
        assert_eq!(rec.rext, BTreeSet::from([2]));
        assert!(idx.extension_record(&w("21")).is_err());
    }
}
