//! Slow, transparently-correct oracles used to cross-check the fast
//! palindrome census and the production repetition engine.

use std::collections::HashMap;

use num::rational::Ratio;

use crate::exponent::Repetition;
use crate::word::{Letter, Word};

/// Distinct-palindrome counts for every prefix via center expansion:
/// every palindromic substring is enumerated from its center and deduplicated
/// by content, keeping the earliest end position of each.
pub fn slow_palindrome_census(w: &Word) -> Vec<usize> {
    let text = w.letters();
    let n = text.len();
    // earliest end position (exclusive) of each distinct palindrome
    let mut earliest: HashMap<&[Letter], usize> = HashMap::new();
    let mut record = |i: usize, j: usize| {
        let e = earliest.entry(&text[i..j]).or_insert(usize::MAX);
        *e = (*e).min(j);
    };
    for c in 0..n {
        // odd lengths centered at c
        let mut r = 0;
        while c >= r && c + r < n && text[c - r] == text[c + r] {
            record(c - r, c + r + 1);
            r += 1;
        }
        // even lengths centered between c and c+1
        let mut r = 0;
        while c >= r && c + 1 + r < n && text[c - r] == text[c + 1 + r] {
            record(c - r, c + r + 2);
            r += 1;
        }
    }
    let mut gains = vec![0usize; n + 1];
    for &e in earliest.values() {
        gains[e] += 1;
    }
    let mut counts = Vec::with_capacity(n + 1);
    let mut acc = 1; // the empty palindrome
    counts.push(acc);
    for g in gains.iter().skip(1) {
        acc += g;
        counts.push(acc);
    }
    counts
}

/// Second richness decider: a word is rich iff for every prefix the longest
/// palindromic suffix of that prefix occurs in it exactly once.
pub fn is_rich_unioccurrence(w: &Word) -> bool {
    let text = w.letters();
    for n in 1..=text.len() {
        let prefix = &text[..n];
        let lps = longest_palindromic_suffix(prefix);
        if count_occurrences(prefix, lps) != 1 {
            return false;
        }
    }
    true
}

fn longest_palindromic_suffix(text: &[Letter]) -> &[Letter] {
    for start in 0..text.len() {
        let cand = &text[start..];
        if cand.iter().eq(cand.iter().rev()) {
            return cand;
        }
    }
    &text[text.len()..]
}

fn count_occurrences(text: &[Letter], pat: &[Letter]) -> usize {
    if pat.is_empty() {
        return text.len() + 1;
    }
    text.windows(pat.len()).filter(|win| *win == pat).count()
}

/// All maximal repetitions with exponent at least `floor`, by direct scan
/// over every period: O(n^2), any floor down to 1.
pub fn naive_maximal_repetitions(w: &Word, floor: Ratio<u64>) -> Vec<Repetition> {
    let text = w.letters();
    let n = text.len();
    let mut out = Vec::new();
    for p in 1..n.max(1) {
        let mut i = 0;
        while i + p < n {
            if text[i] != text[i + p] {
                i += 1;
                continue;
            }
            let run_start = i;
            while i + p < n && text[i] == text[i + p] {
                i += 1;
            }
            // matches cover [run_start, i), repetition length adds one period
            let len = i - run_start + p;
            let rep = Repetition {
                start: run_start,
                period: p,
                len,
            };
            if rep.exponent() >= floor {
                out.push(rep);
            }
        }
    }
    out.sort_by_key(|r| (r.start, r.period));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::richness::{is_rich, palindrome_census};

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn slow_census_matches_fast() {
        for s in ["", "0", "010", "010201022", "001100", "011010011", "000000"] {
            let word = w(s);
            assert_eq!(
                slow_palindrome_census(&word),
                palindrome_census(&word).per_prefix,
                "word {s}"
            );
        }
    }

    #[test]
    fn unioccurrence_agrees() {
        for s in ["", "010", "010201022", "001100", "010212", "011010011", "0120"] {
            let word = w(s);
            assert_eq!(is_rich_unioccurrence(&word), is_rich(&word), "word {s}");
        }
    }

    #[test]
    fn naive_runs_basics() {
        let half = Ratio::new(3, 2);
        // bonbon over {0,1,2}
        let reps = naive_maximal_repetitions(&w("012012"), half);
        assert!(reps
            .iter()
            .any(|r| r.start == 0 && r.period == 3 && r.len == 6));
        // 22 in 010201022
        let reps = naive_maximal_repetitions(&w("010201022"), half);
        assert!(reps.iter().any(|r| r.period == 1 && r.len == 2));
        // square-free word: nothing reaches exponent 2
        let reps = naive_maximal_repetitions(&w("0102012"), Ratio::new(1, 1));
        assert!(reps.iter().all(|r| r.exponent() < Ratio::new(2, 1)));
    }
}
