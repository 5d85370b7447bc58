//! Repetition measurement on long prefixes: maximal repetitions via
//! longest-common-extension queries, prefix critical exponent, asymptotic
//! exponent estimates and the overlap census.
//!
//! The production scanner anchors each candidate period `p` at multiples of
//! `floor(p/2)` and extends with forward/backward LCE queries; any maximal
//! repetition of exponent >= 3/2 contains such an anchor, so the scan is
//! complete down to that floor. Lower floors are served by the quadratic
//! oracle in the `oracle` module.

use std::collections::HashSet;

use num::rational::Ratio;

use crate::oracle::naive_maximal_repetitions;
use crate::word::{Letter, Word};
use crate::{Error, Result};

/// A maximal repetition: `len` letters starting at `start`, shift-invariant
/// under `period`, extendable in neither direction.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Hash)]
pub struct Repetition {
    pub start: usize,
    pub period: usize,
    pub len: usize,
}

impl Repetition {
    /// Exact exponent `len / period`.
    pub fn exponent(&self) -> Ratio<u64> {
        Ratio::new(self.len as u64, self.period as u64)
    }
}

/// Suffix-array-backed longest-common-extension structure.
struct Lce {
    n: usize,
    rank: Vec<u32>,
    // sparse table over the lcp array for O(1) range minimum
    table: Vec<Vec<u32>>,
}

impl Lce {
    fn new(text: &[Letter]) -> Lce {
        let n = text.len();
        let sa = suffix_array(text);
        let mut rank = vec![0u32; n];
        for (r, &i) in sa.iter().enumerate() {
            rank[i as usize] = r as u32;
        }
        let lcp = kasai_lcp(text, &sa, &rank);
        let table = sparse_min(&lcp);
        Lce { n, rank, table }
    }

    /// Length of the longest common prefix of the suffixes at `i` and `j`.
    fn lce(&self, i: usize, j: usize) -> usize {
        if i == j {
            return self.n - i;
        }
        if i >= self.n || j >= self.n {
            return 0;
        }
        let (mut a, mut b) = (self.rank[i] as usize, self.rank[j] as usize);
        if a > b {
            std::mem::swap(&mut a, &mut b);
        }
        self.range_min(a, b) as usize
    }

    /// Minimum of `lcp[a..b]` (`a < b`).
    fn range_min(&self, a: usize, b: usize) -> u32 {
        let k = usize::BITS as usize - 1 - (b - a).leading_zeros() as usize;
        self.table[k][a].min(self.table[k][b - (1 << k)])
    }
}

/// Suffix array by prefix doubling, `O(n log^2 n)`.
fn suffix_array(text: &[Letter]) -> Vec<u32> {
    let n = text.len();
    if n == 0 {
        return Vec::new();
    }
    let mut sa: Vec<u32> = (0..n as u32).collect();
    let mut rank: Vec<u32> = text.iter().map(|&c| c as u32).collect();
    let mut tmp = vec![0u32; n];
    let mut k = 1;
    let key = |rank: &[u32], i: u32, k: usize| -> u64 {
        let i = i as usize;
        let hi = rank[i] as u64 + 1;
        let lo = if i + k < rank.len() {
            rank[i + k] as u64 + 1
        } else {
            0
        };
        (hi << 32) | lo
    };
    while k < n.max(2) {
        sa.sort_unstable_by_key(|&i| key(&rank, i, k));
        tmp[sa[0] as usize] = 0;
        for w in 1..n {
            let prev = key(&rank, sa[w - 1], k);
            let cur = key(&rank, sa[w], k);
            tmp[sa[w] as usize] = tmp[sa[w - 1] as usize] + u32::from(cur != prev);
        }
        std::mem::swap(&mut rank, &mut tmp);
        if rank[sa[n - 1] as usize] as usize == n - 1 {
            break;
        }
        k <<= 1;
    }
    sa
}

fn kasai_lcp(text: &[Letter], sa: &[u32], rank: &[u32]) -> Vec<u32> {
    let n = text.len();
    let mut lcp = vec![0u32; n.saturating_sub(1)];
    let mut h = 0usize;
    for i in 0..n {
        let r = rank[i] as usize;
        if r + 1 == n {
            h = 0;
            continue;
        }
        let j = sa[r + 1] as usize;
        while i + h < n && j + h < n && text[i + h] == text[j + h] {
            h += 1;
        }
        lcp[r] = h as u32;
        h = h.saturating_sub(1);
    }
    lcp
}

fn sparse_min(v: &[u32]) -> Vec<Vec<u32>> {
    let n = v.len();
    let levels = if n == 0 {
        1
    } else {
        usize::BITS as usize - n.leading_zeros() as usize
    };
    let mut table = Vec::with_capacity(levels);
    table.push(v.to_vec());
    for k in 1..levels {
        let half = 1usize << (k - 1);
        let prev = &table[k - 1];
        let row: Vec<u32> = (0..n + 1 - (1 << k))
            .map(|i| prev[i].min(prev[i + half]))
            .collect();
        table.push(row);
    }
    table
}

/// Repetition scanner with precomputed forward and backward LCE structures;
/// build once, query many periods.
pub struct RepetitionScanner {
    text: Vec<Letter>,
    fwd: Lce,
    rev: Lce,
}

impl RepetitionScanner {
    pub fn new(w: &Word) -> RepetitionScanner {
        let text = w.letters().to_vec();
        let mut reversed = text.clone();
        reversed.reverse();
        RepetitionScanner {
            fwd: Lce::new(&text),
            rev: Lce::new(&reversed),
            text,
        }
    }

    /// Longest common extension to the right of positions `i`, `j`.
    fn lce_fwd(&self, i: usize, j: usize) -> usize {
        self.fwd.lce(i, j)
    }

    /// Longest common extension to the left of (exclusive ends) `i`, `j`.
    fn lce_back(&self, i: usize, j: usize) -> usize {
        let n = self.text.len();
        self.rev.lce(n - i, n - j)
    }

    /// All maximal repetitions with exponent at least `floor`; `floor` must
    /// be at least 3/2 for the anchored scan to be complete.
    pub fn maximal_repetitions(&self, floor: Ratio<u64>) -> Result<Vec<Repetition>> {
        self.repetitions_in_periods(floor, 1, self.text.len())
    }

    /// Maximal repetitions with `min_period <= period <= max_period` and
    /// exponent at least `floor` (floor >= 3/2).
    pub fn repetitions_in_periods(
        &self,
        floor: Ratio<u64>,
        min_period: usize,
        max_period: usize,
    ) -> Result<Vec<Repetition>> {
        if floor < Ratio::new(3, 2) {
            return Err(Error::InvalidInput(
                "anchored scan requires exponent floor >= 3/2; use the quadratic oracle below it"
                    .into(),
            ));
        }
        let n = self.text.len();
        let mut seen: HashSet<(u32, u32)> = HashSet::new();
        let mut out = Vec::new();
        let mut push = |rep: Repetition, out: &mut Vec<Repetition>| {
            if rep.exponent() >= floor && seen.insert((rep.start as u32, rep.period as u32)) {
                out.push(rep);
            }
        };
        let lo = min_period.max(1);
        // exponent >= 3/2 forces period <= 2n/3
        let hi = max_period.min(2 * n / 3);
        for p in lo..=hi {
            if p == 1 {
                // plain equal-letter runs
                let mut i = 0;
                while i + 1 < n {
                    if self.text[i] != self.text[i + 1] {
                        i += 1;
                        continue;
                    }
                    let s = i;
                    while i + 1 < n && self.text[i] == self.text[i + 1] {
                        i += 1;
                    }
                    push(
                        Repetition {
                            start: s,
                            period: 1,
                            len: i - s + 1,
                        },
                        &mut out,
                    );
                }
                continue;
            }
            let g = p / 2;
            let mut q = 0;
            while q + p <= n {
                let f = self.lce_fwd(q, q + p);
                let b = if q == 0 { 0 } else { self.lce_back(q, q + p) };
                if f + b >= 1 {
                    push(
                        Repetition {
                            start: q - b,
                            period: p,
                            len: p + f + b,
                        },
                        &mut out,
                    );
                }
                q += g;
            }
        }
        out.sort_by_key(|r| (r.start, r.period));
        Ok(out)
    }
}

/// All maximal repetitions of `prefix` with exponent at least `floor`
/// (floor >= 3/2).
pub fn maximal_repetitions(prefix: &Word, floor: Ratio<u64>) -> Result<Vec<Repetition>> {
    RepetitionScanner::new(prefix).maximal_repetitions(floor)
}

/// Maximum exponent over all maximal repetitions of the prefix. Words with
/// no repetition of exponent >= 3/2 fall back to the quadratic oracle; a
/// repetition-free word reports exponent 1.
pub fn critical_exponent_prefix(prefix: &Word) -> Ratio<u64> {
    let floor = Ratio::new(3, 2);
    let reps = maximal_repetitions(prefix, floor).unwrap_or_default();
    if let Some(e) = reps.iter().map(Repetition::exponent).max() {
        return e;
    }
    naive_maximal_repetitions(prefix, Ratio::new(1, 1))
        .iter()
        .map(Repetition::exponent)
        .max()
        .unwrap_or_else(|| Ratio::new(1, 1))
}

/// Maximum exponent among maximal repetitions with period at least
/// `min_period`; `None` when no such repetition of exponent >= 3/2 exists.
pub fn asymptotic_exponent_estimate(prefix: &Word, min_period: usize) -> Option<Ratio<u64>> {
    let scanner = RepetitionScanner::new(prefix);
    estimate_with(&scanner, min_period)
}

fn estimate_with(scanner: &RepetitionScanner, min_period: usize) -> Option<Ratio<u64>> {
    scanner
        .repetitions_in_periods(Ratio::new(3, 2), min_period.max(1), usize::MAX)
        .ok()?
        .iter()
        .map(Repetition::exponent)
        .max()
}

/// `(min_period, max exponent)` for each rung of the ladder; rungs with no
/// qualifying repetition are omitted.
pub fn estimate_curve(prefix: &Word, ladder: &[usize]) -> Vec<(usize, Ratio<u64>)> {
    let scanner = RepetitionScanner::new(prefix);
    ladder
        .iter()
        .filter_map(|&m| estimate_with(&scanner, m).map(|e| (m, e)))
        .collect()
}

/// The `count` longest maximal repetitions with exponent strictly above 2
/// (overlapping factors `w w w'`), longest first. Returns fewer when the
/// prefix lacks them.
pub fn overlap_census(prefix: &Word, count: usize) -> Vec<Repetition> {
    let two = Ratio::new(2, 1);
    let mut reps: Vec<Repetition> = maximal_repetitions(prefix, Ratio::new(3, 2))
        .unwrap_or_default()
        .into_iter()
        .filter(|r| r.exponent() > two)
        .collect();
    reps.sort_by_key(|r| (std::cmp::Reverse(r.len), r.start));
    reps.truncate(count);
    reps
}
