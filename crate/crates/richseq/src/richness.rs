//! Palindromic richness: distinct-palindrome counting via a palindromic
//! tree, defect, and the bilateral-order richness criterion.

use crate::factor_index::FactorIndex;
use crate::morphism::Morphism;
use crate::word::{Letter, Word};
use crate::{Error, Result};

/// Incremental palindromic tree ("eertree"): after pushing a letter it knows
/// the longest palindromic suffix and whether it is new, giving distinct
/// palindromic factor counts in O(n) amortized.
pub struct PalindromicTree {
    // node 0: imaginary root of length -1; node 1: empty root
    len: Vec<i32>,
    link: Vec<u32>,
    children: Vec<Vec<(Letter, u32)>>,
    text: Vec<Letter>,
    last: u32,
    distinct: usize,
}

impl Default for PalindromicTree {
    fn default() -> Self {
        Self::new()
    }
}

impl PalindromicTree {
    pub fn new() -> Self {
        PalindromicTree {
            len: vec![-1, 0],
            link: vec![0, 0],
            children: vec![Vec::new(), Vec::new()],
            text: Vec::new(),
            last: 1,
            distinct: 0,
        }
    }

    fn child(&self, v: u32, c: Letter) -> Option<u32> {
        self.children[v as usize]
            .iter()
            .find(|&&(a, _)| a == c)
            .map(|&(_, u)| u)
    }

    /// Longest node `v` reachable from `start` by suffix links such that
    /// `c . palindrome(v) . c` is a suffix of the text after appending `c`.
    fn extend_from(&self, start: u32, c: Letter) -> u32 {
        // the new letter is already at index n-1; a palindrome of length l
        // ending before it extends iff text[n-2-l] matches
        let n = self.text.len();
        let mut v = start;
        loop {
            let l = self.len[v as usize];
            let i = n as i64 - 2 - l as i64;
            if i >= 0 && self.text[i as usize] == c {
                return v;
            }
            v = self.link[v as usize];
        }
    }

    /// Append one letter; returns `true` when a new distinct palindromic
    /// factor (the longest palindromic suffix) appeared.
    pub fn push(&mut self, c: Letter) -> bool {
        self.text.push(c);
        let x = self.extend_from(self.last, c);
        if let Some(u) = self.child(x, c) {
            self.last = u;
            return false;
        }
        let link = if self.len[x as usize] == -1 {
            1 // single letters link to the empty root
        } else {
            let y = self.extend_from(self.link[x as usize], c);
            self.child(y, c).expect("suffix palindrome present")
        };
        let id = self.len.len() as u32;
        self.len.push(self.len[x as usize] + 2);
        self.link.push(link);
        self.children.push(Vec::new());
        self.children[x as usize].push((c, id));
        self.last = id;
        self.distinct += 1;
        true
    }

    /// Distinct palindromic factors pushed so far, including the empty word.
    pub fn distinct_palindromes(&self) -> usize {
        self.distinct + 1
    }

    /// Length of the longest palindromic suffix of the current text.
    pub fn longest_palindromic_suffix_len(&self) -> usize {
        self.len[self.last as usize].max(0) as usize
    }
}

/// Palindrome counts for every prefix of a word.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PalindromeCensus {
    pub word: Word,
    /// `per_prefix[n]` = distinct palindromic factors (including the empty
    /// word) of the length-`n` prefix; `per_prefix[0] == 1`.
    pub per_prefix: Vec<usize>,
}

impl PalindromeCensus {
    /// Distinct palindromic factors of the full word.
    pub fn distinct_palindromes(&self) -> usize {
        *self.per_prefix.last().unwrap()
    }

    /// `|w| + 1` minus the palindrome count; zero for rich words.
    pub fn defect(&self) -> usize {
        self.word.len() + 1 - self.distinct_palindromes()
    }

    /// Defect of the length-`n` prefix.
    pub fn prefix_defect(&self, n: usize) -> usize {
        n + 1 - self.per_prefix[n]
    }
}

/// Exact distinct-palindrome count for every prefix of `w`.
pub fn palindrome_census(w: &Word) -> PalindromeCensus {
    let mut tree = PalindromicTree::new();
    let mut per_prefix = Vec::with_capacity(w.len() + 1);
    per_prefix.push(1);
    for &c in w.letters() {
        tree.push(c);
        per_prefix.push(tree.distinct_palindromes());
    }
    PalindromeCensus {
        word: w.clone(),
        per_prefix,
    }
}

/// A word is rich when it attains the maximum of `|w| + 1` distinct
/// palindromic factors; equivalently every prefix gains a new palindrome.
pub fn is_rich(w: &Word) -> bool {
    palindrome_census(w).distinct_palindromes() == w.len() + 1
}

/// `|w| + 1` minus the distinct palindrome count.
pub fn defect(w: &Word) -> usize {
    palindrome_census(w).defect()
}

/// One failed factor in a [`RichnessReport`].
#[derive(Clone, Debug)]
pub struct RichnessFailure {
    pub factor: Word,
    pub bilateral_order: i64,
    pub pext_count: Option<usize>,
}

/// Result of the bilateral-order richness criterion.
#[derive(Clone, Debug)]
pub struct RichnessReport {
    pub checked: usize,
    pub failures: Vec<RichnessFailure>,
}

impl RichnessReport {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Bilateral-order criterion over the indexed bispecial factors up to
/// `horizon`: a non-palindromic bispecial must have `b(w) = 0`, a
/// palindromic one `b(w) = #Pext(w) - 1`.
pub fn richness_criterion_bilateral(idx: &FactorIndex, horizon: usize) -> Result<RichnessReport> {
    if horizon > idx.trusted_horizon() {
        return Err(Error::Query(format!(
            "horizon {horizon} beyond trusted horizon {}",
            idx.trusted_horizon()
        )));
    }
    let mut checked = 0;
    let mut failures = Vec::new();
    for rec in idx.bispecial_records() {
        if rec.factor.len() > horizon {
            continue;
        }
        checked += 1;
        let b = rec.bilateral_order();
        let ok = if rec.factor.is_palindrome() {
            let pext = rec.palindromic_extensions().len();
            if b == pext as i64 - 1 {
                true
            } else {
                failures.push(RichnessFailure {
                    factor: rec.factor.clone(),
                    bilateral_order: b,
                    pext_count: Some(pext),
                });
                false
            }
        } else {
            b == 0
        };
        if !ok && !rec.factor.is_palindrome() {
            failures.push(RichnessFailure {
                factor: rec.factor.clone(),
                bilateral_order: b,
                pext_count: None,
            });
        }
    }
    Ok(RichnessReport { checked, failures })
}

/// Checks that the alphabet-extension image of a rich word is rich.
pub fn sigma_preserves_richness_check(w: &Word, d: usize) -> Result<bool> {
    if !is_rich(w) {
        return Err(Error::InvalidInput(format!(
            "input word of length {} is not rich",
            w.len()
        )));
    }
    let sigma = Morphism::sigma(d)?;
    Ok(is_rich(&sigma.apply(w)?))
}
