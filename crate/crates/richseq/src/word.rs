//! Finite words over small-integer alphabets, Parikh vectors and palindromes.
//!
//! Letters are stored as unsigned small integers throughout; rendering to
//! `a`/`b` for binary output alphabets happens only at serialization
//! boundaries. All types here are immutable values.

use std::fmt;

use num::BigUint;

use crate::{Error, Result};

/// A letter of an alphabet `{0, 1, .., d-1}`.
pub type Letter = u8;

/// A finite word; the empty word is permitted.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Word(letters)
    }

    pub fn empty() -> Self {
        Word(Vec::new())
    }

    /// Single-letter word.
    pub fn letter(a: Letter) -> Self {
        Word(vec![a])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    /// Reverse of the word: `mirror(w0 w1 .. wn-1) = wn-1 .. w1 w0`.
    pub fn mirror(&self) -> Word {
        let mut v = self.0.clone();
        v.reverse();
        Word(v)
    }

    pub fn is_palindrome(&self) -> bool {
        let n = self.0.len();
        (0..n / 2).all(|i| self.0[i] == self.0[n - 1 - i])
    }

    /// Letter-occurrence counts over the alphabet `{0, .., d-1}`.
    pub fn parikh(&self, d: usize) -> Result<ParikhVector> {
        let mut counts = vec![BigUint::from(0u32); d];
        for &a in &self.0 {
            if (a as usize) >= d {
                return Err(Error::InvalidInput(format!(
                    "letter {a} out of range for alphabet size {d}"
                )));
            }
            counts[a as usize] += 1u32;
        }
        Ok(ParikhVector(counts))
    }

    pub fn max_letter(&self) -> Option<Letter> {
        self.0.iter().copied().max()
    }

    /// Smallest alphabet size containing all letters of the word.
    pub fn min_alphabet(&self) -> usize {
        self.max_letter().map_or(0, |m| m as usize + 1)
    }

    /// Parse from digits (`"0102"`) or comma-separated integers (`"0,1,12"`).
    pub fn parse(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        if s.contains(',') {
            for part in s.split(',') {
                let v: u8 = part
                    .trim()
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("bad letter {part:?}")))?;
                letters.push(v);
            }
        } else {
            for c in s.chars() {
                let v = c
                    .to_digit(10)
                    .ok_or_else(|| Error::InvalidInput(format!("bad digit {c:?}")))?;
                letters.push(v as u8);
            }
        }
        Ok(Word(letters))
    }
}

impl From<&[Letter]> for Word {
    fn from(s: &[Letter]) -> Self {
        Word(s.to_vec())
    }
}

impl FromIterator<Letter> for Word {
    fn from_iter<I: IntoIterator<Item = Letter>>(iter: I) -> Self {
        Word(iter.into_iter().collect())
    }
}

impl fmt::Display for Word {
    /// Digits when all letters fit in one digit, comma-separated otherwise.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.iter().all(|&a| a < 10) {
            for &a in &self.0 {
                write!(f, "{a}")?;
            }
        } else {
            for (i, &a) in self.0.iter().enumerate() {
                if i > 0 {
                    write!(f, ",")?;
                }
                write!(f, "{a}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Longest common prefix of two words.
pub fn longest_common_prefix(u: &Word, v: &Word) -> Word {
    let n = u
        .letters()
        .iter()
        .zip(v.letters())
        .take_while(|(a, b)| a == b)
        .count();
    Word(u.letters()[..n].to_vec())
}

/// Longest common suffix of two words.
pub fn longest_common_suffix(u: &Word, v: &Word) -> Word {
    let n = u
        .letters()
        .iter()
        .rev()
        .zip(v.letters().iter().rev())
        .take_while(|(a, b)| a == b)
        .count();
    Word(u.letters()[u.len() - n..].to_vec())
}

/// Letter-occurrence count vector of a word; counts are arbitrary precision
/// because chain recurrences iterate far beyond 64-bit range.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParikhVector(Vec<BigUint>);

impl ParikhVector {
    pub fn zero(d: usize) -> Self {
        ParikhVector(vec![BigUint::from(0u32); d])
    }

    /// Canonical basis vector `e_i`.
    pub fn basis(d: usize, i: usize) -> Self {
        let mut v = Self::zero(d);
        v.0[i] = BigUint::from(1u32);
        v
    }

    pub fn from_counts(counts: Vec<BigUint>) -> Self {
        ParikhVector(counts)
    }

    pub fn counts(&self) -> &[BigUint] {
        &self.0
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn get(&self, i: usize) -> &BigUint {
        &self.0[i]
    }

    /// Sum of the counts, i.e. the length of the described word.
    pub fn total(&self) -> BigUint {
        self.0.iter().sum()
    }

    pub fn add(&self, other: &ParikhVector) -> Result<ParikhVector> {
        if self.dim() != other.dim() {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        Ok(ParikhVector(
            self.0
                .iter()
                .zip(&other.0)
                .map(|(a, b)| a + b)
                .collect(),
        ))
    }
}

impl fmt::Display for ParikhVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}
