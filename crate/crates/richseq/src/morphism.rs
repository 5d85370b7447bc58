//! Morphisms over finite alphabets: the `phi_d` family, the binary
//! projection `pi`, the alphabet-extension `sigma`, incidence matrices and
//! fixed-point prefix generation.

use num::BigUint;

use crate::word::{Letter, ParikhVector, Word};
use crate::{Error, Result};

/// A non-erasing morphism `{0,..,d-1}* -> {0,..,c-1}*` given by its letter
/// images. Immutable after construction.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Morphism {
    images: Vec<Word>,
    codomain: usize,
}

impl Morphism {
    pub fn new(images: Vec<Word>, codomain: usize) -> Result<Self> {
        if images.is_empty() {
            return Err(Error::InvalidInput("empty domain".into()));
        }
        for (i, img) in images.iter().enumerate() {
            if img.is_empty() {
                return Err(Error::InvalidInput(format!("image of {i} is empty")));
            }
            if img.min_alphabet() > codomain {
                return Err(Error::InvalidInput(format!(
                    "image of {i} uses letters outside codomain {codomain}"
                )));
            }
        }
        Ok(Morphism { images, codomain })
    }

    /// The morphism `phi_d`: `i -> 0(i+1)` for `i < d-1`, and
    /// `d-1 -> 0(d-1)(d-1)`.
    pub fn phi(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("phi_d needs d >= 2, got {d}")));
        }
        if d > u8::MAX as usize {
            return Err(Error::InvalidInput("alphabet too large".into()));
        }
        let last = (d - 1) as Letter;
        let mut images: Vec<Word> = (0..d - 1)
            .map(|i| Word::new(vec![0, (i + 1) as Letter]))
            .collect();
        images.push(Word::new(vec![0, last, last]));
        Morphism::new(images, d)
    }

    /// Projection `pi: i -> a b^i` onto the binary alphabet, with `a = 0`
    /// and `b = 1`.
    pub fn pi(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("pi needs d >= 2, got {d}")));
        }
        let images = (0..d)
            .map(|i| {
                let mut v = vec![0u8];
                v.extend(std::iter::repeat(1u8).take(i));
                Word::new(v)
            })
            .collect();
        Morphism::new(images, 2)
    }

    /// Embedding `sigma: i -> i d` into the alphabet `{0,..,d}`.
    pub fn sigma(d: usize) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("sigma needs d >= 2, got {d}")));
        }
        if d >= u8::MAX as usize {
            return Err(Error::InvalidInput("alphabet too large".into()));
        }
        let images = (0..d)
            .map(|i| Word::new(vec![i as Letter, d as Letter]))
            .collect();
        Morphism::new(images, d + 1)
    }

    /// The identity morphism on `{0,..,d-1}`.
    pub fn identity(d: usize) -> Result<Self> {
        let images = (0..d).map(|i| Word::letter(i as Letter)).collect();
        Morphism::new(images, d)
    }

    pub fn domain_size(&self) -> usize {
        self.images.len()
    }

    pub fn codomain_size(&self) -> usize {
        self.codomain
    }

    pub fn image(&self, a: Letter) -> Result<&Word> {
        self.images
            .get(a as usize)
            .ok_or_else(|| Error::InvalidInput(format!("letter {a} outside domain")))
    }

    /// Apply the morphism letterwise: `m(uv) = m(u)m(v)`.
    pub fn apply(&self, w: &Word) -> Result<Word> {
        let mut out = Vec::new();
        for &a in w.letters() {
            out.extend_from_slice(self.image(a)?.letters());
        }
        Ok(Word::new(out))
    }

    /// Apply the morphism `k` times to a word.
    pub fn apply_power(&self, w: &Word, k: usize) -> Result<Word> {
        let mut cur = w.clone();
        for _ in 0..k {
            cur = self.apply(&cur)?;
        }
        Ok(cur)
    }

    /// Stream over the unique fixed point starting with letter `0`.
    ///
    /// Requires `image(0)` to start with `0` and have length at least 2.
    /// The stream reads its own output, so producing `n` letters costs
    /// `O(n)` memory in total.
    pub fn fixed_point_stream(&self) -> Result<FixedPointStream<'_>> {
        if self.codomain != self.domain_size() {
            return Err(Error::InvalidInput(
                "fixed point needs domain == codomain".into(),
            ));
        }
        let img0 = self.image(0)?;
        if img0.letters().first() != Some(&0) || img0.len() < 2 {
            return Err(Error::InvalidInput(
                "image of 0 must start with 0 and have length >= 2".into(),
            ));
        }
        Ok(FixedPointStream {
            morphism: self,
            buf: img0.letters().to_vec(),
            expanded: 1,
            emitted: 0,
        })
    }

    /// First `n` letters of the fixed point starting with `0`.
    pub fn fixed_point_prefix(&self, n: usize) -> Result<Word> {
        Ok(self.fixed_point_stream()?.take(n).collect())
    }

    /// Incidence matrix `M[i][j] = |image(j)|_i`; requires an endomorphism.
    pub fn incidence_matrix(&self) -> Result<IncidenceMatrix> {
        let d = self.domain_size();
        if self.codomain != d {
            return Err(Error::InvalidInput(
                "incidence matrix needs domain == codomain".into(),
            ));
        }
        let mut entries = vec![BigUint::from(0u32); d * d];
        for (j, img) in self.images.iter().enumerate() {
            for &a in img.letters() {
                entries[a as usize * d + j] += 1u32;
            }
        }
        Ok(IncidenceMatrix { d, entries })
    }

    /// Serialize as one `i -> w` line per letter.
    pub fn to_text(&self) -> String {
        self.images
            .iter()
            .enumerate()
            .map(|(i, img)| format!("{i} -> {img}\n"))
            .collect()
    }

    /// Parse the `i -> w` line format; codomain is inferred from the images.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut images: Vec<(usize, Word)> = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let (lhs, rhs) = line
                .split_once("->")
                .ok_or_else(|| Error::InvalidInput(format!("bad morphism line {line:?}")))?;
            let i: usize = lhs
                .trim()
                .parse()
                .map_err(|_| Error::InvalidInput(format!("bad letter {lhs:?}")))?;
            images.push((i, Word::parse(rhs)?));
        }
        images.sort_by_key(|(i, _)| *i);
        for (pos, (i, _)) in images.iter().enumerate() {
            if pos != *i {
                return Err(Error::InvalidInput(format!("missing image for letter {pos}")));
            }
        }
        let images: Vec<Word> = images.into_iter().map(|(_, w)| w).collect();
        let codomain = images.iter().map(|w| w.min_alphabet()).max().unwrap_or(1);
        Morphism::new(images, codomain)
    }
}

/// Single-consumer iterator over letters of a fixed point.
pub struct FixedPointStream<'a> {
    morphism: &'a Morphism,
    buf: Vec<Letter>,
    expanded: usize,
    emitted: usize,
}

impl Iterator for FixedPointStream<'_> {
    type Item = Letter;

    fn next(&mut self) -> Option<Letter> {
        while self.emitted >= self.buf.len() {
            let c = self.buf[self.expanded];
            self.expanded += 1;
            let img = self.morphism.image(c).expect("letter in domain");
            self.buf.extend_from_slice(img.letters());
        }
        let a = self.buf[self.emitted];
        self.emitted += 1;
        Some(a)
    }
}

/// Incidence matrix of an endomorphism; entry `(i, j)` counts letter `i` in
/// the image of letter `j`, so column `j` sums to the image length.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct IncidenceMatrix {
    d: usize,
    entries: Vec<BigUint>,
}

impl IncidenceMatrix {
    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.d + j]
    }

    pub fn identity(d: usize) -> Self {
        let mut entries = vec![BigUint::from(0u32); d * d];
        for i in 0..d {
            entries[i * d + i] = BigUint::from(1u32);
        }
        IncidenceMatrix { d, entries }
    }

    pub fn mul_vec(&self, v: &ParikhVector) -> Result<ParikhVector> {
        if v.dim() != self.d {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let mut out = vec![BigUint::from(0u32); self.d];
        for i in 0..self.d {
            for j in 0..self.d {
                out[i] += self.get(i, j) * v.get(j);
            }
        }
        Ok(ParikhVector::from_counts(out))
    }

    pub fn mul(&self, other: &IncidenceMatrix) -> Result<IncidenceMatrix> {
        if self.d != other.d {
            return Err(Error::InvalidInput("dimension mismatch".into()));
        }
        let d = self.d;
        let mut entries = vec![BigUint::from(0u32); d * d];
        for i in 0..d {
            for k in 0..d {
                let a = self.get(i, k);
                if *a == BigUint::from(0u32) {
                    continue;
                }
                for j in 0..d {
                    entries[i * d + j] += a * other.get(k, j);
                }
            }
        }
        Ok(IncidenceMatrix { d, entries })
    }

    pub fn pow(&self, mut k: usize) -> IncidenceMatrix {
        let mut base = self.clone();
        let mut acc = IncidenceMatrix::identity(self.d);
        while k > 0 {
            if k & 1 == 1 {
                acc = acc.mul(&base).unwrap();
            }
            base = base.mul(&base).unwrap();
            k >>= 1;
        }
        acc
    }

    /// Primitivity test: `M^((d-1)^2 + 1)` positive (Wielandt bound).
    pub fn is_primitive(&self) -> bool {
        let d = self.d;
        let cap = (d - 1) * (d - 1) + 1;
        let mut reach: Vec<bool> = self
            .entries
            .iter()
            .map(|e| *e != BigUint::from(0u32))
            .collect();
        // boolean matrix power by squaring up to exponent `cap`
        let mul = |a: &[bool], b: &[bool]| -> Vec<bool> {
            let mut out = vec![false; d * d];
            for i in 0..d {
                for k in 0..d {
                    if a[i * d + k] {
                        for j in 0..d {
                            if b[k * d + j] {
                                out[i * d + j] = true;
                            }
                        }
                    }
                }
            }
            out
        };
        let mut acc: Vec<bool> = (0..d * d)
            .map(|idx| idx / d == idx % d)
            .collect();
        let mut base = reach.clone();
        let mut k = cap;
        while k > 0 {
            if k & 1 == 1 {
                acc = mul(&acc, &base);
            }
            base = mul(&base, &base);
            k >>= 1;
        }
        reach = acc;
        reach.iter().all(|&b| b)
    }
}

/// The two generators for which specialized synchronization-point detection
/// is provided.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SyncGenerator {
    /// Images of `phi_d`.
    PhiD { d: usize },
    /// Images of the binary projection `pi`.
    Pi,
}

/// Whether a factor of the generated sequence is guaranteed to contain a
/// synchronization point.
///
/// For `phi_d` this holds exactly when the factor contains the letter `0`
/// or the block `(d-1)(d-1)`; for `pi` exactly when it contains the letter
/// `a` (encoded as `0`).
pub fn has_sync_point_before_zero(w: &Word, generator: SyncGenerator) -> bool {
    match generator {
        SyncGenerator::PhiD { d } => {
            let last = (d - 1) as Letter;
            w.letters().contains(&0)
                || w.letters().windows(2).any(|p| p == [last, last])
        }
        SyncGenerator::Pi => w.letters().contains(&0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn w(s: &str) -> Word {
        Word::parse(s).unwrap()
    }

    #[test]
    fn phi_images() {
        let m = Morphism::phi(3).unwrap();
        assert_eq!(m.image(0).unwrap(), &w("01"));
        assert_eq!(m.image(1).unwrap(), &w("02"));
        assert_eq!(m.image(2).unwrap(), &w("022"));
        let m2 = Morphism::phi(2).unwrap();
        assert_eq!(m2.image(0).unwrap(), &w("01"));
        assert_eq!(m2.image(1).unwrap(), &w("011"));
        let m5 = Morphism::phi(5).unwrap();
        assert_eq!(m5.image(4).unwrap(), &w("044"));
        assert!(Morphism::phi(1).is_err());
    }

    #[test]
    fn pi_images() {
        let m = Morphism::pi(3).unwrap();
        assert_eq!(m.image(0).unwrap(), &w("0"));
        assert_eq!(m.image(1).unwrap(), &w("01"));
        assert_eq!(m.image(2).unwrap(), &w("011"));
        // pi(010) = a ab a
        assert_eq!(m.apply(&w("010")).unwrap(), w("0010"));
        assert_ne!(m.apply(&w("01")).unwrap(), m.apply(&w("10")).unwrap());
    }

    #[test]
    fn sigma_images() {
        let m = Morphism::sigma(2).unwrap();
        assert_eq!(m.image(0).unwrap(), &w("02"));
        assert_eq!(m.image(1).unwrap(), &w("12"));
        assert_eq!(m.apply(&w("01")).unwrap(), w("0212"));
        let s = Morphism::sigma(4).unwrap();
        let img = s.apply(&w("0123")).unwrap();
        let p = img.parikh(5).unwrap();
        assert_eq!(p.get(4), &BigUint::from(4u32));
    }

    #[test]
    fn apply_basics() {
        let m = Morphism::phi(3).unwrap();
        assert_eq!(m.apply(&w("0")).unwrap(), w("01"));
        assert_eq!(m.apply(&w("0102")).unwrap(), w("010201022"));
        assert_eq!(m.apply(&Word::empty()).unwrap(), Word::empty());
        assert!(m.apply(&w("3")).is_err());
    }

    #[test]
    fn fixed_point_prefixes() {
        let m = Morphism::phi(3).unwrap();
        assert_eq!(m.fixed_point_prefix(9).unwrap(), w("010201022"));
        assert_eq!(m.fixed_point_prefix(1).unwrap(), w("0"));
        let m2 = Morphism::phi(2).unwrap();
        assert_eq!(m2.fixed_point_prefix(4).unwrap(), w("0101"));
        // u_2 = 0 f with f the Fibonacci sequence under 0->1, 1->10
        assert_eq!(m2.fixed_point_prefix(9).unwrap(), w("010110101"));
    }

    #[test]
    fn incidence_matrices() {
        let m = Morphism::phi(3).unwrap().incidence_matrix().unwrap();
        let rows: Vec<u32> = (0..3)
            .flat_map(|i| (0..3).map(move |j| (i, j)))
            .map(|(i, j)| u32::try_from(m.get(i, j)).unwrap())
            .collect();
        assert_eq!(rows, vec![1, 1, 1, 1, 0, 0, 0, 1, 2]);
        let m2 = Morphism::phi(2).unwrap().incidence_matrix().unwrap();
        let rows2: Vec<u32> = (0..2)
            .flat_map(|i| (0..2).map(move |j| (i, j)))
            .map(|(i, j)| u32::try_from(m2.get(i, j)).unwrap())
            .collect();
        assert_eq!(rows2, vec![1, 1, 1, 2]);
        let id = Morphism::identity(3).unwrap().incidence_matrix().unwrap();
        assert_eq!(id, IncidenceMatrix::identity(3));
    }

    #[test]
    fn primitivity() {
        for d in 2..=10 {
            let m = Morphism::phi(d).unwrap().incidence_matrix().unwrap();
            assert!(m.is_primitive(), "phi_{d} should be primitive");
        }
        assert!(!IncidenceMatrix::identity(2).is_primitive());
    }

    #[test]
    fn sync_points() {
        let g = SyncGenerator::PhiD { d: 4 };
        assert!(!has_sync_point_before_zero(&w("3"), g));
        assert!(has_sync_point_before_zero(&w("0"), g));
        assert!(has_sync_point_before_zero(&w("33"), g));
        assert!(!has_sync_point_before_zero(&w("111"), SyncGenerator::Pi));
        assert!(has_sync_point_before_zero(&w("110"), SyncGenerator::Pi));
    }

    #[test]
    fn text_round_trip() {
        let m = Morphism::phi(3).unwrap();
        let t = m.to_text();
        assert_eq!(Morphism::from_text(&t).unwrap().apply(&w("012")).unwrap(),
                   m.apply(&w("012")).unwrap());
        assert!(Morphism::from_text("0 -> 1\n2 -> 0").is_err());
    }

    #[test]
    fn length2_factor_list() {
        // factors of length 2 of u_d: (d-1)(d-1) plus 0i, i0 for 1 <= i <= d-1
        for d in 3..=5u8 {
            let m = Morphism::phi(d as usize).unwrap();
            let prefix = m.fixed_point_prefix(30_000).unwrap();
            let mut seen: std::collections::BTreeSet<[u8; 2]> = Default::default();
            for p in prefix.letters().windows(2) {
                seen.insert([p[0], p[1]]);
            }
            let mut expect: std::collections::BTreeSet<[u8; 2]> = Default::default();
            expect.insert([d - 1, d - 1]);
            for i in 1..=d - 1 {
                expect.insert([0, i]);
                expect.insert([i, 0]);
            }
            assert_eq!(seen, expect, "length-2 factors for d={d}");
        }
    }

    #[test]
    fn phi_palindrome_image() {
        let m = Morphism::phi(3).unwrap();
        for s in ["", "010", "0102010", "2", "00"] {
            let word = w(s);
            let img0 = m.apply(&word).unwrap().concat(&w("0"));
            assert_eq!(word.is_palindrome(), img0.is_palindrome(), "word {s}");
        }
    }

    proptest! {
        #[test]
        fn parikh_commutes_with_incidence(letters in proptest::collection::vec(0u8..3, 0..60)) {
            let m = Morphism::phi(3).unwrap();
            let word = Word::new(letters);
            let mat = m.incidence_matrix().unwrap();
            let lhs = m.apply(&word).unwrap().parikh(3).unwrap();
            let rhs = mat.mul_vec(&word.parikh(3).unwrap()).unwrap();
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn fixed_point_prefix_monotone(n in 1usize..200, k in 0usize..50) {
            let m = Morphism::phi(3).unwrap();
            let a = m.fixed_point_prefix(n).unwrap();
            let b = m.fixed_point_prefix(n + k).unwrap();
            prop_assert_eq!(&b.letters()[..n], a.letters());
        }

        #[test]
        fn pi_palindrome_image(letters in proptest::collection::vec(0u8..3, 0..40)) {
            let word = Word::new(letters);
            let pi = Morphism::pi(3).unwrap();
            let img = pi.apply(&word).unwrap().concat(&Word::letter(0));
            prop_assert_eq!(word.is_palindrome(), img.is_palindrome());
        }
    }
}
