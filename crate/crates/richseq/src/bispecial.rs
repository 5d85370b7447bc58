//! Symbolic construction of the bispecial factors of `u_d`: the palindromic
//! seeds `F_i`, the triplet map `f`, the Parikh recurrences of the bispecial
//! families, and the shortest-return-word Parikh tracks.

use std::collections::BTreeSet;

use num::{BigInt, BigRational, BigUint};

use crate::morphism::{IncidenceMatrix, Morphism};
use crate::word::{Letter, ParikhVector, Word};
use crate::{Error, Result};

fn check_d(d: usize) -> Result<()> {
    if d < 3 {
        return Err(Error::InvalidInput(format!(
            "the bispecial engine requires d >= 3, got {d}"
        )));
    }
    if d > 32 {
        return Err(Error::InvalidInput("alphabet sizes above 32 are not supported".into()));
    }
    Ok(())
}

/// The palindromic seed `F_i`: `F_0` is empty, `F_i = phi(F_{i-1}).0`.
pub fn f_word(d: usize, i: usize) -> Result<Word> {
    check_d(d)?;
    if i > d - 1 {
        return Err(Error::InvalidInput(format!(
            "F_i index {i} out of range for d = {d}"
        )));
    }
    let phi = Morphism::phi(d)?;
    let mut w = Word::empty();
    for _ in 0..i {
        w = phi.apply(&w)?.concat(&Word::letter(0));
    }
    Ok(w)
}

/// Expected extension set of the seed `F_i`: `(d-1) F_i (d-1)` together
/// with `i F_i k` and `k F_i i` for every `k` from `i+1` to `d-1`.
pub fn f_word_extension_set(d: usize, i: usize) -> Result<BTreeSet<(Letter, Letter)>> {
    check_d(d)?;
    if i > d - 1 {
        return Err(Error::InvalidInput(format!(
            "F_i index {i} out of range for d = {d}"
        )));
    }
    let last = (d - 1) as Letter;
    let mut set = BTreeSet::from([(last, last)]);
    for k in i + 1..d {
        set.insert((i as Letter, k as Letter));
        set.insert((k as Letter, i as Letter));
    }
    Ok(set)
}

/// A bispecial factor together with one left and one right extension letter.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Triplet {
    pub left: Letter,
    pub word: Word,
    pub right: Letter,
}

/// The `d` initial triplets: `(0, eps, k)` for `k < d-1` and `(0, d-1, 0)`.
pub fn initial_triplets(d: usize) -> Result<Vec<Triplet>> {
    check_d(d)?;
    let mut out: Vec<Triplet> = (0..d - 1)
        .map(|k| Triplet {
            left: 0,
            word: Word::empty(),
            right: k as Letter,
        })
        .collect();
    out.push(Triplet {
        left: 0,
        word: Word::letter((d - 1) as Letter),
        right: 0,
    });
    Ok(out)
}

/// The offspring map `f`: extension letters advance cyclically modulo
/// `d-1`; the middle word becomes `phi(w).0`, with `d-1` prepended when the
/// left letter was `d-2` and appended when the right letter was `d-2`.
pub fn f_image(d: usize, t: &Triplet) -> Result<Triplet> {
    check_d(d)?;
    let last = (d - 1) as Letter;
    let phi = Morphism::phi(d)?;
    let mut w = phi.apply(&t.word)?.concat(&Word::letter(0));
    if t.left == last - 1 {
        w = Word::letter(last).concat(&w);
    }
    if t.right == last - 1 {
        w = w.concat(&Word::letter(last));
    }
    Ok(Triplet {
        left: (t.left + 1) % (last.max(1)),
        word: w,
        right: (t.right + 1) % (last.max(1)),
    })
}

/// Parikh increment of family `k` at step `n` (period `d-1`).
pub fn ell_schedule(d: usize, k: usize, n: usize) -> Result<ParikhVector> {
    check_d(d)?;
    if k > d - 1 {
        return Err(Error::InvalidInput(format!("family {k} out of range for d = {d}")));
    }
    let r = n % (d - 1);
    let mut v = ParikhVector::basis(d, 0);
    if k == 0 || k == d - 1 {
        if r == d - 2 {
            v = v
                .add(&ParikhVector::basis(d, d - 1))?
                .add(&ParikhVector::basis(d, d - 1))?;
        }
    } else if r == k - 1 || r == d - 2 {
        v = v.add(&ParikhVector::basis(d, d - 1))?;
    }
    Ok(v)
}

/// One depth of a bispecial family.
#[derive(Clone, Debug)]
pub struct ChainEntry {
    pub depth: usize,
    pub left: Letter,
    pub right: Letter,
    /// Explicit bispecial word, materialized while its length stays within
    /// the configured cap.
    pub word: Option<Word>,
    /// Parikh vector of the bispecial word, from the recurrence.
    pub parikh: ParikhVector,
    /// First shortest-return-word track, `t_n = M^n e_{d-1}`.
    pub t: ParikhVector,
    /// Second track, `s_n = M^n (M^{d-1-k} e_0)`.
    pub s: ParikhVector,
}

/// A fully evaluated bispecial family.
#[derive(Clone, Debug)]
pub struct TripletChain {
    pub d: usize,
    pub family: usize,
    pub entries: Vec<ChainEntry>,
}

impl TripletChain {
    /// Exact ratio `|w_n| / min(|t_n|, |s_n|)` at depth `n`.
    pub fn ratio_at(&self, n: usize) -> Result<BigRational> {
        let e = self
            .entries
            .get(n)
            .ok_or_else(|| Error::Query(format!("depth {n} not evaluated")))?;
        let num = e.parikh.total();
        let den = e.t.total().min(e.s.total());
        if den == BigUint::from(0u32) {
            return Err(Error::Degenerate("zero return-word length".into()));
        }
        Ok(BigRational::new(
            BigInt::from(num),
            BigInt::from(den),
        ))
    }
}

/// Evaluate family `k` of `u_d` to depth `n_max`, starting from the initial
/// triplet `T_{d-1-k}`. Words are materialized while no longer than
/// `word_cap` letters; Parikh vectors and return tracks are always kept, and
/// each materialized word is asserted to match its recurrence value.
pub fn triplet_chain(d: usize, k: usize, n_max: usize, word_cap: usize) -> Result<TripletChain> {
    check_d(d)?;
    if k > d - 1 {
        return Err(Error::InvalidInput(format!("family {k} out of range for d = {d}")));
    }
    let m = Morphism::phi(d)?.incidence_matrix()?;
    let start = initial_triplets(d)?.swap_remove(d - 1 - k);
    let mut parikh = start.word.parikh(d)?;
    let mut t = ParikhVector::basis(d, d - 1);
    let mut s = ParikhVector::basis(d, 0);
    for _ in 0..d - 1 - k {
        s = m.mul_vec(&s)?;
    }
    let mut triplet = Some(start);
    let mut entries = Vec::with_capacity(n_max + 1);
    let (mut left, mut right) = {
        let tr = triplet.as_ref().unwrap();
        (tr.left, tr.right)
    };
    for n in 0..=n_max {
        if let Some(tr) = &triplet {
            assert_eq!(
                tr.word.parikh(d)?,
                parikh,
                "recurrence mismatch at depth {n} of family {k} (d = {d})"
            );
        }
        entries.push(ChainEntry {
            depth: n,
            left,
            right,
            word: triplet.as_ref().map(|tr| tr.word.clone()),
            parikh: parikh.clone(),
            t: t.clone(),
            s: s.clone(),
        });
        if n == n_max {
            break;
        }
        parikh = m.mul_vec(&parikh)?.add(&ell_schedule(d, k, n)?)?;
        t = m.mul_vec(&t)?;
        s = m.mul_vec(&s)?;
        left = (left + 1) % (d as Letter - 1);
        right = (right + 1) % (d as Letter - 1);
        triplet = match triplet {
            Some(tr) => {
                let next = f_image(d, &tr)?;
                (next.word.len() <= word_cap).then_some(next)
            }
            None => None,
        };
    }
    Ok(TripletChain {
        d,
        family: k,
        entries,
    })
}

/// The two shortest complete return word candidates to the base bispecial
/// factor of family `k`.
#[derive(Clone, Debug)]
pub struct ReturnCandidates {
    /// The base bispecial factor `w`.
    pub base: Word,
    /// `A = phi^k(d-1) . w`; absent for `k = d-1` where it coincides with `B`.
    pub a: Option<Word>,
    /// `B = w . phi^{d-1}(0)`.
    pub b: Word,
}

impl ReturnCandidates {
    /// Parikh vector of the return word of `A` (complete return word minus
    /// the trailing base), `M^k e_{d-1}`.
    pub fn a_return_parikh(d: usize, k: usize) -> Result<ParikhVector> {
        let m = Morphism::phi(d)?.incidence_matrix()?;
        let mut v = ParikhVector::basis(d, d - 1);
        for _ in 0..k {
            v = m.mul_vec(&v)?;
        }
        Ok(v)
    }

    /// Parikh vector of the return word of `B`, `M^{d-1} e_0`.
    pub fn b_return_parikh(d: usize) -> Result<ParikhVector> {
        let m = Morphism::phi(d)?.incidence_matrix()?;
        let mut v = ParikhVector::basis(d, 0);
        for _ in 0..d - 1 {
            v = m.mul_vec(&v)?;
        }
        Ok(v)
    }
}

/// Complete return word candidates to the base bispecial of family `k`:
/// for `k < d-1` the base is `F_k (d-1)` with candidates `A` and `B`; for
/// `k = d-1` the base is `(d-1) F_{d-1} (d-1)` and only `B` exists.
pub fn shortest_return_candidates(d: usize, k: usize) -> Result<ReturnCandidates> {
    check_d(d)?;
    if k > d - 1 {
        return Err(Error::InvalidInput(format!("family {k} out of range for d = {d}")));
    }
    let phi = Morphism::phi(d)?;
    let last = Word::letter((d - 1) as Letter);
    let phi_pow_last = phi.apply_power(&last, k)?;
    let phi_pow_zero = phi.apply_power(&Word::letter(0), d - 1)?;
    if k < d - 1 {
        let base = f_word(d, k)?.concat(&last);
        Ok(ReturnCandidates {
            a: Some(phi_pow_last.concat(&base)),
            b: base.concat(&phi_pow_zero),
            base,
        })
    } else {
        let base = last.concat(&f_word(d, d - 1)?).concat(&last);
        Ok(ReturnCandidates {
            a: None,
            b: base.concat(&phi_pow_zero),
            base,
        })
    }
}

/// One identity of the word-identity suite.
#[derive(Clone, Debug)]
pub struct IdentityCheck {
    pub item: usize,
    pub passed: bool,
    pub detail: String,
}

/// Direct word-level verification of the nine structural identities behind
/// the engine; `prefix_len` sizes the generated prefix used for the
/// language-membership item.
pub fn identity_suite(d: usize, prefix_len: usize) -> Result<Vec<IdentityCheck>> {
    check_d(d)?;
    let phi = Morphism::phi(d)?;
    let last = Word::letter((d - 1) as Letter);
    let zero = Word::letter(0);
    let f: Vec<Word> = (0..d).map(|i| f_word(d, i)).collect::<Result<_>>()?;
    let phi0: Vec<Word> = (0..=d)
        .map(|k| phi.apply_power(&zero, k))
        .collect::<Result<_>>()?;
    let phil: Vec<Word> = (0..d)
        .map(|k| phi.apply_power(&last, k))
        .collect::<Result<_>>()?;
    let mut out = Vec::new();
    let mut check = |item: usize, passed: bool, detail: String| {
        out.push(IdentityCheck {
            item,
            passed,
            detail,
        });
    };

    // 1: F_k = phi^{k-1}(0) phi^{k-2}(0) ... phi(0) 0
    let ok1 = (1..d).all(|k| {
        let mut prod = Word::empty();
        for j in (0..k).rev() {
            prod = prod.concat(&phi0[j]);
        }
        prod == f[k]
    });
    check(1, ok1, "telescoping product for F_k".into());

    // 2: only letters below k occur in F_k
    let ok2 = (0..d).all(|k| f[k].max_letter().map_or(true, |m| (m as usize) < k));
    check(2, ok2, "letter bound in F_k".into());

    // 3: F_k . k = phi^k(0)
    let ok3 = (0..d).all(|k| f[k].concat(&Word::letter(k as Letter)) == phi0[k]);
    check(3, ok3, "F_k k = phi^k(0)".into());

    // 4: phi(F_k) 0 = phi^k(0) F_k
    let ok4 = (0..d).all(|k| {
        phi.apply(&f[k])
            .map(|img| img.concat(&zero) == phi0[k].concat(&f[k]))
            .unwrap_or(false)
    });
    check(4, ok4, "phi(F_k) 0 = phi^k(0) F_k".into());

    // 5: phi^d(0) = phi^{d-1}(0) phi^{d-1}(0) (d-1)
    let ok5 = phi0[d] == phi0[d - 1].concat(&phi0[d - 1]).concat(&last);
    check(5, ok5, "doubling identity for phi^d(0)".into());

    // 6: F_k (d-1) is a suffix of F_{d-1} (d-1) = phi^{d-1}(0)
    let full = f[d - 1].concat(&last);
    let ok6 = full == phi0[d - 1]
        && (0..d).all(|k| {
            let suf = f[k].concat(&last);
            full.letters().ends_with(suf.letters())
        });
    check(6, ok6, "F_k (d-1) suffix relation".into());

    // 7: phi^k(d-1) F_k (d-1) occurs in the sequence
    let prefix = phi.fixed_point_prefix(prefix_len)?;
    let ok7 = (0..d).all(|k| {
        let cand = phil[k].concat(&f[k]).concat(&last);
        prefix
            .letters()
            .windows(cand.len())
            .any(|win| win == cand.letters())
    });
    check(7, ok7, "membership of phi^k(d-1) F_k (d-1)".into());

    // 8: phi^k(d-1) = F_k (d-1)(d-1) phi(d-1) ... phi^{k-1}(d-1)
    let ok8 = (1..d).all(|k| {
        let mut rhs = f[k].concat(&last).concat(&last);
        for j in 1..k {
            rhs = rhs.concat(&phil[j]);
        }
        rhs == phil[k]
    });
    check(8, ok8, "telescoping product for phi^k(d-1)".into());

    // 9: letters other than d-1 in phi^k(d-1) are below k
    let ok9 = (0..d).all(|k| {
        phil[k]
            .letters()
            .iter()
            .all(|&i| i == (d - 1) as Letter || (i as usize) < k)
    });
    check(9, ok9, "letter bound in phi^k(d-1)".into());

    Ok(out)
}

/// Incidence matrix of `phi_d`, shared by the recurrence helpers.
pub fn phi_matrix(d: usize) -> Result<IncidenceMatrix> {
    Morphism::phi(d)?.incidence_matrix()
}
