//! Exact-rational spectral pipeline: characteristic polynomial, dominant
//! eigenvalue, left eigenvector, the periodic-affine limit formula, the
//! per-family limits, and the closed-form asymptotic critical exponent.
//!
//! Everything is computed in arbitrary-precision rationals; the dominant
//! eigenvalue is an interval-bisection approximant whose residual tolerance
//! (default 1e-40) is far below every downstream comparison tolerance.

use num::{BigInt, BigRational, One, Signed, Zero};

use crate::morphism::{IncidenceMatrix, Morphism};
use crate::word::ParikhVector;
use crate::{Error, Result};

/// `x^n` for rationals by binary exponentiation.
pub fn rat_pow(x: &BigRational, n: usize) -> BigRational {
    let mut acc = BigRational::one();
    let mut base = x.clone();
    let mut n = n;
    while n > 0 {
        if n & 1 == 1 {
            acc *= &base;
        }
        base = &base * &base;
        n >>= 1;
    }
    acc
}

fn big(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// Default bisection tolerance, 1e-40.
pub fn default_tolerance() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u8).pow(40))
}

/// `g(t) = t^{d-1} (t-2)^2 - 1`, the defining function of the dominant
/// eigenvalue on `(2, 3)`.
pub fn lambda_residual(d: usize, t: &BigRational) -> BigRational {
    rat_pow(t, d - 1) * rat_pow(&(t - big(2)), 2) - BigRational::one()
}

/// Dominant eigenvalue of the incidence matrix of `phi_d`, by bisection on
/// `(2, 3)`: returned with `|g(lambda)| <= tol` and bracket width `<= tol`.
pub fn dominant_root(d: usize, tol: &BigRational) -> Result<BigRational> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("d must be at least 2, got {d}")));
    }
    if tol <= &BigRational::zero() {
        return Err(Error::InvalidInput("tolerance must be positive".into()));
    }
    let mut lo = big(2);
    let mut hi = big(3);
    let two = big(2);
    loop {
        let mid = (&lo + &hi) / &two;
        let g = lambda_residual(d, &mid);
        if g.abs() <= *tol && (&hi - &lo) <= *tol {
            return Ok(mid);
        }
        if g < BigRational::zero() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
}

/// Characteristic polynomial `t^d - 3 t^{d-1} + t^{d-2} + ... + t + 1` of
/// the incidence matrix of `phi_d`; coefficients in ascending degree.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct CharPoly {
    pub d: usize,
    pub coeffs: Vec<BigInt>,
}

impl CharPoly {
    pub fn new(d: usize) -> Result<CharPoly> {
        if d < 2 {
            return Err(Error::InvalidInput(format!("d must be at least 2, got {d}")));
        }
        let mut coeffs = vec![BigInt::one(); d + 1];
        coeffs[d - 1] = BigInt::from(-3);
        Ok(CharPoly { d, coeffs })
    }

    pub fn eval(&self, t: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * t + BigRational::from_integer(c.clone());
        }
        acc
    }

    /// Exact polynomial identity `chi_d(t) (t - 1) == t^{d-1} (t-2)^2 - 1`.
    pub fn factorization_identity_holds(&self) -> bool {
        // lhs = chi * (t - 1)
        let mut lhs = vec![BigInt::zero(); self.coeffs.len() + 1];
        for (i, c) in self.coeffs.iter().enumerate() {
            lhs[i + 1] += c;
            lhs[i] -= c;
        }
        // rhs = t^{d+1} - 4 t^d + 4 t^{d-1} - 1
        let mut rhs = vec![BigInt::zero(); self.d + 2];
        rhs[self.d + 1] = BigInt::one();
        rhs[self.d] = BigInt::from(-4);
        rhs[self.d - 1] = BigInt::from(4);
        rhs[0] = BigInt::from(-1);
        lhs == rhs
    }
}

/// Left eigenvector `z = ((L-2), (L-2)s_1, ..., (L-2)s_{d-2}, 1)` with
/// `s_i = L^i - sum_{k<i} L^k`, for `L` the dominant eigenvalue.
pub fn left_eigenvector(d: usize, lambda: &BigRational) -> Result<Vec<BigRational>> {
    if d < 2 {
        return Err(Error::InvalidInput(format!("d must be at least 2, got {d}")));
    }
    let head = lambda - big(2);
    let mut z = Vec::with_capacity(d);
    z.push(head.clone());
    let mut pow = BigRational::one(); // lambda^i
    let mut geom = BigRational::zero(); // sum_{k<i} lambda^k
    for _ in 1..d - 1 {
        geom += &pow;
        pow *= lambda;
        let s = &pow - &geom;
        z.push(&head * s);
    }
    z.push(BigRational::one());
    Ok(z)
}

/// Multiply a rational row vector by a big-integer matrix: `(v M)_j`.
fn row_times_matrix(v: &[BigRational], m: &IncidenceMatrix) -> Vec<BigRational> {
    let d = m.dim();
    (0..d)
        .map(|j| {
            (0..d)
                .map(|i| &v[i] * BigRational::from_integer(BigInt::from(m.get(i, j).clone())))
                .sum()
        })
        .collect()
}

/// Multiply a big-integer matrix by a rational column vector.
fn matrix_times_col(m: &IncidenceMatrix, v: &[BigRational]) -> Vec<BigRational> {
    let d = m.dim();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| BigRational::from_integer(BigInt::from(m.get(i, j).clone())) * &v[j])
                .sum()
        })
        .collect()
}

fn dot(a: &[BigRational], b: &[BigRational]) -> BigRational {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

/// `max_j |(z M)_j - lambda z_j|` for the incidence matrix of `phi_d`.
pub fn eigen_residual(d: usize, z: &[BigRational], lambda: &BigRational) -> Result<BigRational> {
    let m = Morphism::phi(d)?.incidence_matrix()?;
    let zm = row_times_matrix(z, &m);
    Ok(zm
        .iter()
        .zip(z)
        .map(|(a, b)| (a - lambda * b).abs())
        .max()
        .unwrap())
}

/// Bundled spectral data for one alphabet size.
pub struct SpectralData {
    pub d: usize,
    pub lambda: BigRational,
    pub z: Vec<BigRational>,
}

impl SpectralData {
    pub fn compute(d: usize, tol: &BigRational) -> Result<SpectralData> {
        let lambda = dominant_root(d, tol)?;
        let z = left_eigenvector(d, &lambda)?;
        Ok(SpectralData { d, lambda, z })
    }
}

/// Limit of `|x_n| / |y_n|` for the affine tracks `x_{n+1} = M x_n + l_n`
/// (with `l` purely periodic of period `p`) and `y_{n+1} = M y_n`:
/// `(z c + (L^p - 1) z x_0) / ((L^p - 1) z y_0)` where
/// `c = sum_j M^{p-1-j} l_j`.
pub fn limit_formula(
    m: &IncidenceMatrix,
    x0: &[BigRational],
    y0: &[BigRational],
    ell: &[Vec<BigRational>],
    z: &[BigRational],
    lambda: &BigRational,
) -> Result<BigRational> {
    let p = ell.len();
    if p == 0 {
        return Err(Error::InvalidInput("the schedule must have period >= 1".into()));
    }
    if !m.is_primitive() {
        return Err(Error::InvalidInput("the matrix must be primitive".into()));
    }
    let zy0 = dot(z, y0);
    if zy0.is_zero() {
        return Err(Error::Degenerate("z . y0 vanishes".into()));
    }
    let mut c = vec![BigRational::zero(); m.dim()];
    for l in ell {
        c = matrix_times_col(m, &c);
        for (ci, li) in c.iter_mut().zip(l) {
            *ci += li;
        }
    }
    let growth = rat_pow(lambda, p) - BigRational::one();
    Ok((dot(z, &c) + &growth * dot(z, x0)) / (growth * zy0))
}

fn parikh_to_rat(v: &ParikhVector) -> Vec<BigRational> {
    v.counts()
        .iter()
        .map(|c| BigRational::from_integer(BigInt::from(c.clone())))
        .collect()
}

/// The two family limits `(L_k, Ltilde_k)` of `|w_n|/|t_n|` and
/// `|w_n|/|s_n|`, from the closed-form expressions.
pub fn family_limits(d: usize, k: usize, lambda: &BigRational) -> Result<(BigRational, BigRational)> {
    if d < 3 || k > d - 1 {
        return Err(Error::InvalidInput(format!(
            "family limits need d >= 3 and k <= d-1; got d = {d}, k = {k}"
        )));
    }
    let one = BigRational::one();
    let lpow = rat_pow(lambda, d - 1);
    let growth = &lpow - &one; // Lambda^{d-1} - 1
    let head = lambda - big(2);
    let geom = (&lpow - &one) / (lambda - &one); // sum_{j<d-1} Lambda^j
    let zc = if k == 0 || k == d - 1 {
        &geom * &head + big(2)
    } else {
        &geom * &head + rat_pow(lambda, d - 1 - k) + &one
    };
    // z x_0 is 1 for k = 0 (w_0 = e_{d-1}) and 0 otherwise
    let num = if k == 0 { &zc + &growth } else { zc };
    let l = &num / &growth; // denominator z t_0 = 1
    let zs0 = rat_pow(lambda, d - 1 - k) * &head; // z s_0
    let ltilde = &num / (&growth * zs0);
    Ok((l, ltilde))
}

/// The same two limits evaluated through the generic [`limit_formula`] with
/// the family's actual schedule and tracks; must agree with
/// [`family_limits`] up to the eigenvalue approximation error.
pub fn family_limits_via_formula(
    d: usize,
    k: usize,
    spectral: &SpectralData,
) -> Result<(BigRational, BigRational)> {
    if d < 3 || k > d - 1 {
        return Err(Error::InvalidInput(format!(
            "family limits need d >= 3 and k <= d-1; got d = {d}, k = {k}"
        )));
    }
    let m = Morphism::phi(d)?.incidence_matrix()?;
    let chain = crate::bispecial::triplet_chain(d, k, 0, 8)?;
    let entry = &chain.entries[0];
    let x0 = parikh_to_rat(&entry.parikh);
    let t0 = parikh_to_rat(&entry.t);
    let s0 = parikh_to_rat(&entry.s);
    let ell: Vec<Vec<BigRational>> = (0..d - 1)
        .map(|n| Ok(parikh_to_rat(&crate::bispecial::ell_schedule(d, k, n)?)))
        .collect::<Result<_>>()?;
    let l = limit_formula(&m, &x0, &t0, &ell, &spectral.z, &spectral.lambda)?;
    let ltilde = limit_formula(&m, &x0, &s0, &ell, &spectral.z, &spectral.lambda)?;
    Ok((l, ltilde))
}

/// Numeric oracle: iterate the recurrences `steps` times and return the
/// exact ratios `(|w_n|/|t_n|, |w_n|/|s_n|)` at the last step.
pub fn iterate_family_ratios(d: usize, k: usize, steps: usize) -> Result<(BigRational, BigRational)> {
    let chain = crate::bispecial::triplet_chain(d, k, steps, 0)?;
    let entry = chain.entries.last().unwrap();
    let w = BigInt::from(entry.parikh.total());
    let t = BigInt::from(entry.t.total());
    let s = BigInt::from(entry.s.total());
    if t.is_zero() || s.is_zero() {
        return Err(Error::Degenerate("zero track length".into()));
    }
    Ok((
        BigRational::new(w.clone(), t),
        BigRational::new(w, s),
    ))
}

/// Closed-form asymptotic critical exponent `1 + 1/(3 - Lambda)`.
pub fn e_star_from_lambda(lambda: &BigRational) -> BigRational {
    BigRational::one() + BigRational::one() / (big(3) - lambda)
}

/// `E*(u_d) = 1 + 1/(3 - Lambda_d)` at the default tolerance.
pub fn e_star_closed(d: usize) -> Result<BigRational> {
    Ok(e_star_from_lambda(&dominant_root(d, &default_tolerance())?))
}

/// Parse a decimal literal like `"2.7071067811"` into an exact rational;
/// convenience for comparisons against published decimal values.
pub fn rational_from_decimal(s: &str) -> Result<BigRational> {
    let (int_part, frac_part) = s.split_once('.').unwrap_or((s, ""));
    let digits: String = format!("{int_part}{frac_part}");
    let n: BigInt = digits
        .parse()
        .map_err(|_| Error::InvalidInput(format!("bad decimal literal {s:?}")))?;
    Ok(BigRational::new(n, BigInt::from(10u8).pow(frac_part.len() as u32)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tol(exp: u32) -> BigRational {
        BigRational::new(BigInt::one(), BigInt::from(10u8).pow(exp))
    }

    #[test]
    fn dominant_roots() {
        let t = default_tolerance();
        // d = 2: (3 + sqrt 5)/2
        let l2 = dominant_root(2, &t).unwrap();
        assert!((&l2 - rational_from_decimal("2.61803398874989484820").unwrap()).abs() < tol(18));
        // d = 3: 1 + sqrt 2
        let l3 = dominant_root(3, &t).unwrap();
        assert!((&l3 - rational_from_decimal("2.41421356237309504880").unwrap()).abs() < tol(18));
        // d = 5: real root of x^3 - 2x^2 - 1
        let l5 = dominant_root(5, &t).unwrap();
        assert!((&l5 - rational_from_decimal("2.20556943040059031170").unwrap()).abs() < tol(18));
        let cubic = &l5 * &l5 * &l5 - BigRational::from_integer(2.into()) * &l5 * &l5
            - BigRational::one();
        assert!(cubic.abs() < tol(35));
        assert!(dominant_root(1, &t).is_err());
    }

    #[test]
    fn char_poly_identity() {
        for d in 2..=20 {
            let chi = CharPoly::new(d).unwrap();
            assert!(chi.factorization_identity_holds(), "d = {d}");
            let lambda = dominant_root(d, &default_tolerance()).unwrap();
            assert!(chi.eval(&lambda).abs() < tol(35), "chi root residual d = {d}");
        }
    }

    #[test]
    fn eigenvector_residuals() {
        for d in 2..=12 {
            let sd = SpectralData::compute(d, &default_tolerance()).unwrap();
            assert_eq!(sd.z.len(), d);
            assert_eq!(sd.z[d - 1], BigRational::one());
            assert_eq!(sd.z[0], &sd.lambda - big(2));
            let res = eigen_residual(d, &sd.z, &sd.lambda).unwrap();
            assert!(res < tol(30), "residual too large for d = {d}");
        }
    }

    #[test]
    fn limit_formula_trivial() {
        let m = Morphism::phi(3).unwrap().incidence_matrix().unwrap();
        let sd = SpectralData::compute(3, &default_tolerance()).unwrap();
        let x0 = vec![big(1), big(2), big(1)];
        let zero = vec![BigRational::zero(); 3];
        let l = limit_formula(&m, &x0, &x0, &[zero], &sd.z, &sd.lambda).unwrap();
        assert!((&l - BigRational::one()).abs() < tol(30));
        let y0 = vec![BigRational::zero(); 3];
        assert!(limit_formula(&m, &x0, &y0, &[x0.clone()], &sd.z, &sd.lambda).is_err());
    }

    #[test]
    fn family_limit_values() {
        for d in 3..=6 {
            let sd = SpectralData::compute(d, &default_tolerance()).unwrap();
            let peak = BigRational::one() / (big(3) - &sd.lambda);
            for k in 0..d {
                let (l, lt) = family_limits(d, k, &sd.lambda).unwrap();
                let (lf, ltf) = family_limits_via_formula(d, k, &sd).unwrap();
                assert!((&l - &lf).abs() < tol(25), "L mismatch d={d} k={k}");
                assert!((&lt - &ltf).abs() < tol(25), "Ltilde mismatch d={d} k={k}");
                let fam_max = l.clone().max(lt.clone());
                if k == 0 || k == d - 1 {
                    assert!((&fam_max - &peak).abs() < tol(25), "peak d={d} k={k}");
                } else {
                    assert!(fam_max < peak, "interior family at peak d={d} k={k}");
                }
            }
        }
    }

    #[test]
    fn iteration_matches_formula() {
        let sd = SpectralData::compute(4, &default_tolerance()).unwrap();
        for k in 0..4 {
            let (l, lt) = family_limits(4, k, &sd.lambda).unwrap();
            let (li, lti) = iterate_family_ratios(4, k, 200).unwrap();
            assert!((&l - &li).abs() < tol(8), "L iteration d=4 k={k}");
            assert!((&lt - &lti).abs() < tol(8), "Ltilde iteration d=4 k={k}");
        }
    }

    #[test]
    fn e_star_values() {
        let e2 = e_star_closed(2).unwrap();
        assert!((&e2 - rational_from_decimal("3.6180339887").unwrap()).abs() < tol(10));
        let e3 = e_star_closed(3).unwrap();
        assert!((&e3 - rational_from_decimal("2.7071067812").unwrap()).abs() < tol(9));
        let e5 = e_star_closed(5).unwrap();
        assert!((&e5 - rational_from_decimal("2.2588").unwrap()).abs() < tol(4));
        // values decrease toward 2 as d grows
        let mut prev = e2;
        for d in 3..=12 {
            let e = e_star_closed(d).unwrap();
            assert!(e < prev);
            assert!(e > big(2));
            prev = e;
        }
    }
}
