//! End-to-end acceptance suite: one test and one printed pass/fail line per
//! criterion. Run with `--nocapture` to see the lines.

use std::time::Instant;

use num::rational::Ratio;
use num::{BigInt, BigRational, One, Signed, ToPrimitive};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use richseq::exponent::{
    asymptotic_exponent_estimate, critical_exponent_prefix, maximal_repetitions, overlap_census,
};
use richseq::oracle::{naive_maximal_repetitions, slow_palindrome_census};
use richseq::richness::palindrome_census;
use richseq::spectral::{
    dominant_root, e_star_closed, eigen_residual, family_limits, iterate_family_ratios,
    lambda_residual, left_eigenvector, rational_from_decimal,
};
use richseq::verify::{check_chains, check_ordinariness, check_return_words};
use richseq::{bispecial, Morphism, Word};

fn tol(exp: u32) -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(10u8).pow(exp))
}

fn u(d: usize, n: usize) -> Word {
    Morphism::phi(d).unwrap().fixed_point_prefix(n).unwrap()
}

fn pi_u(d: usize, n: usize) -> Word {
    let image = Morphism::pi(d).unwrap().apply(&u(d, n)).unwrap();
    Word::from(&image.letters()[..n.min(image.len())])
}

fn thue_morse(n: usize) -> Word {
    Morphism::new(vec![Word::parse("01").unwrap(), Word::parse("10").unwrap()], 2)
        .unwrap()
        .fixed_point_prefix(n)
        .unwrap()
}

fn report(name: &str, passed: bool, detail: &str) {
    println!(
        "{name}: {} — {detail}",
        if passed { "pass" } else { "FAIL" }
    );
    assert!(passed, "{name}: {detail}");
}

#[test]
fn c01_spectral_exactness() {
    let start = Instant::now();
    let bisect = tol(25);
    let root_bound = tol(12);
    let eigen_bound = tol(10);
    let mut worst_root = BigRational::from_integer(BigInt::from(0));
    let mut worst_eigen = BigRational::from_integer(BigInt::from(0));
    for d in 2..=20 {
        let lambda = dominant_root(d, &bisect).unwrap();
        let root = lambda_residual(d, &lambda).abs();
        let z = left_eigenvector(d, &lambda).unwrap();
        let eigen = eigen_residual(d, &z, &lambda).unwrap();
        assert!(root < root_bound, "root residual too large for d = {d}");
        assert!(eigen < eigen_bound, "eigenvector residual too large for d = {d}");
        worst_root = worst_root.max(root);
        worst_eigen = worst_eigen.max(eigen);
    }
    let elapsed = start.elapsed();
    report(
        "c01 spectral-exactness",
        elapsed.as_secs_f64() < 1.0,
        &format!(
            "d = 2..20, worst residuals {:.3e} (root) / {:.3e} (eigenvector) in {:.2?}",
            worst_root.to_f64().unwrap(),
            worst_eigen.to_f64().unwrap(),
            elapsed
        ),
    );
}

#[test]
fn c02_closed_form_targets() {
    let targets = [
        (2usize, "3.6180339887", 10u32),
        (3, "2.7071067812", 10),
        (5, "2.2588", 4),
    ];
    let mut ok = true;
    let mut details = Vec::new();
    for (d, decimal, digits) in targets {
        let value = e_star_closed(d).unwrap();
        let diff = (&value - rational_from_decimal(decimal).unwrap()).abs();
        let hit = diff < tol(digits);
        ok &= hit;
        details.push(format!("E*(u_{d}) = {:.10}", value.to_f64().unwrap()));
    }
    report("c02 closed-form-targets", ok, &details.join(", "));
}

#[test]
fn c03_limit_formula_agreement() {
    let start = Instant::now();
    let iter_tol = tol(8);
    let peak_tol = tol(10);
    let mut checked = 0;
    for d in 3..=8 {
        let lambda = dominant_root(d, &tol(40)).unwrap();
        let peak = BigRational::one()
            / (BigRational::from_integer(BigInt::from(3)) - &lambda);
        for k in 0..d {
            let (l, lt) = family_limits(d, k, &lambda).unwrap();
            let (il, ilt) = iterate_family_ratios(d, k, 200).unwrap();
            assert!((&l - il).abs() < iter_tol, "L mismatch d = {d}, k = {k}");
            assert!((&lt - ilt).abs() < iter_tol, "Ltilde mismatch d = {d}, k = {k}");
            let family_max = l.max(lt);
            if k == 0 || k == d - 1 {
                assert!(
                    (&family_max - &peak).abs() < peak_tol,
                    "peak not attained at d = {d}, k = {k}"
                );
            } else {
                assert!(
                    family_max < &peak - &peak_tol,
                    "interior family reaches the peak at d = {d}, k = {k}"
                );
            }
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    report(
        "c03 limit-formula-agreement",
        elapsed.as_secs_f64() < 10.0,
        &format!("{checked} family limits for d = 3..8 in {elapsed:.2?}"),
    );
}

#[test]
fn c04_richness_sweep() {
    let start = Instant::now();
    let n = 100_000;
    for d in [3, 4, 5] {
        for (label, word) in [("u", u(d, n)), ("projection", pi_u(d, n))] {
            let census = palindrome_census(&word);
            for m in 0..=word.len() {
                assert_eq!(
                    census.per_prefix[m],
                    m + 1,
                    "defect at d = {d}, {label}, prefix {m}"
                );
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "c04 richness-sweep",
        elapsed.as_secs_f64() < 30.0,
        &format!("defect 0 on every prefix, d = 3,4,5, length {n} in {elapsed:.2?}"),
    );
}

#[test]
fn c05_ordinariness_sweep() {
    let mut details = Vec::new();
    for d in [3, 4, 5] {
        let check = check_ordinariness(d, 200_000, 400).unwrap();
        assert!(check.passed, "{}", check.detail);
        details.push(check.detail);
    }
    report("c05 ordinariness-sweep", true, &details.join("; "));
}

#[test]
fn c06_return_word_count() {
    let mut details = Vec::new();
    for d in [3, 4, 5] {
        let check = check_return_words(d, 100_000, 40).unwrap();
        assert!(check.passed, "{}", check.detail);
        details.push(check.detail);
    }
    report("c06 return-word-count", true, &details.join("; "));
}

#[test]
fn c07_chain_oracle_completeness() {
    let mut details = Vec::new();
    for d in [3, 4, 5] {
        let check = check_chains(d, 200_000, 200).unwrap();
        assert!(check.passed, "{}", check.detail);
        details.push(check.detail);
    }
    report("c07 chain-oracle-completeness", true, &details.join("; "));
}

#[test]
fn c08_ratio_convergence() {
    let bound = tol(6);
    let mut checked = 0;
    for d in [3usize, 4, 5] {
        let lambda = dominant_root(d, &tol(40)).unwrap();
        let peak = BigRational::one()
            / (BigRational::from_integer(BigInt::from(3)) - &lambda);
        for k in [0, d - 1] {
            let chain = bispecial::triplet_chain(d, k, 80, 0).unwrap();
            let ratio = chain.ratio_at(80).unwrap();
            assert!(
                (&ratio - &peak).abs() < bound,
                "ratio at depth 80 off the limit for d = {d}, k = {k}"
            );
            checked += 1;
        }
    }
    report(
        "c08 ratio-convergence",
        true,
        &format!("{checked} depth-80 exact ratios within 1e-6 of their limits"),
    );
}

#[test]
fn c09_empirical_exponent_band() {
    let start = Instant::now();
    let n = 1_000_000;
    let lo = Ratio::new(26u64, 10);
    let hi = Ratio::new(27_072u64, 10_000);
    let mut details = Vec::new();
    for (label, word) in [("u_3", u(3, n)), ("projection", pi_u(3, n))] {
        let est = asymptotic_exponent_estimate(&word, 100).unwrap();
        assert!(
            est >= lo && est <= hi,
            "{label}: estimate {est} outside the band"
        );
        details.push(format!(
            "{label} {:.5}",
            *est.numer() as f64 / *est.denom() as f64
        ));
    }
    let control = thue_morse(100_000);
    assert_eq!(critical_exponent_prefix(&control), Ratio::new(2, 1));
    assert!(overlap_census(&control, 10).is_empty());
    details.push("control exactly 2, no overlaps".to_string());
    let elapsed = start.elapsed();
    report(
        "c09 empirical-exponent-band",
        elapsed.as_secs_f64() < 60.0,
        &format!("{} in {elapsed:.2?}", details.join(", ")),
    );
}

#[test]
fn c10_oracle_equivalence() {
    let mut rng = StdRng::seed_from_u64(0x5eed);
    for _ in 0..1000 {
        let alphabet = rng.gen_range(2u8..=5);
        let len = rng.gen_range(0usize..=500);
        let word = Word::new((0..len).map(|_| rng.gen_range(0..alphabet)).collect());
        assert_eq!(
            palindrome_census(&word).per_prefix,
            slow_palindrome_census(&word),
            "census mismatch on a random word of length {len}"
        );
    }
    let floor = Ratio::new(3u64, 2);
    let mut compared = 0;
    for word in [u(3, 2000), u(4, 2000), u(5, 2000), thue_morse(2000)] {
        assert_eq!(
            maximal_repetitions(&word, floor).unwrap(),
            naive_maximal_repetitions(&word, floor)
        );
        compared += 1;
    }
    for _ in 0..50 {
        let alphabet = rng.gen_range(2u8..=4);
        let len = rng.gen_range(0usize..=400);
        let word = Word::new((0..len).map(|_| rng.gen_range(0..alphabet)).collect());
        assert_eq!(
            maximal_repetitions(&word, floor).unwrap(),
            naive_maximal_repetitions(&word, floor),
            "repetition mismatch on a random word of length {len}"
        );
        compared += 1;
    }
    report(
        "c10 oracle-equivalence",
        true,
        &format!("1000 palindrome censuses and {compared} repetition scans agree"),
    );
}
