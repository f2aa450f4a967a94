//! Shared helpers for the integration suites: quadrature and randomized
//! fixtures. Everything here is independent of the library's inference
//! paths so it can serve as an oracle against them.

#![allow(dead_code)]

use elmatch::likelihood::LikelihoodFamily;
use elmatch::moments::SampleSummary;
use elmatch::poly::{Poly2, Rational};
use elmatch::prior::PriorSpec;
use elmatch::rng::SplitMix64;

/// Composite Simpson rule with an odd number of nodes.
pub fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, nodes: usize) -> f64 {
    assert!(nodes >= 3 && nodes % 2 == 1, "simpson needs an odd node count");
    let h = (b - a) / (nodes - 1) as f64;
    let mut acc = f(a) + f(b);
    for i in 1..nodes - 1 {
        let w = if i % 2 == 1 { 4.0 } else { 2.0 };
        acc += w * f(a + i as f64 * h);
    }
    acc * h / 3.0
}

/// Uniform integer in [lo, hi].
pub fn rand_int(rng: &mut SplitMix64, lo: i64, hi: i64) -> i64 {
    lo + (rng.next_u64() % (hi - lo + 1) as u64) as i64
}

/// A random rational with numerator in [-8, 8] and denominator in [1, 6].
pub fn rand_rational(rng: &mut SplitMix64) -> Rational {
    Rational::new(rand_int(rng, -8, 8), rand_int(rng, 1, 6))
}

/// A random polynomial in `s` of degree at most `deg`.
pub fn rand_poly_s(rng: &mut SplitMix64, deg: u32) -> Poly2 {
    Poly2::from_terms((0..=deg).filter_map(|i| {
        if rng.next_u64() % 3 == 0 {
            None
        } else {
            Some((i, 0, rand_rational(rng)))
        }
    }))
}

/// A random polynomial in `(s, k)` of total degree at most 2.
pub fn rand_poly_sk(rng: &mut SplitMix64) -> Poly2 {
    let monomials = [(0, 0), (1, 0), (0, 1), (2, 0), (1, 1), (0, 2)];
    Poly2::from_terms(monomials.iter().filter_map(|&(i, j)| {
        if rng.next_u64() % 2 == 0 {
            None
        } else {
            Some((i, j, rand_rational(rng)))
        }
    }))
}

/// A random family with arbitrary coefficients (usually infeasible).
pub fn rand_family(rng: &mut SplitMix64, idx: usize) -> LikelihoodFamily {
    LikelihoodFamily::new(
        format!("random-{idx}"),
        rand_poly_s(rng, 2),
        rand_poly_s(rng, 2),
        rand_poly_sk(rng),
        rand_poly_sk(rng),
        rand_poly_sk(rng),
        rand_poly_sk(rng),
    )
    .expect("a1/a3 generated univariate")
}

/// A random family constructed to satisfy the order-one simple-prior
/// matching conditions exactly.
pub fn rand_feasible_family(rng: &mut SplitMix64, idx: usize) -> LikelihoodFamily {
    let a1 = rand_poly_s(rng, 1);
    let a1sq = &a1 * &a1;
    let a3 = Poly2::var_s().scale(&Rational::new(1, 3));
    let b2 = &a1sq.scale(&Rational::new(1, 2))
        + &Poly2::from_terms([
            (2, 0, Rational::new(5, 8)),
            (0, 1, Rational::new(-1, 3)),
            (0, 0, Rational::new(1, 1)),
        ]);
    let b4 = &(&Poly2::var_s().scale(&Rational::new(1, 3)) * &a1)
        + &Poly2::from_terms([
            (2, 0, Rational::new(-1, 2)),
            (0, 1, Rational::new(1, 4)),
            (0, 0, Rational::new(-1, 2)),
        ]);
    let b6 = Poly2::term(2, 0, Rational::new(1, 18));
    LikelihoodFamily::new(format!("feasible-{idx}"), a1, a3, rand_poly_sk(rng), b2, b4, b6)
        .expect("constructed univariate a-coefficients")
}

/// A random sample summary with moderate shape statistics (the regime the
/// expansion is meant for): g₄ respects the moment inequality.
pub fn rand_summary(rng: &mut SplitMix64, n: usize) -> SampleSummary {
    let mean = -2.0 + 4.0 * rng.next_open01();
    let m2 = 0.25 + 3.75 * rng.next_open01();
    let g3 = -1.5 + 3.0 * rng.next_open01();
    let g4 = 1.0 + g3 * g3 + 0.2 + 4.0 * rng.next_open01();
    SampleSummary::new(n, mean, m2, g3, g4).expect("valid synthetic summary")
}

/// A random prior from the representable classes.
pub fn rand_prior(rng: &mut SplitMix64) -> PriorSpec {
    match rng.next_u64() % 4 {
        0 => PriorSpec::Flat,
        1 => PriorSpec::skew_correcting(),
        2 => PriorSpec::skew_kurtosis_correcting(),
        _ => PriorSpec::Simple {
            chi: rand_poly_s(rng, 1),
        },
    }
}
