//! Posterior expansion coefficients and closed-form posterior quantiles.
//!
//! Given a likelihood family, a prior, and a sample summary, the posterior
//! density of the pivot is a normal density times polynomial corrections
//! with coefficients `R₁, R₂, R₃, R₄, R₆`; the (1 − α)th posterior quantile
//! of θ then has the closed first- and second-order approximations
//!
//! ```text
//! θ₁ = x̄ + (m₂/n)^{1/2} (z + n^{-1/2} u₁)
//! θ₂ = θ₁ + (m₂/n)^{1/2} n^{-1} u₂
//! ```
//!
//! with z the normal quantile. Quantiles always come from these closed
//! forms, never from numerical inversion; the density is exposed for
//! diagnostics and cross-checks.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::likelihood::LikelihoodFamily;
use crate::moments::SampleSummary;
use crate::normal::normal_pdf;
use crate::prior::PriorSpec;

pub use crate::normal::{inverse_normal_cdf, normal_cdf};

/// The five coefficients of the posterior pivot density.
///
/// `r3` and `r6` depend only on the family and the sample shape statistics;
/// the prior enters through `r1`, `r2`, `r4`. The `b0` coefficient of the
/// likelihood never appears: it perturbs the kernel by a θ-free factor.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PosteriorCoeffs {
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub r4: f64,
    pub r6: f64,
}

/// Shared core of the sample-side and population-side coefficient formulas:
/// both evaluate the same expressions, one at (m₂^{1/2}, g₃, g₄) with the
/// data-level ψ derivatives, the other at (σ, β₃, β₄) with the
/// population-level ones.
pub(crate) fn expansion_coeffs(
    family: &LikelihoodFamily,
    s: f64,
    k: f64,
    scale: f64,
    psi1: f64,
    psi11: f64,
) -> PosteriorCoeffs {
    let a1 = family.a1.eval(s, k);
    let a3 = family.a3.eval(s, k);
    PosteriorCoeffs {
        r1: a1 + scale * psi1,
        r2: family.b2.eval(s, k)
            + scale * a1 * psi1
            + 0.5 * scale * scale * (psi11 + psi1 * psi1),
        r3: a3,
        r4: family.b4.eval(s, k) + scale * a3 * psi1,
        r6: family.b6.eval(s, k),
    }
}

/// Posterior expansion coefficients for a family, prior, and sample.
pub fn posterior_coeffs(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    summary: &SampleSummary,
) -> PosteriorCoeffs {
    let (psi1, psi11) = prior.log_prior_derivs(summary);
    expansion_coeffs(
        family,
        summary.g3,
        summary.g4,
        summary.m2.sqrt(),
        psi1,
        psi11,
    )
}

/// The quantile-shift coefficients:
/// u₁ = R₁ + R₃(z² + 2) and
/// u₂ = 2u₁zR₃ − ½u₁²z + R₂z + R₄(z³ + 3z) + R₆(z⁵ + 5z³ + 15z).
pub fn u_coeffs(coeffs: &PosteriorCoeffs, z: f64) -> (f64, f64) {
    let z2 = z * z;
    let u1 = coeffs.r1 + coeffs.r3 * (z2 + 2.0);
    let u2 = 2.0 * u1 * z * coeffs.r3 - 0.5 * u1 * u1 * z
        + coeffs.r2 * z
        + coeffs.r4 * (z2 * z + 3.0 * z)
        + coeffs.r6 * (z2 * z2 * z + 5.0 * z2 * z + 15.0 * z);
    (u1, u2)
}

/// Which quantile approximation a run reports as primary. Both are always
/// computed; the coverage harness compares them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QuantileOrder {
    First,
    Second,
}

impl QuantileOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "1" | "first" => Ok(QuantileOrder::First),
            "2" | "second" => Ok(QuantileOrder::Second),
            other => Err(Error::parse(
                "order",
                format!("expected 1 or 2, got `{other}`"),
            )),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuantileResult {
    pub alpha: f64,
    /// The (1 − α)th standard normal quantile.
    pub z: f64,
    pub u1: f64,
    pub u2: f64,
    /// First-order quantile: posterior coverage error o_p(n^{-1/2}).
    pub theta1: f64,
    /// Second-order quantile: posterior coverage error o_p(n^{-1}).
    pub theta2: f64,
    pub order: QuantileOrder,
}

impl QuantileResult {
    /// The quantile selected by `order`.
    pub fn primary(&self) -> f64 {
        match self.order {
            QuantileOrder::First => self.theta1,
            QuantileOrder::Second => self.theta2,
        }
    }
}

/// The (1 − α)th posterior quantile of θ in both closed-form orders.
pub fn quantile(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    summary: &SampleSummary,
    alpha: f64,
    order: QuantileOrder,
) -> Result<QuantileResult> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let z = inverse_normal_cdf(1.0 - alpha)?;
    let coeffs = posterior_coeffs(family, prior, summary);
    let (u1, u2) = u_coeffs(&coeffs, z);
    let n = summary.n as f64;
    let step = (summary.m2 / n).sqrt();
    let theta1 = summary.mean + step * (z + u1 / n.sqrt());
    let theta2 = theta1 + step * u2 / n;
    Ok(QuantileResult {
        alpha,
        z,
        u1,
        u2,
        theta1,
        theta2,
        order,
    })
}

/// The posterior density of the pivot y:
/// φ(y)[1 + n^{-1/2}(R₁y + R₃y³)
///       + n^{-1}{R₂(y² − 1) + R₄(y⁴ − 3) + R₆(y⁶ − 15)}].
///
/// Every correction term has zero expectation under φ, so the truncation
/// integrates to one; it can still dip negative in far tails at small n.
pub fn posterior_density(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    summary: &SampleSummary,
    y: f64,
) -> f64 {
    let c = posterior_coeffs(family, prior, summary);
    density_from_coeffs(&c, summary.n, y)
}

pub(crate) fn density_from_coeffs(c: &PosteriorCoeffs, n: usize, y: f64) -> f64 {
    let n = n as f64;
    let y2 = y * y;
    let odd = c.r1 * y + c.r3 * y2 * y;
    let even = c.r2 * (y2 - 1.0) + c.r4 * (y2 * y2 - 3.0) + c.r6 * (y2 * y2 * y2 - 15.0);
    normal_pdf(y) * (1.0 + odd / n.sqrt() + even / n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Rational;

    fn summary(n: usize, mean: f64, m2: f64, g3: f64, g4: f64) -> SampleSummary {
        SampleSummary::new(n, mean, m2, g3, g4).unwrap()
    }

    #[test]
    fn coeffs_flat_prior_passes_through_b_polynomials() {
        let f = LikelihoodFamily::data_free_matching();
        let s = summary(40, 0.3, 0.7, 0.9, 3.4);
        let c = posterior_coeffs(&f, &PriorSpec::Flat, &s);
        assert_eq!(c.r2, f.b2.eval(0.9, 3.4));
        assert_eq!(c.r4, f.b4.eval(0.9, 3.4));
        assert_eq!(c.r1, f.a1.eval(0.9, 3.4));
    }

    #[test]
    fn coeffs_el_fixtures() {
        let el = LikelihoodFamily::empirical_likelihood();
        let s = summary(40, 0.0, 0.55, 0.6, 3.0);
        let c = posterior_coeffs(&el, &PriorSpec::Flat, &s);
        assert_eq!(c.r1, 0.0);
        assert!((c.r3 - 0.2).abs() < 1e-15);
        assert!((c.r6 - 0.02).abs() < 1e-15);
        // With the skewness prior and m₂ = 1, r1 = −g₃/2.
        let s = summary(40, 0.0, 1.0, 0.6, 3.0);
        let c = posterior_coeffs(&el, &PriorSpec::skew_correcting(), &s);
        assert!((c.r1 - (-0.3)).abs() < 1e-15);
    }

    #[test]
    fn u_coeffs_fixtures() {
        let zero = PosteriorCoeffs {
            r1: 0.0,
            r2: 0.0,
            r3: 0.0,
            r4: 0.0,
            r6: 0.0,
        };
        assert_eq!(u_coeffs(&zero, 1.3), (0.0, 0.0));

        // Matched exponential-family case: r1 = −g₃/2, r3 = g₃/3 gives
        // u1 = (g₃/6)(2z² + 1).
        let g3 = 0.6;
        let c = PosteriorCoeffs {
            r1: -g3 / 2.0,
            r2: 0.0,
            r3: g3 / 3.0,
            r4: 0.0,
            r6: 0.0,
        };
        let z = inverse_normal_cdf(0.95).unwrap();
        let (u1, _) = u_coeffs(&c, z);
        assert!((u1 - g3 / 6.0 * (2.0 * z * z + 1.0)).abs() < 1e-15);
        assert!((u1 - 0.641109).abs() < 1e-5);

        // At z = 0 every u₂ term carries a factor z.
        let c = PosteriorCoeffs {
            r1: 0.4,
            r2: -1.0,
            r3: 0.7,
            r4: 0.2,
            r6: 0.05,
        };
        let (u1, u2) = u_coeffs(&c, 0.0);
        assert!((u1 - (0.4 + 2.0 * 0.7)).abs() < 1e-15);
        assert_eq!(u2, 0.0);
    }

    #[test]
    fn quantile_matched_subclass_anchor() {
        // geef(any μ) + skew prior: θ₁ = x̄ + (m₂/n)^{1/2}(z + n^{-1/2} u₁)
        // with u₁ = (g₃/6)(2z²+1); numbers from the hand evaluation.
        let s = summary(25, 0.0, 1.0, 0.6, 3.0);
        let prior = PriorSpec::skew_correcting();
        for mu in [Rational::new(0, 1), Rational::new(1, 8), Rational::new(1, 4)] {
            let f = LikelihoodFamily::geef(mu);
            let q = quantile(&f, &prior, &s, 0.05, QuantileOrder::First).unwrap();
            assert!((q.theta1 - 0.354615).abs() < 1e-5, "theta1 = {}", q.theta1);
        }
    }

    #[test]
    fn quantile_classical_limits() {
        // g₃ = 0, flat prior, no odd coefficients: the classical quantile.
        let f = LikelihoodFamily::cressie_read(Rational::new(0, 1), Rational::new(0, 1));
        let s = summary(16, 2.0, 4.0, 0.0, 3.0);
        let q = quantile(&f, &PriorSpec::Flat, &s, 0.05, QuantileOrder::First).unwrap();
        let z = inverse_normal_cdf(0.95).unwrap();
        assert!((q.theta1 - (2.0 + 0.5 * z)).abs() < 1e-14);
        // α = 1/2: z = 0 and u1 = 0, so θ₁ = x̄.
        let q = quantile(&f, &PriorSpec::Flat, &s, 0.5, QuantileOrder::First).unwrap();
        assert!((q.theta1 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn quantile_orders_differ_by_u2_step() {
        let f = LikelihoodFamily::empirical_likelihood();
        let s = summary(30, -1.0, 2.5, 0.8, 3.6);
        let q = quantile(&f, &PriorSpec::skew_correcting(), &s, 0.1, QuantileOrder::Second)
            .unwrap();
        let n = s.n as f64;
        let want_gap = (s.m2 / n).sqrt() * q.u2 / n;
        assert!(((q.theta2 - q.theta1) - want_gap).abs() < 1e-15);
        assert_eq!(q.primary(), q.theta2);
    }

    #[test]
    fn quantile_rejects_bad_alpha() {
        let f = LikelihoodFamily::empirical_likelihood();
        let s = summary(30, 0.0, 1.0, 0.0, 3.0);
        for alpha in [0.0, 1.0, -0.2, 1.7] {
            assert!(quantile(&f, &PriorSpec::Flat, &s, alpha, QuantileOrder::First).is_err());
        }
    }

    #[test]
    fn density_reduces_to_normal_when_all_coeffs_vanish() {
        let c = PosteriorCoeffs {
            r1: 0.0,
            r2: 0.0,
            r3: 0.0,
            r4: 0.0,
            r6: 0.0,
        };
        for y in [-2.0, 0.0, 1.5] {
            assert_eq!(density_from_coeffs(&c, 50, y), normal_pdf(y));
        }
    }

    #[test]
    fn density_center_value() {
        let c = PosteriorCoeffs {
            r1: 0.3,
            r2: 0.5,
            r3: -0.1,
            r4: 0.25,
            r6: 0.01,
        };
        let n = 100;
        let want = normal_pdf(0.0) * (1.0 - (0.5 + 3.0 * 0.25 + 15.0 * 0.01) / n as f64);
        assert!((density_from_coeffs(&c, n, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn priors_with_equal_derivatives_give_identical_posteriors() {
        // The posterior consumes a prior only through (ψ₁, ψ₁₁) at x̄, so
        // any θ-free term in the log prior (the anchored versus unanchored
        // form, or an additive constant) cannot move a quantile.
        use std::sync::Arc;
        let el = LikelihoodFamily::empirical_likelihood();
        let s = summary(35, 0.7, 1.9, 0.9, 3.8);
        let simple = PriorSpec::skew_correcting();
        let (p1, p11) = simple.log_prior_derivs(&s);
        let custom = PriorSpec::Custom {
            psi1: Arc::new(move |_: &SampleSummary| p1),
            psi11: Arc::new(move |_: &SampleSummary| p11),
        };
        for alpha in [0.05, 0.37, 0.9] {
            let a = quantile(&el, &simple, &s, alpha, QuantileOrder::Second).unwrap();
            let b = quantile(&el, &custom, &s, alpha, QuantileOrder::Second).unwrap();
            assert_eq!(a.theta1.to_bits(), b.theta1.to_bits());
            assert_eq!(a.theta2.to_bits(), b.theta2.to_bits());
        }
    }

    #[test]
    fn quantiles_ignore_b0_bit_for_bit() {
        let el = LikelihoodFamily::empirical_likelihood();
        let mut perturbed = el.clone();
        perturbed.b0 = crate::poly![(2, 1, 17, 3), (0, 0, -5, 1)];
        let s = summary(21, 0.4, 1.3, -0.7, 2.9);
        for alpha in [0.05, 0.5, 0.93] {
            let a = quantile(&el, &PriorSpec::skew_correcting(), &s, alpha, QuantileOrder::Second)
                .unwrap();
            let b = quantile(
                &perturbed,
                &PriorSpec::skew_correcting(),
                &s,
                alpha,
                QuantileOrder::Second,
            )
            .unwrap();
            assert_eq!(a.theta1.to_bits(), b.theta1.to_bits());
            assert_eq!(a.theta2.to_bits(), b.theta2.to_bits());
        }
    }
}
