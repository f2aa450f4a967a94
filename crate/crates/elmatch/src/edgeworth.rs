//! Frequentist-side expansion: population coefficients, approximate
//! cumulants of the adjusted pivot, the coverage-error terms Δ₁ and Δ₂, and
//! the predicted frequentist coverage of the second-order posterior
//! quantile,
//!
//! ```text
//! P{θ ≤ θ₂} = 1 − α + (n^{-1/2}·Δ₁ + n^{-1}·Δ₂)·φ(z) + o(n^{-1}).
//! ```
//!
//! Only flat and simple priors are supported here: the elaborate class has
//! no displayed frequentist expansion, and silently returning a wrong
//! formula would be worse than an explicit error — elaborate-prior coverage
//! is assessed by Monte Carlo in the simulator.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::likelihood::LikelihoodFamily;
use crate::matching::MatchOrder;
use crate::moments::PopulationMoments;
use crate::normal::{inverse_normal_cdf, normal_pdf};
use crate::posterior::{expansion_coeffs, u_coeffs, PosteriorCoeffs};
use crate::prior::PriorSpec;

/// Partial derivatives of the log-prior exponent ψ(t₁, t₂, t₃), evaluated
/// at the population point (θ, σ², β₃): ψ₁, ψ₁₁, ψ₁₂, ψ₁₃.
///
/// For a simple prior ψ(t₁, t₂, t₃) = t₁·t₂^{-1/2}·χ(t₃), so the closed
/// forms are (σ⁻¹χ(β₃), 0, −½σ⁻³χ(β₃), σ⁻¹χ'(β₃)); the flat prior zeroes
/// all four.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PriorPopulationDerivs {
    pub psi1: f64,
    pub psi11: f64,
    pub psi12: f64,
    pub psi13: f64,
}

/// Closed-form population-level log-prior derivatives.
pub fn population_prior_derivs(
    prior: &PriorSpec,
    pop: &PopulationMoments,
) -> Result<PriorPopulationDerivs> {
    match prior {
        PriorSpec::Flat => Ok(PriorPopulationDerivs {
            psi1: 0.0,
            psi11: 0.0,
            psi12: 0.0,
            psi13: 0.0,
        }),
        PriorSpec::Simple { chi } => {
            let sigma = pop.variance.sqrt();
            let chi_val = chi.eval(pop.skewness, pop.kurtosis);
            let chi_deriv = chi.deriv_s().eval(pop.skewness, pop.kurtosis);
            Ok(PriorPopulationDerivs {
                psi1: chi_val / sigma,
                psi11: 0.0,
                psi12: -0.5 * chi_val / (sigma * sigma * sigma),
                psi13: chi_deriv / sigma,
            })
        }
        PriorSpec::Elaborate { .. } => Err(Error::UnsupportedPriorClass {
            context: "population prior derivatives",
        }),
        PriorSpec::Custom { .. } => Err(Error::UnsupportedPriorClass {
            context: "population prior derivatives",
        }),
    }
}

/// Population counterparts R₁₀…R₆₀ of the posterior coefficients: the same
/// formulas with (x̄, m₂, g₃, g₄) replaced by (θ, σ², β₃, β₄).
pub fn population_coeffs(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
) -> Result<PosteriorCoeffs> {
    let derivs = population_prior_derivs(prior, pop)?;
    Ok(expansion_coeffs(
        family,
        pop.skewness,
        pop.kurtosis,
        pop.variance.sqrt(),
        derivs.psi1,
        derivs.psi11,
    ))
}

/// The first four approximate cumulant corrections (k₁, k₂, k₃, k₄) of the
/// adjusted pivot: the pivot's mean, variance, skewness and kurtosis behave
/// as n^{-1/2}k₁, 1 + n⁻¹k₂, n^{-1/2}k₃ and n⁻¹k₄.
///
/// k₁, k₃, k₄ depend only on the population shape; k₂ also sees the
/// likelihood (through the derivatives of a₁ and a₃) and the prior, and
/// depends on z through the a₃' term.
pub fn cumulants(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
    z: f64,
) -> Result<(f64, f64, f64, f64)> {
    let derivs = population_prior_derivs(prior, pop)?;
    let (b3, b4) = (pop.skewness, pop.kurtosis);
    let sigma = pop.variance.sqrt();
    let k1 = 0.5 * b3;
    let k3 = 2.0 * b3;
    let k4 = 12.0 + 12.0 * b3 * b3 - 2.0 * b4;

    let a1p = family.a1.deriv_s().eval(b3, b4);
    let a3p = family.a3.deriv_s().eval(b3, b4);
    let shape = b4 - 3.0 - 1.5 * b3 * b3;
    let k2 = 3.0
        + 1.75 * b3 * b3
        + 2.0 * (a1p + a3p * (z * z + 2.0) + sigma * derivs.psi13) * shape
        + 2.0 * pop.variance * derivs.psi11
        + 2.0 * b3 * sigma * (0.5 * derivs.psi1 + pop.variance * derivs.psi12);
    Ok((k1, k2, k3, k4))
}

/// The order-n⁻¹ corrections W₁ and W₃ to the population coefficients,
/// linear in the standardized moment fluctuations (A₁, A₂, A₃):
///
/// ```text
/// W₁ = σ²ψ₁₁A₁ + σ(½ψ₁ + σ²ψ₁₂)A₂ + (a₁' + σψ₁₃)(A₃ − 3A₁ − (3/2)β₃A₂)
/// W₃ = a₃'(A₃ − 3A₁ − (3/2)β₃A₂)
/// ```
pub fn w_terms(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
    a1s: f64,
    a2s: f64,
    a3s: f64,
) -> Result<(f64, f64)> {
    let derivs = population_prior_derivs(prior, pop)?;
    let (b3, b4) = (pop.skewness, pop.kurtosis);
    let sigma = pop.variance.sqrt();
    let skew_fluct = a3s - 3.0 * a1s - 1.5 * b3 * a2s;
    let w1 = pop.variance * derivs.psi11 * a1s
        + sigma * (0.5 * derivs.psi1 + pop.variance * derivs.psi12) * a2s
        + (family.a1.deriv_s().eval(b3, b4) + sigma * derivs.psi13) * skew_fluct;
    let w3 = family.a3.deriv_s().eval(b3, b4) * skew_fluct;
    Ok((w1, w3))
}

/// The coverage-error coefficients (Δ₁, Δ₂) at quantile z:
///
/// ```text
/// Δ₁ = u₁₀ − k₁ − (1/6)k₃(z² − 1)
/// Δ₂ = u₂₀ − ½u₁₀²z + z·u₁₀{k₁ + (1/6)k₃(z² − 3)} − ½(k₂ + k₁²)z
///      − {(1/24)k₄ + (1/6)k₁k₃}(z³ − 3z) − (1/72)k₃²(z⁵ − 10z³ + 15z)
/// ```
///
/// This is a numeric route fully independent of the symbolic C polynomials
/// in the matching module; the two agree under the matching conditions.
pub fn delta_terms(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
    z: f64,
) -> Result<(f64, f64)> {
    let report = expansion_report(family, prior, pop, z)?;
    Ok((report.delta1, report.delta2))
}

/// The full frequentist expansion report at a given quantile z.
#[derive(Debug, Clone, Serialize)]
pub struct EdgeworthReport {
    pub family: String,
    pub prior: String,
    pub population: PopulationMoments,
    pub alpha: f64,
    pub z: f64,
    pub n: usize,
    pub order: MatchOrder,
    /// Population coefficients R₁₀, R₂₀, R₃₀, R₄₀, R₆₀.
    pub coeffs: PosteriorCoeffs,
    pub u1: f64,
    pub u2: f64,
    pub k1: f64,
    pub k2: f64,
    pub k3: f64,
    pub k4: f64,
    pub delta1: f64,
    pub delta2: f64,
    /// 1 − α + (n^{-1/2}Δ₁ + n^{-1}Δ₂)φ(z), before clamping; the Δ₂ term is
    /// dropped at order `half`.
    pub predicted_raw: f64,
    /// The raw prediction clamped to [0, 1].
    pub predicted_coverage: f64,
    /// True when clamping changed the value (possible at tiny n).
    pub clamped: bool,
}

fn expansion_report(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
    z: f64,
) -> Result<EdgeworthReport> {
    let coeffs = population_coeffs(family, prior, pop)?;
    let (u1, u2) = u_coeffs(&coeffs, z);
    let (k1, k2, k3, k4) = cumulants(family, prior, pop, z)?;
    let z2 = z * z;
    let delta1 = u1 - k1 - k3 / 6.0 * (z2 - 1.0);
    let delta2 = u2 - 0.5 * u1 * u1 * z + z * u1 * (k1 + k3 / 6.0 * (z2 - 3.0))
        - 0.5 * (k2 + k1 * k1) * z
        - (k4 / 24.0 + k1 * k3 / 6.0) * (z2 * z - 3.0 * z)
        - k3 * k3 / 72.0 * (z2 * z2 * z - 10.0 * z2 * z + 15.0 * z);
    Ok(EdgeworthReport {
        family: family.name.clone(),
        prior: prior.name(),
        population: *pop,
        alpha: f64::NAN,
        z,
        n: 0,
        order: MatchOrder::One,
        coeffs,
        u1,
        u2,
        k1,
        k2,
        k3,
        k4,
        delta1,
        delta2,
        predicted_raw: f64::NAN,
        predicted_coverage: f64::NAN,
        clamped: false,
    })
}

/// Predicted frequentist coverage of the interval (−∞, θ^{(1−α)}] at sample
/// size n, to margin o(n^{-1/2}) (`half`) or o(n⁻¹) (`one`).
pub fn predict_coverage(
    family: &LikelihoodFamily,
    prior: &PriorSpec,
    pop: &PopulationMoments,
    n: usize,
    alpha: f64,
    order: MatchOrder,
) -> Result<EdgeworthReport> {
    if n < 4 {
        return Err(Error::InvalidConfig(format!("n must be at least 4, got {n}")));
    }
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::OutOfRange {
            what: "alpha",
            value: alpha,
        });
    }
    let z = inverse_normal_cdf(1.0 - alpha)?;
    let mut report = expansion_report(family, prior, pop, z)?;
    let nf = n as f64;
    let mut correction = report.delta1 / nf.sqrt();
    if order == MatchOrder::One {
        correction += report.delta2 / nf;
    }
    let raw = 1.0 - alpha + correction * normal_pdf(z);
    report.alpha = alpha;
    report.n = n;
    report.order = order;
    report.predicted_raw = raw;
    report.predicted_coverage = raw.clamp(0.0, 1.0);
    report.clamped = report.predicted_coverage != raw;
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::moments::Distribution;
    use crate::poly::Poly2;

    fn pop(variance: f64, skewness: f64, kurtosis: f64) -> PopulationMoments {
        PopulationMoments::new(0.0, variance, skewness, kurtosis).unwrap()
    }

    #[test]
    fn flat_prior_population_derivs_vanish() {
        let d = population_prior_derivs(&PriorSpec::Flat, &pop(2.0, 1.0, 4.0)).unwrap();
        assert_eq!(d, PriorPopulationDerivs { psi1: 0.0, psi11: 0.0, psi12: 0.0, psi13: 0.0 });
    }

    #[test]
    fn skew_prior_population_derivs() {
        let d =
            population_prior_derivs(&PriorSpec::skew_correcting(), &pop(1.0, 2.0, 9.0)).unwrap();
        assert!((d.psi1 - (-1.0)).abs() < 1e-15);
        assert_eq!(d.psi11, 0.0);
        assert!((d.psi12 - 0.5).abs() < 1e-15);
        assert!((d.psi13 - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn population_derivs_match_finite_differences() {
        // Central finite differences of ψ(t₁, t₂, t₃) = t₁ t₂^{-1/2} χ(t₃)
        // as an independent check of the closed forms.
        let chi: Poly2 = "-1/2*s + 1/4*s^2".parse().unwrap();
        let prior = PriorSpec::Simple { chi: chi.clone() };
        let p = pop(1.7, 0.8, 3.2);
        let d = population_prior_derivs(&prior, &p).unwrap();

        let psi = |t1: f64, t2: f64, t3: f64| t1 / t2.sqrt() * chi.eval(t3, 0.0);
        let (t1, t2, t3) = (0.0, p.variance, p.skewness);
        let h = 1e-5;
        let psi1 = (psi(t1 + h, t2, t3) - psi(t1 - h, t2, t3)) / (2.0 * h);
        assert!((psi1 - d.psi1).abs() < 1e-6 * d.psi1.abs().max(1.0));
        let psi11 = (psi(t1 + h, t2, t3) - 2.0 * psi(t1, t2, t3) + psi(t1 - h, t2, t3)) / (h * h);
        assert!(psi11.abs() < 1e-5);
        let psi12 = (psi(t1 + h, t2 + h, t3) - psi(t1 + h, t2 - h, t3) - psi(t1 - h, t2 + h, t3)
            + psi(t1 - h, t2 - h, t3))
            / (4.0 * h * h);
        assert!((psi12 - d.psi12).abs() < 1e-6 * d.psi12.abs().max(1.0));
        let psi13 = (psi(t1 + h, t2, t3 + h) - psi(t1 + h, t2, t3 - h) - psi(t1 - h, t2, t3 + h)
            + psi(t1 - h, t2, t3 - h))
            / (4.0 * h * h);
        assert!((psi13 - d.psi13).abs() < 1e-6 * d.psi13.abs().max(1.0));
    }

    #[test]
    fn cumulant_fixtures() {
        let el = LikelihoodFamily::empirical_likelihood();
        let (k1, _, k3, k4) = cumulants(&el, &PriorSpec::Flat, &pop(1.0, 0.0, 3.0), 1.0).unwrap();
        assert_eq!((k1, k3, k4), (0.0, 0.0, 6.0));
        let (k1, _, k3, k4) = cumulants(&el, &PriorSpec::Flat, &pop(1.0, 2.0, 9.0), 1.0).unwrap();
        assert_eq!((k1, k3, k4), (1.0, 4.0, 42.0));
        // Normal-shape population: the z-dependent factor vanishes, k₂ = 3.
        for z in [0.0, 1.0, 2.7] {
            let (_, k2, _, _) =
                cumulants(&el, &PriorSpec::skew_correcting(), &pop(1.0, 0.0, 3.0), z).unwrap();
            assert!((k2 - 3.0).abs() < 1e-14, "z = {z}: k2 = {k2}");
        }
    }

    #[test]
    fn elaborate_and_custom_priors_are_rejected() {
        let el = LikelihoodFamily::empirical_likelihood();
        let p = pop(1.0, 2.0, 9.0);
        let elaborate = PriorSpec::skew_kurtosis_correcting();
        assert!(matches!(
            cumulants(&el, &elaborate, &p, 1.0),
            Err(Error::UnsupportedPriorClass { .. })
        ));
        assert!(matches!(
            predict_coverage(&el, &elaborate, &p, 50, 0.05, MatchOrder::One),
            Err(Error::UnsupportedPriorClass { .. })
        ));
    }

    #[test]
    fn delta_terms_matched_pair() {
        let el = LikelihoodFamily::empirical_likelihood();
        let prior = PriorSpec::skew_correcting();
        // Δ₁ vanishes for every population and z under the matched pair.
        for (v, b3, b4) in [(1.0, 0.0, 3.0), (0.5, 2.0, 9.0), (2.0, -0.8, 2.9)] {
            for z in [-1.3, 0.0, 0.9, 1.6448536269514722] {
                let (d1, _) = delta_terms(&el, &prior, &pop(v, b3, b4), z).unwrap();
                assert!(d1.abs() < 1e-13, "delta1 = {d1}");
            }
        }
        // Normal-shape population also kills Δ₂.
        for z in [0.3, 1.2, 2.1] {
            let (_, d2) = delta_terms(&el, &prior, &pop(1.0, 0.0, 3.0), z).unwrap();
            assert!(d2.abs() < 1e-13, "delta2 = {d2}");
        }
        // Exponential shape: Δ₂ = −z/2.
        let z = inverse_normal_cdf(0.95).unwrap();
        let (_, d2) = delta_terms(&el, &prior, &pop(1.0, 2.0, 9.0), z).unwrap();
        assert!((d2 - (-0.5 * z)).abs() < 1e-12, "delta2 = {d2}");
    }

    #[test]
    fn delta1_for_flat_prior_on_skewed_population() {
        let el = LikelihoodFamily::empirical_likelihood();
        let exp_pop = Distribution::Exponential.moments();
        for z in [0.0, 1.0, 1.9] {
            let (d1, _) = delta_terms(&el, &PriorSpec::Flat, &exp_pop, z).unwrap();
            assert!((d1 - 1.0).abs() < 1e-13, "z = {z}: delta1 = {d1}");
        }
    }

    #[test]
    fn predicted_coverage_anchors() {
        let el = LikelihoodFamily::empirical_likelihood();
        let prior = PriorSpec::skew_correcting();
        // Matched pair, normal population: exactly the nominal level.
        let r = predict_coverage(&el, &prior, &pop(1.0, 0.0, 3.0), 37, 0.05, MatchOrder::One)
            .unwrap();
        assert!((r.predicted_coverage - 0.95).abs() < 1e-12);
        assert!(!r.clamped);
        // Exponential population at n = 50.
        let exp_pop = Distribution::Exponential.moments();
        let r = predict_coverage(&el, &prior, &exp_pop, 50, 0.05, MatchOrder::One).unwrap();
        assert!((r.predicted_coverage - 0.948304).abs() < 2e-6, "{}", r.predicted_coverage);
        // Half order under a matched pair is the nominal level even when
        // Δ₂ is nonzero.
        let r = predict_coverage(&el, &prior, &exp_pop, 50, 0.05, MatchOrder::Half).unwrap();
        assert!((r.predicted_coverage - 0.95).abs() < 1e-12);
        assert!(r.delta2 != 0.0);
    }

    #[test]
    fn prediction_clamps_at_tiny_n() {
        // A wildly mismatched family pushes the raw expansion out of [0, 1].
        let f = LikelihoodFamily::cressie_read(
            crate::poly::Rational::new(5, 1),
            crate::poly::Rational::new(-9, 1),
        );
        let p = pop(1.0, 2.0, 9.0);
        let r = predict_coverage(&f, &PriorSpec::Flat, &p, 4, 0.01, MatchOrder::One).unwrap();
        assert!(r.clamped);
        assert!((0.0..=1.0).contains(&r.predicted_coverage));
        assert!(r.predicted_raw < 0.0 || r.predicted_raw > 1.0);
    }

    #[test]
    fn w_terms_linearity_and_fixture() {
        let el = LikelihoodFamily::empirical_likelihood();
        let p = pop(1.0, 0.0, 3.0);
        assert_eq!(w_terms(&el, &PriorSpec::Flat, &p, 0.0, 0.0, 0.0).unwrap(), (0.0, 0.0));
        // Flat prior, symmetric population: W₃ = ⅓(A₃ − 3A₁), W₁ = 0.
        let (w1, w3) = w_terms(&el, &PriorSpec::Flat, &p, 0.7, -0.4, 1.1).unwrap();
        assert_eq!(w1, 0.0);
        assert!((w3 - (1.1 - 3.0 * 0.7) / 3.0).abs() < 1e-15);
        // Linear in (A₁, A₂, A₃).
        let prior = PriorSpec::skew_correcting();
        let p = pop(0.8, 1.4, 5.0);
        let a = (0.3, -0.2, 0.9);
        let b = (-1.1, 0.5, 0.4);
        let wa = w_terms(&el, &prior, &p, a.0, a.1, a.2).unwrap();
        let wb = w_terms(&el, &prior, &p, b.0, b.1, b.2).unwrap();
        let wab = w_terms(&el, &prior, &p, a.0 + b.0, a.1 + b.1, a.2 + b.2).unwrap();
        assert!((wab.0 - (wa.0 + wb.0)).abs() < 1e-14);
        assert!((wab.1 - (wa.1 + wb.1)).abs() < 1e-14);
    }
}
