//! Data-dependent prior classes and the concrete matching priors.
//!
//! The posterior expansion consumes a prior only through the first two
//! θ-derivatives of its log density at θ = x̄, so every prior class here
//! reduces to that pair:
//!
//! * flat: log π ≡ 0;
//! * simple: log π = (θ − x̄)·m₂^{-1/2}·χ(g₃), a skewness correction linear
//!   in θ;
//! * elaborate: adds ½(θ − x̄)²·m₂^{-1}·λ(g₃, g₄), a kurtosis-aware
//!   quadratic term;
//! * custom: the two derivatives supplied directly as callables.
//!
//! Anchoring the linear term at θ instead of θ − x̄ shifts log π by a
//! θ-free constant and therefore yields the same posterior; both forms map
//! to the same derivative pair here.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::likelihood::LikelihoodFamily;
use crate::moments::SampleSummary;
use crate::poly::{Poly2, Rational};

pub type DerivFn = Arc<dyn Fn(&SampleSummary) -> f64 + Send + Sync>;

#[derive(Clone)]
pub enum PriorSpec {
    Flat,
    Simple {
        chi: Poly2,
    },
    Elaborate {
        chi: Poly2,
        lambda: Poly2,
    },
    /// An arbitrary data-dependent prior described by ψ₁ and ψ₁₁, the first
    /// two θ-derivatives of log π at θ = x̄. The callables must be pure.
    Custom {
        psi1: DerivFn,
        psi11: DerivFn,
    },
}

impl PriorSpec {
    /// The simple prior matched to a family: χ = −(a₁ + ½s). Under the
    /// order-√n matching condition this cancels the leading coverage error.
    pub fn matched_simple(family: &LikelihoodFamily) -> Self {
        let half_s = Poly2::var_s().scale(&Rational::new(1, 2));
        PriorSpec::Simple {
            chi: -&(&family.a1 + &half_s),
        }
    }

    /// The skewness-correcting prior χ = −½s, i.e.
    /// π(θ) = exp(−½·θ·m₂^{-1/2}·g₃). This is the matched simple prior for
    /// every family with a₁ = 0, in particular the whole exponential-family
    /// subclass.
    pub fn skew_correcting() -> Self {
        PriorSpec::Simple {
            chi: Poly2::var_s().scale(&Rational::new(-1, 2)),
        }
    }

    /// The elaborate prior with χ = −½s and λ = (5/4)s² − (2/3)k + 2, the
    /// unique choice giving the usual empirical likelihood order-n⁻¹
    /// frequentist validity of its posterior quantiles.
    pub fn skew_kurtosis_correcting() -> Self {
        PriorSpec::Elaborate {
            chi: Poly2::var_s().scale(&Rational::new(-1, 2)),
            lambda: Poly2::from_terms([
                (2, 0, Rational::new(5, 4)),
                (0, 1, Rational::new(-2, 3)),
                (0, 0, Rational::new(2, 1)),
            ]),
        }
    }

    /// (ψ₁, ψ₁₁): the log-prior derivatives at θ = x̄ that the posterior
    /// expansion consumes.
    pub fn log_prior_derivs(&self, summary: &SampleSummary) -> (f64, f64) {
        match self {
            PriorSpec::Flat => (0.0, 0.0),
            PriorSpec::Simple { chi } => {
                (chi.eval(summary.g3, summary.g4) / summary.m2.sqrt(), 0.0)
            }
            PriorSpec::Elaborate { chi, lambda } => (
                chi.eval(summary.g3, summary.g4) / summary.m2.sqrt(),
                lambda.eval(summary.g3, summary.g4) / summary.m2,
            ),
            PriorSpec::Custom { psi1, psi11 } => (psi1(summary), psi11(summary)),
        }
    }

    /// The prior density at θ (flat priors return 1; custom priors have no
    /// density representation).
    pub fn density(&self, summary: &SampleSummary, theta: f64) -> Result<f64> {
        let d = theta - summary.mean;
        match self {
            PriorSpec::Flat => Ok(1.0),
            PriorSpec::Simple { chi } => {
                Ok((d / summary.m2.sqrt() * chi.eval(summary.g3, summary.g4)).exp())
            }
            PriorSpec::Elaborate { chi, lambda } => {
                let lin = d / summary.m2.sqrt() * chi.eval(summary.g3, summary.g4);
                let quad = 0.5 * d * d / summary.m2 * lambda.eval(summary.g3, summary.g4);
                Ok((lin + quad).exp())
            }
            PriorSpec::Custom { .. } => Err(Error::NoDensity),
        }
    }

    /// A short display name for reports.
    pub fn name(&self) -> String {
        match self {
            PriorSpec::Flat => "flat".into(),
            PriorSpec::Simple { chi } => format!("simple(chi={chi})"),
            PriorSpec::Elaborate { chi, lambda } => {
                format!("elaborate(chi={chi},lambda={lambda})")
            }
            PriorSpec::Custom { .. } => "custom".into(),
        }
    }

    /// A spec string that parses back to an equivalent prior (custom priors
    /// have none).
    pub fn spec_string(&self) -> Option<String> {
        match self {
            PriorSpec::Flat => Some("flat".into()),
            PriorSpec::Simple { chi } => Some(format!("simple:chi={chi}")),
            PriorSpec::Elaborate { chi, lambda } => {
                Some(format!("elaborate:chi={chi},lambda={lambda}"))
            }
            PriorSpec::Custom { .. } => None,
        }
    }

    /// Parses a prior spec string: `flat`, `eq26` (requires a family),
    /// `eq29`, `eq34`, `simple:chi=<poly>`, `elaborate:chi=<poly>,lambda=<poly>`.
    ///
    /// `eq26`/`eq29`/`eq34` are the preset ids for the matched simple prior,
    /// the skewness-correcting prior, and the skewness-and-kurtosis prior;
    /// `matched`, `skew` and `skew-kurtosis` are accepted as aliases.
    pub fn parse(spec: &str, family: Option<&LikelihoodFamily>) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "flat" => return Ok(PriorSpec::Flat),
            "eq29" | "skew" => return Ok(PriorSpec::skew_correcting()),
            "eq34" | "skew-kurtosis" => return Ok(PriorSpec::skew_kurtosis_correcting()),
            "eq26" | "matched" => {
                return match family {
                    Some(f) => Ok(PriorSpec::matched_simple(f)),
                    None => Err(Error::parse(
                        "prior spec",
                        "`eq26` derives the prior from a family; pass one with --family",
                    )),
                }
            }
            _ => {}
        }
        if let Some(args) = spec.strip_prefix("simple:") {
            let chi_text = args.strip_prefix("chi=").ok_or_else(|| {
                Error::parse("prior spec", "expected `simple:chi=<poly>`")
            })?;
            let chi: Poly2 = chi_text.parse()?;
            if !chi.is_univariate_s() {
                return Err(Error::parse("prior spec", "chi must involve only s"));
            }
            return Ok(PriorSpec::Simple { chi });
        }
        if let Some(args) = spec.strip_prefix("elaborate:") {
            let rest = args.strip_prefix("chi=").ok_or_else(|| {
                Error::parse("prior spec", "expected `elaborate:chi=<poly>,lambda=<poly>`")
            })?;
            let (chi_text, lambda_text) = rest.split_once(",lambda=").ok_or_else(|| {
                Error::parse("prior spec", "expected `elaborate:chi=<poly>,lambda=<poly>`")
            })?;
            let chi: Poly2 = chi_text.parse()?;
            if !chi.is_univariate_s() {
                return Err(Error::parse("prior spec", "chi must involve only s"));
            }
            return Ok(PriorSpec::Elaborate {
                chi,
                lambda: lambda_text.parse()?,
            });
        }
        Err(Error::parse(
            "prior spec",
            format!("unknown prior `{spec}` (try `flat`, `eq26`, `eq29`, `eq34`, `simple:chi=...`, `elaborate:chi=...,lambda=...`)"),
        ))
    }
}

impl fmt::Debug for PriorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

impl FromStr for PriorSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        PriorSpec::parse(s, None)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;

    fn summary(m2: f64, g3: f64, g4: f64) -> SampleSummary {
        SampleSummary::new(25, 0.0, m2, g3, g4).unwrap()
    }

    #[test]
    fn flat_derivs_are_zero() {
        let s = summary(0.37, 1.1, 4.0);
        assert_eq!(PriorSpec::Flat.log_prior_derivs(&s), (0.0, 0.0));
    }

    #[test]
    fn skew_correcting_derivs() {
        let s = summary(1.0, 0.6, 3.0);
        let (p1, p11) = PriorSpec::skew_correcting().log_prior_derivs(&s);
        assert!((p1 - (-0.3)).abs() < 1e-15);
        assert_eq!(p11, 0.0);
    }

    #[test]
    fn skew_kurtosis_derivs_vanish_at_normal_shape() {
        // λ(0, 3) = -2 + 2 = 0.
        let s = summary(1.0, 0.0, 3.0);
        let (p1, p11) = PriorSpec::skew_kurtosis_correcting().log_prior_derivs(&s);
        assert_eq!((p1, p11), (0.0, 0.0));
        // λ(2, 9) = 5 - 6 + 2 = 1.
        let s = summary(1.0, 2.0, 9.0);
        let (_, p11) = PriorSpec::skew_kurtosis_correcting().log_prior_derivs(&s);
        assert!((p11 - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matched_simple_examples() {
        let el = LikelihoodFamily::empirical_likelihood();
        match PriorSpec::matched_simple(&el) {
            PriorSpec::Simple { chi } => assert_eq!(chi, poly![(1, 0, -1, 2)]),
            other => panic!("expected simple prior, got {other:?}"),
        }
        // a₁ = −½s cancels the correction entirely: the flat prior.
        let fm = LikelihoodFamily::data_free_matching();
        match PriorSpec::matched_simple(&fm) {
            PriorSpec::Simple { chi } => assert!(chi.is_zero()),
            other => panic!("expected simple prior, got {other:?}"),
        }
        // Any family with a₁ = 0 gives χ = −½s.
        for mu in [0i64, 1, 3] {
            let f = LikelihoodFamily::geef(Rational::new(mu, 8));
            match PriorSpec::matched_simple(&f) {
                PriorSpec::Simple { chi } => assert_eq!(chi, poly![(1, 0, -1, 2)]),
                other => panic!("expected simple prior, got {other:?}"),
            }
        }
    }

    #[test]
    fn densities() {
        let s = summary(1.0, 2.0, 9.0);
        // Any representable prior is 1 at θ = x̄.
        for p in [
            PriorSpec::Flat,
            PriorSpec::skew_correcting(),
            PriorSpec::skew_kurtosis_correcting(),
        ] {
            assert_eq!(p.density(&s, s.mean).unwrap(), 1.0);
        }
        // Skew prior at θ = 1 with mean 0, m₂ = 1, g₃ = 2: exp(−1).
        let d = PriorSpec::skew_correcting().density(&s, 1.0).unwrap();
        assert!((d - (-1.0f64).exp()).abs() < 1e-15);
        assert_eq!(PriorSpec::Flat.density(&s, 1e6).unwrap(), 1.0);
        let custom = PriorSpec::Custom {
            psi1: Arc::new(|_| 0.0),
            psi11: Arc::new(|_| 0.0),
        };
        assert!(matches!(custom.density(&s, 0.0), Err(Error::NoDensity)));
    }

    #[test]
    fn flat_equals_zero_polynomials_downstream() {
        let s = summary(0.8, -0.4, 2.2);
        let zero_simple = PriorSpec::Simple { chi: Poly2::zero() };
        let zero_elab = PriorSpec::Elaborate {
            chi: Poly2::zero(),
            lambda: Poly2::zero(),
        };
        assert_eq!(PriorSpec::Flat.log_prior_derivs(&s), zero_simple.log_prior_derivs(&s));
        assert_eq!(PriorSpec::Flat.log_prior_derivs(&s), zero_elab.log_prior_derivs(&s));
        assert_eq!(
            PriorSpec::Flat.density(&s, 1.7).unwrap(),
            zero_elab.density(&s, 1.7).unwrap()
        );
    }

    #[test]
    fn spec_strings() {
        assert!(matches!(PriorSpec::parse("flat", None).unwrap(), PriorSpec::Flat));
        let p = PriorSpec::parse("simple:chi=-1/2*s", None).unwrap();
        match &p {
            PriorSpec::Simple { chi } => assert_eq!(*chi, poly![(1, 0, -1, 2)]),
            other => panic!("got {other:?}"),
        }
        assert_eq!(p.spec_string().unwrap(), "simple:chi=-1/2*s");
        let q = PriorSpec::parse("elaborate:chi=-1/2*s,lambda=5/4*s^2 - 2/3*k + 2", None).unwrap();
        let canonical = PriorSpec::skew_kurtosis_correcting();
        let s = summary(0.9, 0.8, 3.3);
        assert_eq!(q.log_prior_derivs(&s), canonical.log_prior_derivs(&s));
        // eq26 without a family is an error; with one it matches.
        assert!(PriorSpec::parse("eq26", None).is_err());
        let el = LikelihoodFamily::empirical_likelihood();
        let m = PriorSpec::parse("eq26", Some(&el)).unwrap();
        assert_eq!(
            m.log_prior_derivs(&s),
            PriorSpec::skew_correcting().log_prior_derivs(&s)
        );
        assert!(PriorSpec::parse("simple:chi=k", None).is_err());
        assert!(PriorSpec::parse("nonsense", None).is_err());
    }
}
