//! Exact symbolic verification of the probability-matching conditions and
//! automatic derivation of matching priors.
//!
//! The conditions are polynomial identities in the population skewness and
//! kurtosis slots `(s, k)`, so every check here runs in exact rational
//! arithmetic and reports the residual polynomial of each condition: a
//! family is feasible exactly when every residual is the zero polynomial.
//!
//! Two prior classes are covered. For the *simple* class (log-prior linear
//! in θ − x̄) the order-√n margin needs `a₃ = ⅓s`, and the order-n⁻¹ margin
//! additionally pins `b₂`, `b₄`, `b₆`. For the *elaborate* class (quadratic
//! log-prior) the `b₂` condition disappears: its role is absorbed by the
//! derived quadratic coefficient λ, which is what buys the usual empirical
//! likelihood order-n⁻¹ matching that no simple prior can provide.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::likelihood::LikelihoodFamily;
use crate::poly::{Poly2, Rational};
use crate::prior::PriorSpec;

/// Margin of the matching statement: o(n^{-1/2}) or o(n^{-1}).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum MatchOrder {
    Half,
    One,
}

impl MatchOrder {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "half" => Ok(MatchOrder::Half),
            "one" => Ok(MatchOrder::One),
            other => Err(Error::parse(
                "order",
                format!("expected `half` or `one`, got `{other}`"),
            )),
        }
    }
}

/// Which prior class the check quantifies over.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorClass {
    Simple,
    Elaborate,
}

impl PriorClass {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "simple" => Ok(PriorClass::Simple),
            "elaborate" => Ok(PriorClass::Elaborate),
            other => Err(Error::parse(
                "prior class",
                format!("expected `simple` or `elaborate`, got `{other}`"),
            )),
        }
    }
}

/// One matching condition with its exact residual.
#[derive(Debug, Clone, Serialize)]
pub struct ConditionCheck {
    pub name: &'static str,
    pub passed: bool,
    pub residual: Poly2,
}

impl ConditionCheck {
    fn new(name: &'static str, residual: Poly2) -> Self {
        ConditionCheck {
            passed: residual.is_zero(),
            name,
            residual,
        }
    }
}

/// The outcome of a matching check: per-condition residuals plus, when the
/// likelihood-side conditions hold, the derived prior ingredients.
#[derive(Debug, Clone, Serialize)]
pub struct MatchingReport {
    pub family: String,
    pub order: MatchOrder,
    pub prior_class: PriorClass,
    pub conditions: Vec<ConditionCheck>,
    pub feasible: bool,
    /// χ of the derived prior; present whenever the a₃ condition passes.
    pub chi: Option<Poly2>,
    /// λ of the derived prior; present only for feasible elaborate checks.
    pub lambda: Option<Poly2>,
}

impl MatchingReport {
    /// The derived prior, when the report is feasible.
    pub fn derived_prior(&self) -> Option<PriorSpec> {
        if !self.feasible {
            return None;
        }
        let chi = self.chi.clone()?;
        match self.prior_class {
            PriorClass::Simple => Some(PriorSpec::Simple { chi }),
            PriorClass::Elaborate => Some(PriorSpec::Elaborate {
                chi,
                lambda: self.lambda.clone()?,
            }),
        }
    }
}

fn third_s() -> Poly2 {
    Poly2::var_s().scale(&Rational::new(1, 3))
}

fn derived_chi(family: &LikelihoodFamily) -> Poly2 {
    -&(&family.a1 + &Poly2::var_s().scale(&Rational::new(1, 2)))
}

/// Required b₂ for order-one simple-prior matching:
/// ½a₁² + ⅝s² − ⅓k + 1.
fn required_b2(family: &LikelihoodFamily) -> Poly2 {
    let a1sq = &family.a1 * &family.a1;
    &a1sq.scale(&Rational::new(1, 2))
        + &Poly2::from_terms([
            (2, 0, Rational::new(5, 8)),
            (0, 1, Rational::new(-1, 3)),
            (0, 0, Rational::new(1, 1)),
        ])
}

/// Required b₄ for order-one matching (either prior class):
/// ⅓s·a₁ − ½s² + ¼k − ½.
fn required_b4(family: &LikelihoodFamily) -> Poly2 {
    &(&third_s() * &family.a1)
        + &Poly2::from_terms([
            (2, 0, Rational::new(-1, 2)),
            (0, 1, Rational::new(1, 4)),
            (0, 0, Rational::new(-1, 2)),
        ])
}

/// Required b₆ for order-one matching: (1/18)s².
fn required_b6() -> Poly2 {
    Poly2::term(2, 0, Rational::new(1, 18))
}

/// Derived λ for the elaborate class:
/// a₁² − 2b₂ + (5/4)s² − (2/3)k + 2.
fn derived_lambda(family: &LikelihoodFamily) -> Poly2 {
    let a1sq = &family.a1 * &family.a1;
    &(&a1sq - &family.b2.scale(&Rational::from_int(2)))
        + &Poly2::from_terms([
            (2, 0, Rational::new(5, 4)),
            (0, 1, Rational::new(-2, 3)),
            (0, 0, Rational::new(2, 1)),
        ])
}

/// Order-√n matching over either prior class: the single likelihood-side
/// condition a₃ = ⅓s. When it holds, the derived simple prior has
/// χ = −(a₁ + ½s).
pub fn check_order_half(family: &LikelihoodFamily) -> MatchingReport {
    let residual = &family.a3 - &third_s();
    let cond = ConditionCheck::new("a3", residual);
    let feasible = cond.passed;
    MatchingReport {
        family: family.name.clone(),
        order: MatchOrder::Half,
        prior_class: PriorClass::Simple,
        chi: feasible.then(|| derived_chi(family)),
        lambda: None,
        conditions: vec![cond],
        feasible,
    }
}

/// Order-n⁻¹ matching over the simple prior class: the a₃ condition plus
/// pinned b₂, b₄, b₆.
pub fn check_order_one_simple(family: &LikelihoodFamily) -> MatchingReport {
    let conditions = vec![
        ConditionCheck::new("a3", &family.a3 - &third_s()),
        ConditionCheck::new("b2", &family.b2 - &required_b2(family)),
        ConditionCheck::new("b4", &family.b4 - &required_b4(family)),
        ConditionCheck::new("b6", &family.b6 - &required_b6()),
    ];
    let feasible = conditions.iter().all(|c| c.passed);
    let a3_ok = conditions[0].passed;
    MatchingReport {
        family: family.name.clone(),
        order: MatchOrder::One,
        prior_class: PriorClass::Simple,
        chi: a3_ok.then(|| derived_chi(family)),
        lambda: None,
        conditions,
        feasible,
    }
}

/// Order-n⁻¹ matching over the elaborate prior class: the a₃, b₄, b₆
/// conditions on the likelihood; b₂ is unconstrained because the derived
/// λ = a₁² − 2b₂ + (5/4)s² − (2/3)k + 2 absorbs it.
pub fn check_order_one_elaborate(family: &LikelihoodFamily) -> MatchingReport {
    let conditions = vec![
        ConditionCheck::new("a3", &family.a3 - &third_s()),
        ConditionCheck::new("b4", &family.b4 - &required_b4(family)),
        ConditionCheck::new("b6", &family.b6 - &required_b6()),
    ];
    let feasible = conditions.iter().all(|c| c.passed);
    let a3_ok = conditions[0].passed;
    MatchingReport {
        family: family.name.clone(),
        order: MatchOrder::One,
        prior_class: PriorClass::Elaborate,
        chi: a3_ok.then(|| derived_chi(family)),
        lambda: feasible.then(|| derived_lambda(family)),
        conditions,
        feasible,
    }
}

/// Dispatches on order and prior class. Order-√n conditions coincide for
/// the two classes (λ is unconstrained at that margin).
pub fn check(family: &LikelihoodFamily, order: MatchOrder, class: PriorClass) -> MatchingReport {
    match (order, class) {
        (MatchOrder::Half, _) => {
            let mut rep = check_order_half(family);
            rep.prior_class = class;
            rep
        }
        (MatchOrder::One, PriorClass::Simple) => check_order_one_simple(family),
        (MatchOrder::One, PriorClass::Elaborate) => check_order_one_elaborate(family),
    }
}

/// The order-√n coverage-error coefficient as an exact polynomial in the
/// skewness slot, split by powers of the normal quantile z:
///
/// ```text
/// Δ₁ = [a₁ + 2a₃ + χ − ⅙s] + [a₃ − ⅓s]·z²
/// ```
///
/// Matching at margin o(n^{-1/2}) holds exactly when both coefficient
/// polynomials vanish identically.
pub fn symbolic_delta1(family: &LikelihoodFamily, chi: &Poly2) -> (Poly2, Poly2) {
    let coeff_z0 = &(&(&family.a1 + &family.a3.scale(&Rational::from_int(2))) + chi)
        - &Poly2::var_s().scale(&Rational::new(1, 6));
    let coeff_z2 = &family.a3 - &third_s();
    (coeff_z0, coeff_z2)
}

/// The order-n⁻¹ coverage-error coefficient under the derived simple prior,
/// as Δ₂ = C₁z + C₃z³ + C₅z⁵ with exact polynomials
///
/// ```text
/// C₁ = b₂ + 3b₄ + 15b₆ − ½a₁² − s·a₁ + (1/24)s² − (5/12)k + ½
/// C₃ = b₄ + 5b₆ − ⅓s·a₁ + (2/9)s² − ¼k + ½
/// C₅ = b₆ − (1/18)s²
/// ```
///
/// These expressions are only valid under the a₃ condition, so families
/// violating it are rejected.
pub fn symbolic_c(family: &LikelihoodFamily) -> Result<(Poly2, Poly2, Poly2)> {
    if !(&family.a3 - &third_s()).is_zero() {
        return Err(Error::PreconditionViolated(format!(
            "family `{}` has a3 = {} instead of 1/3*s; the C polynomials are derived under that condition",
            family.name, family.a3
        )));
    }
    let s = Poly2::var_s();
    let a1sq = &family.a1 * &family.a1;

    let c1 = &(&(&(&family.b2 + &family.b4.scale(&Rational::from_int(3)))
        + &family.b6.scale(&Rational::from_int(15)))
        - &(&a1sq.scale(&Rational::new(1, 2)) + &(&s * &family.a1)))
        + &Poly2::from_terms([
            (2, 0, Rational::new(1, 24)),
            (0, 1, Rational::new(-5, 12)),
            (0, 0, Rational::new(1, 2)),
        ]);

    let c3 = &(&(&family.b4 + &family.b6.scale(&Rational::from_int(5)))
        - &(&third_s() * &family.a1))
        + &Poly2::from_terms([
            (2, 0, Rational::new(2, 9)),
            (0, 1, Rational::new(-1, 4)),
            (0, 0, Rational::new(1, 2)),
        ]);

    let c5 = &family.b6 - &required_b6();
    Ok((c1, c3, c5))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    #[test]
    fn half_order_el_passes_with_skew_chi() {
        let rep = check_order_half(&LikelihoodFamily::empirical_likelihood());
        assert!(rep.feasible);
        assert_eq!(rep.chi.unwrap(), poly![(1, 0, -1, 2)]);
    }

    #[test]
    fn half_order_fails_off_third_slope() {
        let bad = LikelihoodFamily::cressie_read(r(1, 2), r(1, 4));
        let rep = check_order_half(&bad);
        assert!(!rep.feasible);
        assert_eq!(rep.conditions[0].residual, poly![(1, 0, 1, 6)]);
        assert!(rep.chi.is_none());
    }

    #[test]
    fn half_order_data_free_family_gives_zero_chi() {
        let rep = check_order_half(&LikelihoodFamily::data_free_matching());
        assert!(rep.feasible);
        assert!(rep.chi.unwrap().is_zero());
    }

    #[test]
    fn order_one_simple_only_data_free_family_passes() {
        let rep = check_order_one_simple(&LikelihoodFamily::data_free_matching());
        assert!(rep.feasible, "conditions: {:?}", rep.conditions);

        let rep = check_order_one_simple(&LikelihoodFamily::empirical_likelihood());
        assert!(!rep.feasible);
        let b2 = rep.conditions.iter().find(|c| c.name == "b2").unwrap();
        // b₂ residual is −(⅝s² − ⅓k + 1).
        assert_eq!(
            b2.residual,
            poly![(2, 0, -5, 8), (0, 1, 1, 3), (0, 0, -1, 1)]
        );

        assert!(!check_order_one_simple(&LikelihoodFamily::schennach()).feasible);
    }

    #[test]
    fn order_one_elaborate_el_yields_the_quadratic_prior() {
        let rep = check_order_one_elaborate(&LikelihoodFamily::empirical_likelihood());
        assert!(rep.feasible);
        assert_eq!(rep.chi.unwrap(), poly![(1, 0, -1, 2)]);
        assert_eq!(
            rep.lambda.unwrap(),
            poly![(2, 0, 5, 4), (0, 1, -2, 3), (0, 0, 2, 1)]
        );
    }

    #[test]
    fn order_one_elaborate_schennach_b4_residual() {
        let rep = check_order_one_elaborate(&LikelihoodFamily::schennach());
        assert!(!rep.feasible);
        let b4 = rep.conditions.iter().find(|c| c.name == "b4").unwrap();
        assert_eq!(
            b4.residual,
            poly![(0, 1, -1, 8), (2, 0, 1, 8), (0, 0, 1, 8)]
        );
        assert!(rep.lambda.is_none());
    }

    #[test]
    fn order_one_elaborate_data_free_family_recovers_flat_prior() {
        let rep = check_order_one_elaborate(&LikelihoodFamily::data_free_matching());
        assert!(rep.feasible);
        assert!(rep.chi.as_ref().unwrap().is_zero());
        assert!(rep.lambda.as_ref().unwrap().is_zero());
        assert!(rep.derived_prior().is_some());
    }

    #[test]
    fn delta1_fixtures() {
        let el = LikelihoodFamily::empirical_likelihood();
        let matched = poly![(1, 0, -1, 2)];
        let (z0, z2) = symbolic_delta1(&el, &matched);
        assert!(z0.is_zero() && z2.is_zero());

        let (z0, z2) = symbolic_delta1(&el, &Poly2::zero());
        assert_eq!(z0, poly![(1, 0, 1, 2)]);
        assert!(z2.is_zero());

        let bad = LikelihoodFamily::cressie_read(r(1, 2), r(1, 4));
        let (_, z2) = symbolic_delta1(&bad, &matched);
        assert_eq!(z2, poly![(1, 0, 1, 6)]);
    }

    #[test]
    fn c_polynomials_for_el() {
        let (c1, c3, c5) = symbolic_c(&LikelihoodFamily::empirical_likelihood()).unwrap();
        assert!(c5.is_zero());
        // C₃ is identically zero for this family; C₁ = ⅓k − ⅝s² − 1.
        assert!(c3.is_zero());
        assert_eq!(c1, poly![(0, 1, 1, 3), (2, 0, -5, 8), (0, 0, -1, 1)]);
        assert!(c1.eval(0.0, 3.0).abs() < 1e-15);
        assert!((c1.eval(2.0, 9.0) - (-0.5)).abs() < 1e-15);
    }

    #[test]
    fn c_polynomials_require_the_a3_condition() {
        let bad = LikelihoodFamily::cressie_read(r(1, 2), r(1, 4));
        assert!(matches!(
            symbolic_c(&bad),
            Err(Error::PreconditionViolated(_))
        ));
    }

    #[test]
    fn derived_chi_agrees_with_matched_simple_prior() {
        for fam in [
            LikelihoodFamily::empirical_likelihood(),
            LikelihoodFamily::schennach(),
            LikelihoodFamily::data_free_matching(),
            LikelihoodFamily::gel(r(1, 3), r(2, 1)),
        ] {
            let rep = check_order_half(&fam);
            assert!(rep.feasible, "{}", fam.name);
            let chi = rep.chi.unwrap();
            match PriorSpec::matched_simple(&fam) {
                PriorSpec::Simple { chi: want } => assert_eq!(chi, want),
                other => panic!("unexpected prior {other:?}"),
            }
        }
    }

    #[test]
    fn dispatch_covers_all_modes() {
        let el = LikelihoodFamily::empirical_likelihood();
        assert!(check(&el, MatchOrder::Half, PriorClass::Simple).feasible);
        assert!(check(&el, MatchOrder::Half, PriorClass::Elaborate).feasible);
        assert!(!check(&el, MatchOrder::One, PriorClass::Simple).feasible);
        assert!(check(&el, MatchOrder::One, PriorClass::Elaborate).feasible);
    }
}
