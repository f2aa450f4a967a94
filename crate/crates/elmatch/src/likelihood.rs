//! The general class of empirical-type likelihoods for a population mean:
//! a normal kernel in the pivot times polynomial corrections whose
//! coefficients are polynomials in the sample skewness and kurtosis.
//!
//! A family is fully described by six exact polynomials: `a1`, `a3`
//! (univariate in the skewness slot `s`) multiply the odd pivot powers at
//! order n^{-1/2}; `b0`, `b2`, `b4`, `b6` (in `(s, k)`) multiply the even
//! powers at order n^{-1}. The constructors below cover the three standard
//! subclasses plus the family singled out by the data-free matching theory.

use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::moments::SampleSummary;
use crate::normal::normal_pdf;
use crate::poly::{Poly2, Rational};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LikelihoodFamily {
    pub name: String,
    pub a1: Poly2,
    pub a3: Poly2,
    pub b0: Poly2,
    pub b2: Poly2,
    pub b4: Poly2,
    pub b6: Poly2,
}

impl LikelihoodFamily {
    /// Builds a family from raw polynomials, enforcing that the odd-order
    /// coefficients involve only the skewness slot.
    pub fn new(
        name: impl Into<String>,
        a1: Poly2,
        a3: Poly2,
        b0: Poly2,
        b2: Poly2,
        b4: Poly2,
        b6: Poly2,
    ) -> Result<Self> {
        if !a1.is_univariate_s() || !a3.is_univariate_s() {
            return Err(Error::InvalidConfig(
                "a1 and a3 must be polynomials in s only".into(),
            ));
        }
        Ok(LikelihoodFamily {
            name: name.into(),
            a1,
            a3,
            b0,
            b2,
            b4,
            b6,
        })
    }

    /// Cressie–Read-type discrepancy likelihoods: a₃ = τ₃·s,
    /// b₄ = τ₄·k − (9/2)τ₃²(s² + 1), b₆ = ½τ₃²s², all other coefficients 0.
    pub fn cressie_read(tau3: Rational, tau4: Rational) -> Self {
        let s = Poly2::var_s();
        let k = Poly2::var_k();
        let s2 = &s * &s;
        let t3sq = &tau3 * &tau3;
        let a3 = s.scale(&tau3);
        let b4 = &k.scale(&tau4)
            - &(&s2 + &Poly2::from_int(1)).scale(&(&t3sq * &Rational::new(9, 2)));
        let b6 = s2.scale(&(&t3sq * &Rational::new(1, 2)));
        LikelihoodFamily {
            name: format!("cressie-read(tau3={tau3},tau4={tau4})"),
            a1: Poly2::zero(),
            a3,
            b0: Poly2::zero(),
            b2: Poly2::zero(),
            b4,
            b6,
        }
    }

    /// Generalized empirical likelihoods: a₃ = γ₃·s,
    /// b₄ = γ₄·k − (9/2)γ₃²s² − 3γ₃ + ½, b₆ = ½γ₃²s².
    pub fn gel(gamma3: Rational, gamma4: Rational) -> Self {
        let s = Poly2::var_s();
        let k = Poly2::var_k();
        let s2 = &s * &s;
        let g3sq = &gamma3 * &gamma3;
        let a3 = s.scale(&gamma3);
        let constant = &Rational::new(1, 2) - &(&gamma3 * &Rational::from_int(3));
        let b4 = &(&k.scale(&gamma4) - &s2.scale(&(&g3sq * &Rational::new(9, 2))))
            + &Poly2::constant(constant);
        let b6 = s2.scale(&(&g3sq * &Rational::new(1, 2)));
        LikelihoodFamily {
            name: format!("gel(gamma3={gamma3},gamma4={gamma4})"),
            a1: Poly2::zero(),
            a3,
            b0: Poly2::zero(),
            b2: Poly2::zero(),
            b4,
            b6,
        }
    }

    /// Generalized empirical exponential family likelihoods: a₃ = ⅓s,
    /// b₄ = μ·k − (μ + ¼)(s² + 1), b₆ = (1/18)s².
    pub fn geef(mu: Rational) -> Self {
        let s = Poly2::var_s();
        let k = Poly2::var_k();
        let s2 = &s * &s;
        let a3 = s.scale(&Rational::new(1, 3));
        let b4 = &k.scale(&mu)
            - &(&s2 + &Poly2::from_int(1)).scale(&(&mu + &Rational::new(1, 4)));
        let b6 = s2.scale(&Rational::new(1, 18));
        LikelihoodFamily {
            name: format!("geef(mu={mu})"),
            a1: Poly2::zero(),
            a3,
            b0: Poly2::zero(),
            b2: Poly2::zero(),
            b4,
            b6,
        }
    }

    /// The usual empirical likelihood: the common member of all three
    /// subclasses, with a₃ = ⅓s, b₄ = ¼k − ½(s² + 1), b₆ = (1/18)s².
    pub fn empirical_likelihood() -> Self {
        let mut f = LikelihoodFamily::geef(Rational::new(1, 4));
        f.name = "el".into();
        f
    }

    /// Exponentially tilted empirical likelihood (Schennach): the subclass
    /// member with μ = 1/8.
    pub fn schennach() -> Self {
        let mut f = LikelihoodFamily::geef(Rational::new(1, 8));
        f.name = "schennach".into();
        f
    }

    /// The unique family in this class that admits a *data-free* matching
    /// prior to order n⁻¹ (the flat prior): a₁ = −½s, a₃ = ⅓s,
    /// b₂ = ¾s² − ⅓k + 1, b₄ = ¼k − ⅔s² − ½, b₆ = (1/18)s².
    pub fn data_free_matching() -> Self {
        let s = Poly2::var_s();
        let k = Poly2::var_k();
        let s2 = &s * &s;
        LikelihoodFamily {
            name: "fm-matching".into(),
            a1: s.scale(&Rational::new(-1, 2)),
            a3: s.scale(&Rational::new(1, 3)),
            b0: Poly2::zero(),
            b2: &(&s2.scale(&Rational::new(3, 4)) - &k.scale(&Rational::new(1, 3)))
                + &Poly2::from_int(1),
            b4: &(&k.scale(&Rational::new(1, 4)) - &s2.scale(&Rational::new(2, 3)))
                - &Poly2::constant(Rational::new(1, 2)),
            b6: s2.scale(&Rational::new(1, 18)),
        }
    }

    /// Polynomial-level equality, ignoring the display name.
    pub fn same_coefficients(&self, other: &LikelihoodFamily) -> bool {
        self.a1 == other.a1
            && self.a3 == other.a3
            && self.b0 == other.b0
            && self.b2 == other.b2
            && self.b4 == other.b4
            && self.b6 == other.b6
    }

    /// The truncated likelihood kernel
    /// φ(y)·[1 + n^{-1/2}(a₁y + a₃y³) + n^{-1}(b₀ + b₂y² + b₄y⁴ + b₆y⁶)]
    /// evaluated at y = y(θ), unnormalized.
    ///
    /// Diagnostics only: all inference goes through the closed-form
    /// expansion coefficients, and the truncation can dip negative for
    /// extreme y at small n.
    pub fn kernel(&self, summary: &SampleSummary, theta: f64) -> f64 {
        let y = summary.pivot(theta);
        let (s, k) = (summary.g3, summary.g4);
        let n = summary.n as f64;
        let y2 = y * y;
        let odd = self.a1.eval(s, k) * y + self.a3.eval(s, k) * y * y2;
        let even = self.b0.eval(s, k)
            + self.b2.eval(s, k) * y2
            + self.b4.eval(s, k) * y2 * y2
            + self.b6.eval(s, k) * y2 * y2 * y2;
        normal_pdf(y) * (1.0 + odd / n.sqrt() + even / n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("family serialization cannot fail")
    }

    pub fn from_json_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let fam: LikelihoodFamily = serde_json::from_str(&text)?;
        LikelihoodFamily::new(fam.name, fam.a1, fam.a3, fam.b0, fam.b2, fam.b4, fam.b6)
    }
}

/// Names of the built-in family presets, in display order.
pub const PRESET_NAMES: [&str; 3] = ["el", "schennach", "fm-matching"];

impl FromStr for LikelihoodFamily {
    type Err = Error;

    /// Parses a family spec string: `el`, `schennach`, `fm-matching`,
    /// `cressie-read:tau3=<r>,tau4=<r>`, `gel:gamma3=<r>,gamma4=<r>`,
    /// `geef:mu=<r>`, or `file:<path>` with the JSON representation.
    fn from_str(spec: &str) -> Result<Self> {
        let spec = spec.trim();
        match spec {
            "el" => return Ok(LikelihoodFamily::empirical_likelihood()),
            "schennach" => return Ok(LikelihoodFamily::schennach()),
            "fm-matching" => return Ok(LikelihoodFamily::data_free_matching()),
            _ => {}
        }
        let (head, args) = spec.split_once(':').ok_or_else(|| {
            Error::parse(
                "family spec",
                format!("unknown family `{spec}` (try `el`, `schennach`, `fm-matching`, `cressie-read:...`, `gel:...`, `geef:...`, `file:...`)"),
            )
        })?;
        match head {
            "file" => LikelihoodFamily::from_json_file(Path::new(args)),
            "cressie-read" => {
                let kv = parse_kv(args, &["tau3", "tau4"])?;
                Ok(LikelihoodFamily::cressie_read(
                    kv[0].parse()?,
                    kv[1].parse()?,
                ))
            }
            "gel" => {
                let kv = parse_kv(args, &["gamma3", "gamma4"])?;
                Ok(LikelihoodFamily::gel(kv[0].parse()?, kv[1].parse()?))
            }
            "geef" => {
                let kv = parse_kv(args, &["mu"])?;
                Ok(LikelihoodFamily::geef(kv[0].parse()?))
            }
            other => Err(Error::parse(
                "family spec",
                format!("unknown family kind `{other}`"),
            )),
        }
    }
}

/// Parses `name=value` pairs in the given order, all required.
fn parse_kv(args: &str, names: &[&str]) -> Result<Vec<String>> {
    let mut out = vec![None; names.len()];
    for pair in args.split(',') {
        let (key, value) = pair.split_once('=').ok_or_else(|| {
            Error::parse("family spec", format!("expected `name=value`, got `{pair}`"))
        })?;
        let idx = names.iter().position(|n| *n == key.trim()).ok_or_else(|| {
            Error::parse("family spec", format!("unknown parameter `{}`", key.trim()))
        })?;
        out[idx] = Some(value.trim().to_string());
    }
    out.into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.ok_or_else(|| Error::parse("family spec", format!("missing parameter `{}`", names[i])))
        })
        .collect()
}
