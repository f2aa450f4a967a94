//! Sample summaries, the studentized pivot, and the built-in population
//! distributions with their exact moments.

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::normal;

/// The sample statistics the whole expansion machinery consumes: size, mean,
/// second central moment, and the standardized third and fourth moments.
///
/// `m2`, `g3`, `g4` use the divisor `n` (not `n − 1`). For any real data set
/// `g4 ≥ 1 + g3²`; the constructor does not enforce that inequality because
/// synthetic summaries in diagnostics may explore it freely.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SampleSummary {
    pub n: usize,
    pub mean: f64,
    /// Second central moment m₂ = n⁻¹ Σ (xᵢ − x̄)², strictly positive.
    pub m2: f64,
    /// Sample skewness g₃ = m₃ / m₂^{3/2}.
    pub g3: f64,
    /// Sample kurtosis g₄ = m₄ / m₂².
    pub g4: f64,
}

impl SampleSummary {
    pub fn new(n: usize, mean: f64, m2: f64, g3: f64, g4: f64) -> Result<Self> {
        if n < 4 {
            return Err(Error::TooFewPoints { n });
        }
        // NaN must fail this gate too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(m2 > 0.0) {
            return Err(Error::DegenerateSample);
        }
        Ok(SampleSummary { n, mean, m2, g3, g4 })
    }

    /// The pivot y(θ) = (n/m₂)^{1/2} (θ − x̄).
    pub fn pivot(&self, theta: f64) -> f64 {
        (self.n as f64 / self.m2).sqrt() * (theta - self.mean)
    }

    /// Inverts the pivot: the θ with y(θ) = y.
    pub fn theta_from_pivot(&self, y: f64) -> f64 {
        self.mean + (self.m2 / self.n as f64).sqrt() * y
    }
}

/// Computes the sample summary of a data set.
///
/// Requires at least four points with some spread; the exact-zero second
/// moment is the only degeneracy rejected, near-degenerate samples propagate.
pub fn summarize(data: &[f64]) -> Result<SampleSummary> {
    let n = data.len();
    if n < 4 {
        return Err(Error::TooFewPoints { n });
    }
    let nf = n as f64;
    let mean = data.iter().sum::<f64>() / nf;
    let (mut m2, mut m3, mut m4) = (0.0, 0.0, 0.0);
    for &x in data {
        let d = x - mean;
        let d2 = d * d;
        m2 += d2;
        m3 += d2 * d;
        m4 += d2 * d2;
    }
    m2 /= nf;
    m3 /= nf;
    m4 /= nf;
    if m2 == 0.0 {
        return Err(Error::DegenerateSample);
    }
    Ok(SampleSummary {
        n,
        mean,
        m2,
        g3: m3 / (m2 * m2.sqrt()),
        g4: m4 / (m2 * m2),
    })
}

/// Population mean, variance, and standardized third/fourth moments.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationMoments {
    pub mean: f64,
    pub variance: f64,
    /// β₃ = E[((X − mean)/σ)³].
    pub skewness: f64,
    /// β₄ = E[((X − mean)/σ)⁴].
    pub kurtosis: f64,
}

impl PopulationMoments {
    pub fn new(mean: f64, variance: f64, skewness: f64, kurtosis: f64) -> Result<Self> {
        // NaN must fail this gate too.
        #[allow(clippy::neg_cmp_op_on_partial_ord)]
        if !(variance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "population variance must be positive, got {variance}"
            )));
        }
        Ok(PopulationMoments {
            mean,
            variance,
            skewness,
            kurtosis,
        })
    }
}

/// The five built-in population laws of the coverage study.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Distribution {
    Normal,
    Uniform,
    /// Beta(1, 2), density 2(1 − x) on (0, 1).
    Beta12,
    /// Exponential with unit rate.
    Exponential,
    /// Rayleigh with unit scale, density x·exp(−x²/2) on (0, ∞).
    Rayleigh,
}

pub const ALL_DISTRIBUTIONS: [Distribution; 5] = [
    Distribution::Normal,
    Distribution::Uniform,
    Distribution::Beta12,
    Distribution::Exponential,
    Distribution::Rayleigh,
];

impl Distribution {
    /// Exact population moments from closed forms.
    pub fn moments(self) -> PopulationMoments {
        use std::f64::consts::PI;
        match self {
            Distribution::Normal => PopulationMoments {
                mean: 0.0,
                variance: 1.0,
                skewness: 0.0,
                kurtosis: 3.0,
            },
            Distribution::Uniform => PopulationMoments {
                mean: 0.5,
                variance: 1.0 / 12.0,
                skewness: 0.0,
                kurtosis: 9.0 / 5.0,
            },
            Distribution::Beta12 => PopulationMoments {
                mean: 1.0 / 3.0,
                variance: 1.0 / 18.0,
                skewness: 2.0 * std::f64::consts::SQRT_2 / 5.0,
                kurtosis: 12.0 / 5.0,
            },
            Distribution::Exponential => PopulationMoments {
                mean: 1.0,
                variance: 1.0,
                skewness: 2.0,
                kurtosis: 9.0,
            },
            Distribution::Rayleigh => {
                let var = 2.0 - PI / 2.0;
                let skew = 2.0 * PI.sqrt() * (PI - 3.0) / (4.0 - PI).powf(1.5);
                let kurt = 3.0 - (6.0 * PI * PI - 24.0 * PI + 16.0) / ((4.0 - PI) * (4.0 - PI));
                PopulationMoments {
                    mean: (PI / 2.0).sqrt(),
                    variance: var,
                    skewness: skew,
                    kurtosis: kurt,
                }
            }
        }
    }

    /// The quantile function, strictly increasing on (0, 1).
    ///
    /// Every sampler in this crate is an inverse transform of a single
    /// uniform draw, which is what makes replication streams reproducible.
    pub fn inverse_cdf(self, u: f64) -> Result<f64> {
        if !(u > 0.0 && u < 1.0) {
            return Err(Error::OutOfRange {
                what: "uniform variate",
                value: u,
            });
        }
        Ok(match self {
            Distribution::Normal => normal::inverse_normal_cdf(u)?,
            Distribution::Uniform => u,
            Distribution::Beta12 => 1.0 - (1.0 - u).sqrt(),
            // 1 − u rather than u inside the logs: u → 0⁺ stays finite and
            // the generator never produces u = 1.
            Distribution::Exponential => -(1.0 - u).ln(),
            Distribution::Rayleigh => (-2.0 * (1.0 - u).ln()).sqrt(),
        })
    }

    /// Probability density, used by the quadrature cross-checks.
    pub fn density(self, x: f64) -> f64 {
        match self {
            Distribution::Normal => normal::normal_pdf(x),
            Distribution::Uniform => {
                if (0.0..=1.0).contains(&x) {
                    1.0
                } else {
                    0.0
                }
            }
            Distribution::Beta12 => {
                if (0.0..=1.0).contains(&x) {
                    2.0 * (1.0 - x)
                } else {
                    0.0
                }
            }
            Distribution::Exponential => {
                if x >= 0.0 {
                    (-x).exp()
                } else {
                    0.0
                }
            }
            Distribution::Rayleigh => {
                if x >= 0.0 {
                    x * (-0.5 * x * x).exp()
                } else {
                    0.0
                }
            }
        }
    }
}

impl fmt::Display for Distribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            Distribution::Normal => "Normal(0,1)",
            Distribution::Uniform => "Uniform(0,1)",
            Distribution::Beta12 => "Beta(1,2)",
            Distribution::Exponential => "Exponential(1)",
            Distribution::Rayleigh => "Rayleigh(1)",
        };
        f.write_str(name)
    }
}

impl FromStr for Distribution {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "normal" | "normal(0,1)" | "gaussian" => Ok(Distribution::Normal),
            "uniform" | "uniform(0,1)" => Ok(Distribution::Uniform),
            "beta" | "beta12" | "beta(1,2)" => Ok(Distribution::Beta12),
            "exp" | "exponential" | "exponential(1)" => Ok(Distribution::Exponential),
            "rayleigh" | "rayleigh(1)" => Ok(Distribution::Rayleigh),
            other => Err(Error::parse(
                "distribution",
                format!("unknown distribution `{other}` (expected normal, uniform, beta, exp, rayleigh)"),
            )),
        }
    }
}

/// Reads one numeric value per line. An optional single header line is
/// tolerated at the top; blank lines are skipped; any other non-numeric
/// token is an error.
pub fn read_values(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path)?;
    parse_values(&text)
}

pub fn parse_values(text: &str) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    let mut seen_data_or_header = false;
    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        match line.parse::<f64>() {
            Ok(v) => {
                out.push(v);
                seen_data_or_header = true;
            }
            Err(_) if !seen_data_or_header => {
                // First non-blank line may be a header.
                seen_data_or_header = true;
            }
            Err(_) => {
                return Err(Error::parse(
                    "data file",
                    format!("non-numeric value `{line}` at line {}", lineno + 1),
                ));
            }
        }
    }
    Ok(out)
}
