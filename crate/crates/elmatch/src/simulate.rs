//! Reproducible Monte Carlo engine: frequentist coverage of the posterior
//! quantiles, the reference coverage grid, and the cumulant validator.
//!
//! Determinism contract: every replication draws from a substream keyed by
//! `(master_seed, replication_index)`, samples by inverse transform only,
//! and contributes to integer accumulators (or to fixed-size chunk sums
//! folded in index order), so results are bit-identical for a fixed seed
//! regardless of worker count.

use rayon::prelude::*;
use serde::Serialize;

use crate::edgeworth;
use crate::error::{Error, Result};
use crate::likelihood::LikelihoodFamily;
use crate::moments::{summarize, Distribution, ALL_DISTRIBUTIONS};
use crate::normal::inverse_normal_cdf;
use crate::posterior::{quantile, QuantileOrder};
use crate::prior::PriorSpec;
use crate::rng::{substream_seed, SplitMix64, GENERATOR_ID};

/// Inverse-transform sample from a built-in distribution.
pub fn sample(dist: Distribution, u: f64) -> Result<f64> {
    dist.inverse_cdf(u)
}

/// A validated coverage-simulation configuration.
#[derive(Debug, Clone)]
pub struct SimConfig {
    pub dist: Distribution,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub family: LikelihoodFamily,
    pub prior: PriorSpec,
    pub order: QuantileOrder,
    pub master_seed: u64,
}

impl SimConfig {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        dist: Distribution,
        n: usize,
        alpha: f64,
        reps: usize,
        family: LikelihoodFamily,
        prior: PriorSpec,
        order: QuantileOrder,
        master_seed: u64,
    ) -> Result<Self> {
        if n < 4 {
            return Err(Error::InvalidConfig(format!("n must be at least 4, got {n}")));
        }
        if !(alpha > 0.0 && alpha < 1.0) {
            return Err(Error::OutOfRange {
                what: "alpha",
                value: alpha,
            });
        }
        if reps < 1 {
            return Err(Error::InvalidConfig("reps must be at least 1".into()));
        }
        Ok(SimConfig {
            dist,
            n,
            alpha,
            reps,
            family,
            prior,
            order,
            master_seed,
        })
    }
}

/// Fully resolved configuration echoed into every report and output sink.
#[derive(Debug, Clone, Serialize)]
pub struct ConfigEcho {
    pub dist: String,
    pub n: usize,
    pub alpha: f64,
    pub reps: usize,
    pub order: String,
    pub master_seed: u64,
    pub family: LikelihoodFamily,
    pub prior: String,
    pub generator: String,
}

impl ConfigEcho {
    fn of(config: &SimConfig) -> Self {
        ConfigEcho {
            dist: config.dist.to_string(),
            n: config.n,
            alpha: config.alpha,
            reps: config.reps,
            order: match config.order {
                QuantileOrder::First => "1".into(),
                QuantileOrder::Second => "2".into(),
            },
            master_seed: config.master_seed,
            family: config.family.clone(),
            prior: config.prior.spec_string().unwrap_or_else(|| "custom".into()),
            generator: GENERATOR_ID.into(),
        }
    }
}

/// Monte Carlo estimate of the frequentist coverage with provenance.
#[derive(Debug, Clone, Serialize)]
pub struct CoverageReport {
    pub config: ConfigEcho,
    pub hits: u64,
    /// Replications whose summary degenerated (zero spread); excluded from
    /// the coverage denominator.
    pub degenerate_skipped: u64,
    pub effective_reps: u64,
    pub coverage: f64,
    pub mc_stderr: f64,
}

fn with_pool<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> T {
    match workers {
        Some(w) => rayon::ThreadPoolBuilder::new()
            .num_threads(w.max(1))
            .build()
            .expect("worker pool")
            .install(f),
        None => f(),
    }
}

/// Estimates P{θ ≤ θ^{(1−α)}} by simulation. `workers` caps the thread
/// count; it never changes the result.
pub fn run_coverage(config: &SimConfig, workers: Option<usize>) -> CoverageReport {
    let theta_true = config.dist.moments().mean;
    let (hits, degen) = with_pool(workers, || {
        (0..config.reps as u64)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(config.n),
                |buf, rep| {
                    buf.clear();
                    let mut rng = SplitMix64::substream(config.master_seed, rep);
                    for _ in 0..config.n {
                        let u = rng.next_open01();
                        buf.push(config.dist.inverse_cdf(u).expect("u is in (0,1)"));
                    }
                    match summarize(buf) {
                        Ok(summary) => {
                            let q = quantile(
                                &config.family,
                                &config.prior,
                                &summary,
                                config.alpha,
                                config.order,
                            )
                            .expect("alpha validated");
                            ((theta_true <= q.primary()) as u64, 0u64)
                        }
                        Err(_) => (0, 1),
                    }
                },
            )
            .reduce(|| (0, 0), |a, b| (a.0 + b.0, a.1 + b.1))
    });
    let effective = config.reps as u64 - degen;
    let coverage = if effective > 0 {
        hits as f64 / effective as f64
    } else {
        f64::NAN
    };
    let mc_stderr = if effective > 0 {
        (coverage * (1.0 - coverage) / effective as f64).sqrt()
    } else {
        f64::NAN
    };
    CoverageReport {
        config: ConfigEcho::of(config),
        hits,
        degenerate_skipped: degen,
        effective_reps: effective,
        coverage,
        mc_stderr,
    }
}

/// Reference coverage values for the 40-cell study: exponential-family
/// likelihood, skewness-correcting prior, first-order quantile, 10000
/// replications per cell. Levels run over {0.95, 0.90, 0.10, 0.05} and
/// sample sizes over {8, 12, 16, 20}.
pub const TABLE2_LEVELS: [f64; 4] = [0.95, 0.90, 0.10, 0.05];
pub const TABLE2_SIZES: [usize; 4] = [8, 12, 16, 20];

/// `TABLE2_REFERENCE[d][l][i]` is the reference coverage for distribution
/// `ALL_DISTRIBUTIONS[d]`, level `TABLE2_LEVELS[l]`, size `TABLE2_SIZES[i]`.
pub const TABLE2_REFERENCE: [[[f64; 4]; 4]; 5] = [
    // Normal(0,1)
    [
        [0.912, 0.928, 0.933, 0.938],
        [0.863, 0.877, 0.884, 0.886],
        [0.138, 0.123, 0.119, 0.114],
        [0.088, 0.074, 0.069, 0.064],
    ],
    // Uniform(0,1)
    [
        [0.934, 0.944, 0.946, 0.949],
        [0.887, 0.896, 0.897, 0.898],
        [0.112, 0.106, 0.102, 0.102],
        [0.067, 0.056, 0.051, 0.051],
    ],
    // Beta(1,2)
    [
        [0.910, 0.928, 0.936, 0.938],
        [0.861, 0.880, 0.888, 0.890],
        [0.110, 0.108, 0.106, 0.104],
        [0.061, 0.055, 0.055, 0.054],
    ],
    // Exponential(1)
    [
        [0.850, 0.878, 0.898, 0.906],
        [0.798, 0.827, 0.845, 0.854],
        [0.111, 0.113, 0.111, 0.111],
        [0.063, 0.064, 0.063, 0.061],
    ],
    // Rayleigh(1)
    [
        [0.900, 0.918, 0.928, 0.931],
        [0.849, 0.868, 0.878, 0.880],
        [0.119, 0.113, 0.111, 0.108],
        [0.070, 0.064, 0.060, 0.056],
    ],
];

#[derive(Debug, Clone, Serialize)]
pub struct Table2Cell {
    pub dist: String,
    pub level: f64,
    pub n: usize,
    pub coverage: f64,
    pub reference: f64,
    pub abs_diff: f64,
    pub mc_stderr: f64,
    pub hits: u64,
    pub degenerate_skipped: u64,
    pub cell_seed: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Table2Report {
    pub master_seed: u64,
    pub reps: usize,
    pub family: String,
    pub prior: String,
    pub order: String,
    pub generator: String,
    pub cells: Vec<Table2Cell>,
    pub max_abs_diff: f64,
}

/// Re-runs the full 5 × 4 × 4 coverage grid and compares each cell against
/// the shipped reference values.
///
/// Cell c uses master seed `substream_seed(master_seed, c)`; within a cell
/// replication r draws from substream `(cell_seed, r)`. The grid uses the
/// μ = 1/8 member of the exponential-family subclass; the first-order
/// quantile under the skewness prior is identical for every μ, a property
/// the test suite pins down separately.
pub fn reproduce_table2(master_seed: u64, reps: usize, workers: Option<usize>) -> Table2Report {
    let family = LikelihoodFamily::geef(crate::poly::Rational::new(1, 8));
    let prior = PriorSpec::skew_correcting();
    let mut cells = Vec::with_capacity(80);
    let mut cell_index = 0u64;
    for (d, dist) in ALL_DISTRIBUTIONS.iter().enumerate() {
        for (l, &level) in TABLE2_LEVELS.iter().enumerate() {
            for (i, &n) in TABLE2_SIZES.iter().enumerate() {
                let cell_seed = substream_seed(master_seed, cell_index);
                cell_index += 1;
                let config = SimConfig::new(
                    *dist,
                    n,
                    1.0 - level,
                    reps,
                    family.clone(),
                    prior.clone(),
                    QuantileOrder::First,
                    cell_seed,
                )
                .expect("grid cells are valid configs");
                let report = run_coverage(&config, workers);
                let reference = TABLE2_REFERENCE[d][l][i];
                cells.push(Table2Cell {
                    dist: dist.to_string(),
                    level,
                    n,
                    coverage: report.coverage,
                    reference,
                    abs_diff: (report.coverage - reference).abs(),
                    mc_stderr: report.mc_stderr,
                    hits: report.hits,
                    degenerate_skipped: report.degenerate_skipped,
                    cell_seed,
                });
            }
        }
    }
    let max_abs_diff = cells.iter().map(|c| c.abs_diff).fold(0.0, f64::max);
    Table2Report {
        master_seed,
        reps,
        family: family.name.clone(),
        prior: prior.spec_string().unwrap(),
        order: "1".into(),
        generator: GENERATOR_ID.into(),
        cells,
        max_abs_diff,
    }
}

/// Configuration of the cumulant validator.
#[derive(Debug, Clone)]
pub struct CumulantConfig {
    pub dist: Distribution,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub family: LikelihoodFamily,
    /// Flat or simple; the frequentist cumulants are not available for
    /// other classes.
    pub prior: PriorSpec,
    /// Quantile at which the order-n⁻¹ pivot adjustment is applied (k₂
    /// depends on it).
    pub z: f64,
}

impl CumulantConfig {
    /// Defaults: usual empirical likelihood, skewness-correcting prior,
    /// z at the 95% point.
    pub fn new(dist: Distribution, n: usize, reps: usize, master_seed: u64) -> Result<Self> {
        if n < 20 {
            return Err(Error::InvalidConfig(format!(
                "cumulant validation needs n >= 20, got {n}"
            )));
        }
        if reps < 100 {
            return Err(Error::InvalidConfig(format!(
                "cumulant validation needs reps >= 100, got {reps}"
            )));
        }
        Ok(CumulantConfig {
            dist,
            n,
            reps,
            master_seed,
            family: LikelihoodFamily::empirical_likelihood(),
            prior: PriorSpec::skew_correcting(),
            z: inverse_normal_cdf(0.95).expect("fixed probability"),
        })
    }

    pub fn with_family(mut self, family: LikelihoodFamily) -> Self {
        self.family = family;
        self
    }

    pub fn with_prior(mut self, prior: PriorSpec) -> Self {
        self.prior = prior;
        self
    }

    pub fn with_z(mut self, z: f64) -> Self {
        self.z = z;
        self
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CumulantRow {
    pub name: &'static str,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub predicted: f64,
    /// |mc − predicted| / stderr.
    pub deviation_sigmas: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CumulantReport {
    pub dist: String,
    pub n: usize,
    pub reps: usize,
    pub master_seed: u64,
    pub family: String,
    pub prior: String,
    pub z: f64,
    pub generator: String,
    pub degenerate_skipped: u64,
    pub rows: Vec<CumulantRow>,
}

/// Chunk size for deterministic accumulation: per-chunk partial sums are
/// computed in parallel but folded in chunk order, so float totals do not
/// depend on the worker count.
const CHUNK: usize = 4096;

/// Monte Carlo check of the four approximate pivot cumulants against their
/// closed forms: the scaled mean, variance excess, third and fourth
/// cumulants of the adjusted pivot converge to (k₁, k₂, k₃, k₄). Standard
/// errors come from the delta method on the first eight raw moments.
pub fn validate_cumulants(config: &CumulantConfig, workers: Option<usize>) -> Result<CumulantReport> {
    let pop = config.dist.moments();
    // Fail fast on unsupported priors before burning simulation time.
    let predicted = edgeworth::cumulants(&config.family, &config.prior, &pop, config.z)?;
    let theta = pop.mean;
    let sigma = pop.variance.sqrt();
    let z2p2 = config.z * config.z + 2.0;
    let nf = config.n as f64;

    let n_chunks = config.reps.div_ceil(CHUNK);
    let chunk_results: Vec<([f64; 8], u64)> = with_pool(workers, || {
        (0..n_chunks)
            .into_par_iter()
            .map_init(
                || Vec::with_capacity(config.n),
                |buf, chunk| {
                    let lo = chunk * CHUNK;
                    let hi = ((chunk + 1) * CHUNK).min(config.reps);
                    let mut sums = [0.0f64; 8];
                    let mut degen = 0u64;
                    for rep in lo..hi {
                        let mut rng = SplitMix64::substream(config.master_seed, rep as u64);
                        buf.clear();
                        for _ in 0..config.n {
                            let u = rng.next_open01();
                            buf.push(config.dist.inverse_cdf(u).expect("u in (0,1)"));
                        }
                        let mean = buf.iter().sum::<f64>() / nf;
                        let m2 = buf.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / nf;
                        if m2 == 0.0 {
                            degen += 1;
                            continue;
                        }
                        // Standardized fluctuations around the population law.
                        let (mut a1, mut a2, mut a3) = (0.0, 0.0, 0.0);
                        for &x in buf.iter() {
                            let zv = (x - theta) / sigma;
                            a1 += zv - 0.0;
                            a2 += zv * zv - 1.0;
                            a3 += zv * zv * zv - pop.skewness;
                        }
                        let scale = 1.0 / nf.sqrt();
                        let (a1, a2, a3) = (a1 * scale, a2 * scale, a3 * scale);
                        let y = (nf / m2).sqrt() * (theta - mean);
                        let (w1, w3) =
                            edgeworth::w_terms(&config.family, &config.prior, &pop, a1, a2, a3)
                                .expect("prior class validated");
                        let adj = y - (w1 + w3 * z2p2) / nf;
                        let mut p = 1.0;
                        for slot in sums.iter_mut() {
                            p *= adj;
                            *slot += p;
                        }
                    }
                    (sums, degen)
                },
            )
            .collect()
    });

    // Deterministic fold in chunk order.
    let mut sums = [0.0f64; 8];
    let mut degen = 0u64;
    for (chunk_sums, chunk_degen) in chunk_results {
        for (acc, v) in sums.iter_mut().zip(chunk_sums) {
            *acc += v;
        }
        degen += chunk_degen;
    }

    let kept = config.reps as u64 - degen;
    if kept < 100 {
        return Err(Error::InvalidConfig(
            "too few non-degenerate replications for cumulant estimation".into(),
        ));
    }
    let count = kept as f64;
    let mut mu = [0.0f64; 9]; // mu[p] = p-th raw moment, mu[0] = 1
    mu[0] = 1.0;
    for p in 1..=8 {
        mu[p] = sums[p - 1] / count;
    }

    let kappa = [
        mu[1],
        mu[2] - mu[1] * mu[1],
        mu[3] - 3.0 * mu[1] * mu[2] + 2.0 * mu[1].powi(3),
        mu[4] - 4.0 * mu[1] * mu[3] - 3.0 * mu[2] * mu[2] + 12.0 * mu[1] * mu[1] * mu[2]
            - 6.0 * mu[1].powi(4),
    ];
    let grads = [
        [1.0, 0.0, 0.0, 0.0],
        [-2.0 * mu[1], 1.0, 0.0, 0.0],
        [-3.0 * mu[2] + 6.0 * mu[1] * mu[1], -3.0 * mu[1], 1.0, 0.0],
        [
            -4.0 * mu[3] + 24.0 * mu[1] * mu[2] - 24.0 * mu[1].powi(3),
            -6.0 * mu[2] + 12.0 * mu[1] * mu[1],
            -4.0 * mu[1],
            1.0,
        ],
    ];
    // Covariance of the first four power means.
    let mut cov = [[0.0f64; 4]; 4];
    for (p, row) in cov.iter_mut().enumerate() {
        for (q, entry) in row.iter_mut().enumerate() {
            *entry = mu[p + q + 2] - mu[p + 1] * mu[q + 1];
        }
    }
    let se = |g: &[f64; 4]| -> f64 {
        let mut v = 0.0;
        for p in 0..4 {
            for q in 0..4 {
                v += g[p] * cov[p][q] * g[q];
            }
        }
        (v.max(0.0) / count).sqrt()
    };

    let sqrt_n = nf.sqrt();
    let scaled = [
        ("k1", sqrt_n * kappa[0], sqrt_n * se(&grads[0]), predicted.0),
        ("k2", nf * (kappa[1] - 1.0), nf * se(&grads[1]), predicted.1),
        ("k3", sqrt_n * kappa[2], sqrt_n * se(&grads[2]), predicted.2),
        ("k4", nf * kappa[3], nf * se(&grads[3]), predicted.3),
    ];
    let rows = scaled
        .into_iter()
        .map(|(name, mc, stderr, pred)| CumulantRow {
            name,
            mc_estimate: mc,
            mc_stderr: stderr,
            predicted: pred,
            deviation_sigmas: if stderr > 0.0 {
                (mc - pred).abs() / stderr
            } else {
                f64::INFINITY
            },
        })
        .collect();

    Ok(CumulantReport {
        dist: config.dist.to_string(),
        n: config.n,
        reps: config.reps,
        master_seed: config.master_seed,
        family: config.family.name.clone(),
        prior: config.prior.spec_string().unwrap_or_else(|| "custom".into()),
        z: config.z,
        generator: GENERATOR_ID.into(),
        degenerate_skipped: degen,
        rows,
    })
}
