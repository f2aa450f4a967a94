//! Higher-order asymptotics for data-dependent probability matching priors
//! under empirical-type likelihoods.
//!
//! The crate models the general class of empirical-type likelihoods for a
//! population mean — a normal kernel in the studentized pivot times
//! polynomial corrections in the sample skewness and kurtosis — together
//! with data-dependent prior classes whose log density is linear or
//! quadratic in θ − x̄. On top of that it provides, in matched pairs of
//! symbolic and numeric routes:
//!
//! * **exact matching checks** ([`matching`]): polynomial identities that
//!   decide whether a family admits a prior making its posterior quantiles
//!   frequentist-valid to margin o(n^{-1/2}) or o(n⁻¹), with automatic
//!   derivation of the matching prior when one exists;
//! * **posterior quantiles** ([`posterior`]): closed-form first- and
//!   second-order quantiles of θ from a sample summary;
//! * **coverage prediction** ([`edgeworth`]): the frequentist coverage
//!   expansion 1 − α + (n^{-1/2}Δ₁ + n⁻¹Δ₂)φ(z) from population moments;
//! * **coverage simulation** ([`simulate`]): a deterministic, splittable
//!   Monte Carlo harness that estimates true coverage, reproduces the
//!   published 80-value reference grid, and validates the approximate
//!   pivot cumulants.
//!
//! Start with the `examples/` directory: each file is a runnable tour of
//! one capability. The `elmatch` binary exposes the same operations as CLI
//! subcommands.

pub mod edgeworth;
pub mod error;
pub mod likelihood;
pub mod matching;
pub mod moments;
pub mod normal;
pub mod poly;
pub mod posterior;
pub mod prior;
pub mod report;
pub mod rng;
pub mod simulate;

pub use error::{Error, Result};
pub use likelihood::LikelihoodFamily;
pub use moments::{summarize, Distribution, PopulationMoments, SampleSummary};
pub use posterior::{quantile, QuantileOrder, QuantileResult};
pub use prior::PriorSpec;
