//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Sample summaries need at least four points so that the kurtosis
    /// coefficient is defined from data with some spread.
    #[error("sample has {n} points; at least 4 are required")]
    TooFewPoints { n: usize },

    /// All sample values equal: the second central moment is exactly zero
    /// and the pivot is undefined.
    #[error("degenerate sample: second central moment is zero")]
    DegenerateSample,

    /// A probability or level outside its open domain.
    #[error("{what} must lie strictly in (0, 1), got {value}")]
    OutOfRange { what: &'static str, value: f64 },

    /// The frequentist expansion is only available for flat and simple
    /// priors; elaborate and custom priors are assessed by simulation.
    #[error("{context}: only flat and simple priors are supported")]
    UnsupportedPriorClass { context: &'static str },

    /// An operation whose derivation assumes an earlier condition was
    /// called on a family that violates it.
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),

    /// Custom priors are described only by their log-derivatives and have
    /// no density representation.
    #[error("custom priors expose no density")]
    NoDensity,

    /// Malformed spec string, polynomial text, rational, or data file.
    #[error("parse error in {what}: {msg}")]
    Parse { what: &'static str, msg: String },

    /// Simulation configuration failed validation.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn parse(what: &'static str, msg: impl Into<String>) -> Self {
        Error::Parse {
            what,
            msg: msg.into(),
        }
    }
}
