use std::path::PathBuf;

use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("coefficient ring mismatch: {left} vs {right}")]
    RingMismatch { left: String, right: String },

    #[error("not invertible in {ring}: {what}")]
    NotInvertible { ring: String, what: String },

    #[error("series valuation {valuation} is not divisible by {n}")]
    ValuationNotDivisible { valuation: usize, n: u64 },

    #[error("series precision too small: need {needed}, have {have}")]
    PrecisionShortfall { needed: usize, have: usize },

    #[error("field F_{q} exceeds the counting budget ({budget})")]
    BudgetExceeded { q: u64, budget: u64 },

    #[error("cusp fiber at t = 0 is excluded")]
    CuspFiber,

    #[error("singular fiber: {0}")]
    SingularFiber(String),

    #[error("baby-step giant-step could not resolve the group order over F_{q}")]
    BsgsAmbiguous { q: u64 },

    #[error("construction failed: {0}")]
    Construction(String),

    #[error("calibration failed: {0}")]
    Calibration(String),

    #[error("not an eigenform at this precision: {0}")]
    NotEigen(String),

    #[error("structural error: {0}")]
    Structure(String),

    #[error("coefficient unavailable: a({0})")]
    CoefficientUnavailable(u64),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidInput(msg.into()))
}
