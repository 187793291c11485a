use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the forecasting toolkit.
#[derive(Debug, Error)]
pub enum Error {
    #[error("failed to read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("invalid series: {0}")]
    InvalidSeries(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("series too short: need at least {needed} values, got {got}")]
    TooShort { needed: usize, got: usize },

    #[error("series has zero variance")]
    ZeroVariance,

    #[error("estimation failed for ARIMA({p},{d},{q}): {reason}")]
    Estimation {
        p: usize,
        d: usize,
        q: usize,
        reason: String,
    },

    #[error("no candidate order converged")]
    NoConvergedOrder,
}

pub type Result<T> = std::result::Result<T, Error>;
