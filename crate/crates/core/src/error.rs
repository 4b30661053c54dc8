use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("sample must contain at least one observation")]
    EmptySample,

    #[error("non-finite observation {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("oracle size guard exceeded: n = {n}, p = {p} (limits n <= 12, p <= 4)")]
    OracleGuard { n: usize, p: u32 },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("column `{0}` not found in CSV header")]
    MissingColumn(String),

    #[error("estimation failed: {0}")]
    Estimation(String),

    #[error("{dropped} of {requested} bootstrap replicates failed (limit 10%)")]
    BootstrapFailures { dropped: usize, requested: usize },

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error("thread pool: {0}")]
    ThreadPool(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
