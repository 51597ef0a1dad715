use std::path::PathBuf;

use thiserror::Error;

/// Crate-wide error type.
///
/// Variants are grouped so the CLI can map them onto its exit codes:
/// configuration problems, missing stage prerequisites and numerical
/// divergence each get their own variant.
#[derive(Debug, Error)]
pub enum Error {
    #[error("io error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },

    #[error("csv parse error in {path} at line {line}: {msg}")]
    CsvRow {
        path: PathBuf,
        line: u64,
        msg: String,
    },

    #[error("invalid data: {0}")]
    Validation(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    #[error("checkpoint error: {0}")]
    Checkpoint(String),

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("statistics error: {0}")]
    Stats(String),

    #[error("optimizer failed to converge: {0}")]
    NonConvergence(String),

    #[error("accounting error: {0}")]
    Accounting(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("missing prerequisite: {0}")]
    Prerequisite(String),

    #[error("numerical divergence: {0}")]
    Divergence(String),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
