use thiserror::Error;

/// Errors surfaced by the dispatch library.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Invalid configuration (bad scenario length, inconsistent parameters).
    #[error("configuration error: {0}")]
    Config(String),

    /// API misuse, e.g. stepping a finished environment.
    #[error("usage error: {0}")]
    Usage(String),

    /// Malformed row in an input CSV file.
    #[error("parse error in {file} at line {line}: {message}")]
    Parse {
        file: String,
        line: usize,
        message: String,
    },

    /// Timestamp present in one input series but missing in another.
    #[error("alignment error: missing or mismatched hour at {timestamp} in {file}")]
    Alignment { file: String, timestamp: String },

    /// Numerical failure during training (non-finite loss or gradient).
    #[error("training error: {0}")]
    Training(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
