//! Crate-wide error type with exit-status classification.

use thiserror::Error;

/// Any failure surfaced by the library or the command-line front end.
#[derive(Debug, Error)]
pub enum Error {
    /// A single input row could not be parsed.
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },

    /// A file-level structural problem (bad header, bad magic, truncation).
    #[error("format: {0}")]
    Format(String),

    /// A key that must be unique appeared twice.
    #[error("duplicate: {0}")]
    Duplicate(String),

    /// A numeric value fell outside its documented range.
    #[error("range: {0}")]
    Range(String),

    /// Vector lengths or matrix dimensions disagree.
    #[error("shape: {0}")]
    Shape(String),

    /// Input is syntactically fine but too small or empty for the operation.
    #[error("insufficient data: {0}")]
    Insufficient(String),

    /// A mathematical precondition failed (zero vector, non-finite value).
    #[error("domain: {0}")]
    Domain(String),

    /// An id referenced by one input is missing from another.
    #[error("lookup: {0}")]
    Lookup(String),

    /// Training produced a non-finite loss.
    #[error("divergence at epoch {epoch}: loss became non-finite")]
    Divergence { epoch: usize },

    /// Bad command-line usage.
    #[error("usage: {0}")]
    Usage(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit status for this failure class.
    pub fn exit_status(&self) -> i32 {
        match self {
            Error::Insufficient(_) => 2,
            Error::Usage(_) => 64,
            _ => 1,
        }
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// A row-scoped error collected during ingestion, keyed by 1-based row number.
#[derive(Debug)]
pub struct RowError {
    pub row: usize,
    pub message: String,
}

impl std::fmt::Display for RowError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "row {}: {}", self.row, self.message)
    }
}
