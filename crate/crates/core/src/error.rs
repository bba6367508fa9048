use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid cutoff r={r} for a series of length {n} (need 1 <= r < n)")]
    InvalidCutoff { r: usize, n: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("class subset has no samples")]
    EmptySubset,

    #[error("degenerate dataset: only one class observed")]
    DegenerateDataset,

    #[error("parse error at {position}: {reason}")]
    Parse { position: String, reason: String },

    #[error("outside the validated range: {0}")]
    OutOfValidatedRange(String),

    #[error("insufficient memory: {0}")]
    InsufficientMemory(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            reason: reason.into(),
        }
    }
}
