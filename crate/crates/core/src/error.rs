use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} is out of range for length {len}")]
    Range { index: usize, len: usize },

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("no value assigned to prime {0}")]
    MissingPrime(u64),

    /// A node, size or enumeration cap was hit before the question was settled.
    #[error("inconclusive: {0}")]
    Inconclusive(String),

    #[error("certificate rejected: {0}")]
    Rejected(Rejection),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Toml(#[from] toml::de::Error),
}

impl Error {
    pub(crate) fn arg(msg: impl Into<String>) -> Self {
        Error::Argument(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

/// Diagnostics attached to a rejected certificate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Rejection {
    /// Name of the violated constraint, e.g. `psd`, `simplex`, `offdiagonal`.
    pub constraint: String,
    pub detail: String,
    /// Witness data: an eigenvector for PSD failures, `[i, j, value]` for
    /// off-diagonal leakage.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<f64>>,
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} constraint violated: {}", self.constraint, self.detail)
    }
}

impl Rejection {
    pub fn new(constraint: &str, detail: impl Into<String>, witness: Option<Vec<f64>>) -> Self {
        Rejection { constraint: constraint.to_string(), detail: detail.into(), witness }
    }
}
