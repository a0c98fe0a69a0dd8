use std::path::{Path, PathBuf};

use serde::Serialize;

/// Exit codes shared by every subcommand.
pub mod exit {
    pub const SUCCESS: i32 = 0;
    /// Writing artifacts failed.
    pub const INTERNAL: i32 = 1;
    pub const BAD_INPUT: i32 = 2;
    pub const INCONCLUSIVE: i32 = 3;
    pub const REJECTED: i32 = 4;
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Core(#[from] edp_core::Error),
    #[error("cannot write {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed artifact: {0}")]
    Json(#[from] serde_json::Error),
}

impl CliError {
    pub fn io(path: impl AsRef<Path>, source: std::io::Error) -> Self {
        CliError::Io { path: path.as_ref().to_path_buf(), source }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(edp_core::Error::Inconclusive(_)) => exit::INCONCLUSIVE,
            CliError::Core(edp_core::Error::Rejected(_)) => exit::REJECTED,
            CliError::Io { .. } => exit::INTERNAL,
            _ => exit::BAD_INPUT,
        }
    }

    fn category(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Core(edp_core::Error::Inconclusive(_)) => "inconclusive",
            CliError::Core(edp_core::Error::Rejected(_)) => "rejected",
            CliError::Core(_) => "invalid-input",
            CliError::Io { .. } => "io",
            CliError::Json(_) => "invalid-input",
        }
    }

    /// Structured form written to stderr and to `error.json`.
    pub fn diagnostic(&self) -> Diagnostic {
        let rejection = match self {
            CliError::Core(edp_core::Error::Rejected(r)) => Some(r.clone()),
            _ => None,
        };
        Diagnostic { error: self.category(), message: self.to_string(), exit_code: self.exit_code(), rejection }
    }
}

#[derive(Debug, Serialize)]
pub struct Diagnostic {
    pub error: &'static str,
    pub message: String,
    pub exit_code: i32,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rejection: Option<edp_core::Rejection>,
}
