use std::path::PathBuf;

use thiserror::Error;

/// Process exit status, distinct per outcome so CI can whitelist the
/// documented discrepancies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExitStatus {
    Pass = 0,
    Failure = 1,
    Usage = 2,
    CapExceeded = 3,
    Discrepancy = 4,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] ban_core::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{0}")]
    Usage(String),

    #[error("trace line {line}: {message}")]
    Replay { line: usize, message: String },
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    pub fn status(&self) -> ExitStatus {
        match self {
            CliError::Core(ban_core::Error::CapExceeded { .. }) => ExitStatus::CapExceeded,
            CliError::Core(ban_core::Error::IntegralityViolation { .. }) => ExitStatus::Discrepancy,
            CliError::Replay { .. } => ExitStatus::Failure,
            _ => ExitStatus::Usage,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
