use std::path::PathBuf;

use thiserror::Error;

/// Exit code for unreadable or invalid configuration.
pub const EXIT_CONFIG: u8 = 2;
/// Exit code for numerical failures and unmet expectations.
pub const EXIT_NUMERICAL: u8 = 3;

/// Errors raised by the experiment runners.
#[derive(Debug, Error)]
pub enum CliError {
    /// The configuration could not be read, parsed or validated.
    #[error("config error: {0}")]
    Config(String),
    /// A computation failed or produced an unusable result.
    #[error("numerical failure: {0}")]
    Numerical(String),
    /// A case expected to be forced-zero came out undetermined.
    #[error("expectation not met: {0}")]
    Expectation(String),
    /// Writing a report file failed.
    #[error("cannot write {path}: {message}")]
    Output { path: PathBuf, message: String },
}

impl CliError {
    /// The process exit code for this error.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Output { .. } => EXIT_CONFIG,
            CliError::Numerical(_) | CliError::Expectation(_) => EXIT_NUMERICAL,
        }
    }

    pub(crate) fn config(e: impl std::fmt::Display) -> Self {
        CliError::Config(e.to_string())
    }

    pub(crate) fn numerical(e: impl std::fmt::Display) -> Self {
        CliError::Numerical(e.to_string())
    }
}
