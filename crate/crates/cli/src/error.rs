use std::path::Path;

use heatrace_spectral::SpectralError;
use thiserror::Error;

/// Exit status for a failed check.
pub const EXIT_CHECK_FAILED: i32 = 1;
/// Exit status for invalid configuration or arguments.
pub const EXIT_CONFIG: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Core(#[from] heatrace_core::Error),

    #[error(transparent)]
    Spectral(#[from] SpectralError),

    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl CliError {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.display().to_string(), source }
    }

    /// Every error is a rejected input; failed checks are reported, not raised.
    pub fn exit_code(&self) -> i32 {
        EXIT_CONFIG
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
