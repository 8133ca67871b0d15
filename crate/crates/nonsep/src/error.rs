use std::path::PathBuf;

use nonsep_core::Error as CoreError;

/// Exit status of a run whose embedded checks failed.
pub const EXIT_ASSERTION: u8 = 1;
/// Exit status of a run rejected before any result was produced.
pub const EXIT_INPUT: u8 = 2;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    Input(String),
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("malformed JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Numerical failures on valid input count as failed assertions; anything
    /// else is an input error.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Core(
                CoreError::NoConvergence { .. }
                | CoreError::Lp(_)
                | CoreError::BracketTooWide { .. }
                | CoreError::GenericizationFailed(_)
                | CoreError::EnumerationOverflow(_),
            ) => EXIT_ASSERTION,
            _ => EXIT_INPUT,
        }
    }
}
