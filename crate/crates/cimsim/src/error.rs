use std::path::{Path, PathBuf};

use cim_core::Error as CoreError;

/// Command failure, classified by the process exit code it maps to.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{path}:{line}: {message}")]
    Parse { path: String, line: usize, message: String },
    #[error("refused: {0}")]
    Refusal(String),
    #[error("numerical failure: {0}")]
    Numerical(String),
}

impl CliError {
    pub const EXIT_INPUT: i32 = 2;
    pub const EXIT_REFUSAL: i32 = 3;
    pub const EXIT_NUMERICAL: i32 = 4;

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Io { .. } | CliError::Parse { .. } => Self::EXIT_INPUT,
            CliError::Refusal(_) => Self::EXIT_REFUSAL,
            CliError::Numerical(_) => Self::EXIT_NUMERICAL,
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io { path: path.to_path_buf(), source }
    }

    pub fn input(msg: impl Into<String>) -> Self {
        CliError::Input(msg.into())
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::TooLarge { .. } => CliError::Refusal(e.to_string()),
            CoreError::Divergence { .. }
            | CoreError::NonFinite
            | CoreError::Truncation { .. }
            | CoreError::NoConvergence { .. } => CliError::Numerical(e.to_string()),
            CoreError::Dimension { .. } | CoreError::InvalidInput(_) | CoreError::StepTooLarge { .. } => {
                CliError::Input(e.to_string())
            }
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("JSON: {e}"))
    }
}

pub type CliResult<T> = Result<T, CliError>;
