use std::path::PathBuf;

use nabla_fc_core::Error as CoreError;

/// Failure of one command, carrying its process exit code.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Data(String),
    #[error("{0}")]
    Solver(String),
    #[error("{violations} inequality violations")]
    Violation { violations: usize },
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Violation { .. } => 1,
            CliError::Usage(_) => 2,
            CliError::Data(_) | CliError::Io { .. } => 3,
            CliError::Solver(_) => 4,
        }
    }

    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> CliError {
        let path = path.into();
        move |source| CliError::Io { path, source }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::NonConvergence { .. } | CoreError::Overflow { .. } => CliError::Solver(e.to_string()),
            CoreError::InvalidParameter(_)
            | CoreError::OrderOutOfRange(_)
            | CoreError::UnknownSystem(_)
            | CoreError::EmptyWeights
            | CoreError::NotSpd
            | CoreError::NotConjugate { .. } => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
