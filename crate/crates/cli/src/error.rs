use std::path::PathBuf;

use discordlab_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage: {0}")]
    Usage(String),
    #[error("invalid input: {0}")]
    Validation(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("refusing to simulate {count} measurements (limit 1000000000); pass --override-resource-guard to run anyway")]
    ResourceGuard { count: u128 },
    #[error("numerical consistency check failed: {0}")]
    Numerical(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) | CliError::Io { .. } => 3,
            CliError::ResourceGuard { .. } => 4,
            CliError::Numerical(_) => 5,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::ResourceGuard { count } => CliError::ResourceGuard { count },
            CoreError::InvalidGrid(_) | CoreError::InvalidBudget(_) => {
                CliError::Usage(e.to_string())
            }
            CoreError::NonConvergence { .. }
            | CoreError::NegativeDiscord { .. }
            | CoreError::CostOverflow { .. } => CliError::Numerical(e.to_string()),
            _ => CliError::Validation(e.to_string()),
        }
    }
}
