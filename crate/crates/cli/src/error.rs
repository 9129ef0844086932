use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] theta_lab::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{0}")]
    Usage(String),

    #[error("invalid: {0}")]
    Invalid(String),

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// 1 invalid object or generic failure, 2 precondition, 3 parse, 4 resource.
    pub fn exit_code(&self) -> i32 {
        use theta_lab::Error as E;
        match self {
            CliError::Core(E::Input(_) | E::NotBalanced { .. } | E::DegreeExceeded { .. } | E::Precondition(_)) => 2,
            CliError::Core(E::Parse { .. }) => 3,
            CliError::Core(E::Resource(_)) => 4,
            CliError::Core(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Invalid(_) | CliError::Io { .. } | CliError::Csv(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
