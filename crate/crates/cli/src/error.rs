use std::path::PathBuf;

use srsqueeze_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("{}: {message}", path.display())]
    Config { path: PathBuf, message: String },

    #[error("{context}: {source}")]
    Io { context: String, source: std::io::Error },

    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 0 success, 1 usage, 2 configuration or IO, 3 numerical non-convergence.
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Usage(_) => 1,
            Self::Config { .. } | Self::Io { .. } => 2,
            Self::Core(e) => match e {
                CoreError::Domain(_) | CoreError::Usage(_) => 1,
                CoreError::Config(_) | CoreError::AngularMomentum(_) | CoreError::SelectionRule { .. } => 2,
                CoreError::Singular(_)
                | CoreError::ProbeNotConverged { .. }
                | CoreError::DopplerNotConverged { .. }
                | CoreError::NoBracket(_) => 3,
            },
        }
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Self::Io { context: context.into(), source }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
