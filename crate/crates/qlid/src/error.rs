use std::path::PathBuf;

use qlid_core::Error as ModelError;

pub type Result<T> = std::result::Result<T, HarnessError>;

#[derive(Debug, thiserror::Error)]
pub enum HarnessError {
    #[error("{origin}: {message}")]
    Parse { origin: String, message: String },

    #[error("{origin}: field `{field}`: {message}")]
    Invalid { origin: String, field: String, message: String },

    #[error("unknown built-in experiment `{0}`")]
    UnknownBuiltin(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Model(#[from] ModelError),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },

    #[error("{}: {source}", path.display())]
    Csv { path: PathBuf, source: csv::Error },
}

impl HarnessError {
    /// Process exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Parse { .. }
            | HarnessError::Invalid { .. }
            | HarnessError::UnknownBuiltin(_)
            | HarnessError::Usage(_) => 2,
            HarnessError::Model(ModelError::DegenerateQuery(_)) => 3,
            HarnessError::Model(ModelError::NoSolution { .. }) => 4,
            HarnessError::Model(_) => 2,
            HarnessError::Io { .. } | HarnessError::Csv { .. } => 1,
        }
    }
}
