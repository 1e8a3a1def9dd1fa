use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed or inconsistent configuration.
    #[error("{source_name}: {path}: {message}")]
    Schema {
        source_name: String,
        path: String,
        message: String,
    },
    /// A physics or numerics invariant is violated.
    #[error("{source_name}: {path}: {message}")]
    Physics {
        source_name: String,
        path: String,
        message: String,
    },
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            Self::Schema { .. } => 2,
            Self::Physics { .. } => 3,
            Self::Io(_) => 1,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
