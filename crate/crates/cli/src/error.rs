use std::path::PathBuf;

use dirichlet_core::Error as CoreError;

/// Everything the command-line front end can fail with. [`CliError::exit_code`]
/// maps each case to the process exit status.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("cannot read {path}: {source}")]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {path}: {source}")]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: {message}")]
    Invalid { path: PathBuf, message: String },
    #[error("invalid configuration {path}:\n  {}", .problems.join("\n  "))]
    Config { path: PathBuf, problems: Vec<String> },
    #[error("solver did not converge: {0}")]
    NotConverged(String),
    #[error(transparent)]
    Core(#[from] CoreError),
}

impl CliError {
    /// 0 is success; 1 covers usage, input and validation problems; 2 is a
    /// numerical failure.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::NotConverged(_) | CliError::Core(CoreError::SingularSystem) => 2,
            _ => 1,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
