use std::path::PathBuf;
use thiserror::Error;

/// Failures of a CLI invocation, each mapped to its own exit code.
#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or names given on the command line.
    #[error("{0}")]
    Usage(String),

    /// Input files that parse but do not describe a valid request.
    #[error("{0}")]
    Validation(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    /// Some bench runs failed; the others completed and were written.
    #[error("{failed} of {total} runs failed")]
    RunsFailed { failed: usize, total: usize },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Validation(_) => 3,
            CliError::Io { .. } => 4,
            CliError::RunsFailed { .. } => 5,
        }
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// Library errors caused by command-line input.
    pub fn from_flags(e: hscfr::Error) -> Self {
        match e {
            hscfr::Error::Config(msg) => CliError::Usage(msg),
            other => CliError::Validation(other.to_string()),
        }
    }

    /// Library errors caused by the contents of an input file.
    pub fn from_file(e: hscfr::Error) -> Self {
        CliError::Validation(e.to_string())
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
