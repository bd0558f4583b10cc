use std::path::PathBuf;

use thiserror::Error;

/// Process exit codes.
pub const EXIT_OK: u8 = 0;
pub const EXIT_IO: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_CAP: u8 = 3;
pub const EXIT_NOT_CONVERGED: u8 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    /// Input document does not match the schema or fails validation.
    #[error("schema error at {field}: {message}")]
    Schema { field: String, message: String },

    #[error("{0}")]
    Library(#[from] fiberot::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
}

impl CliError {
    pub fn schema(field: impl Into<String>, message: impl std::fmt::Display) -> Self {
        CliError::Schema {
            field: field.into(),
            message: message.to_string(),
        }
    }

    pub fn exit_code(&self) -> u8 {
        use fiberot::Error as E;
        match self {
            CliError::Schema { .. } | CliError::Usage(_) => EXIT_VALIDATION,
            CliError::Library(e) => match e {
                E::SizeCapExceeded { .. } | E::SolverStalled(_) => EXIT_CAP,
                E::NotConverged { .. } => EXIT_NOT_CONVERGED,
                E::LpFailure(_) => EXIT_IO,
                _ => EXIT_VALIDATION,
            },
            CliError::Io { .. } | CliError::Csv(_) => EXIT_IO,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
