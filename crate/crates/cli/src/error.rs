use std::path::PathBuf;

use thiserror::Error;

/// Process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[repr(u8)]
pub enum ExitCode {
    Success = 0,
    Validation = 1,
    Numerical = 2,
    Io = 3,
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("could not write output: {0}")]
    Output(#[source] std::io::Error),
    #[error("{context}: {source}")]
    Json {
        context: String,
        #[source]
        source: serde_json::Error,
    },
    #[error("{context}: {message}")]
    Parse { context: String, message: String },
    #[error("{context}: {source}")]
    Engine {
        context: String,
        #[source]
        source: qretro_core::Error,
    },
    #[error("{0}")]
    Unsupported(String),
    #[error("{0}")]
    ToleranceExceeded(String),
    #[error("signature test and channel oracle disagree (signature distance {signature_distance:.3e}, oracle deviation {oracle_deviation:.3e}); this indicates an implementation bug")]
    OracleDisagreement {
        signature_distance: f64,
        oracle_deviation: f64,
    },
}

impl CliError {
    pub fn engine(context: impl Into<String>, source: qretro_core::Error) -> Self {
        CliError::Engine {
            context: context.into(),
            source,
        }
    }

    pub fn parse(context: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Parse {
            context: context.into(),
            message: message.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        use qretro_core::Error as E;
        match self {
            CliError::Io { .. } | CliError::Output(_) => ExitCode::Io,
            CliError::Json { .. } | CliError::Parse { .. } | CliError::Unsupported(_) => ExitCode::Validation,
            CliError::Engine { source, .. } => match source {
                E::NoConvergence | E::Consistency { .. } => ExitCode::Numerical,
                _ => ExitCode::Validation,
            },
            CliError::ToleranceExceeded(_) | CliError::OracleDisagreement { .. } => ExitCode::Numerical,
        }
    }
}
