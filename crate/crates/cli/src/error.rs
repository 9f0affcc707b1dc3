//! CLI error type and the exit-code contract.
//!
//! Every process exit goes through [`ExitCode`]: 0 all checks pass, 1 at
//! least one check failed, 2 the invocation or an input file was malformed,
//! 3 a resource cap was exceeded. The four codes are exhaustive and mutually
//! exclusive; library errors are folded onto them here so the mapping lives
//! in one place.

use thiserror::Error;

/// Process exit codes, in contract order.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitCode {
    /// Every check passed.
    Pass = 0,
    /// The run completed but at least one check failed.
    CheckFailure = 1,
    /// Bad flags, malformed input, or a schema violation.
    Usage = 2,
    /// A resource cap (support, denominator, multiplier) was exceeded.
    Resource = 3,
}

impl ExitCode {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, Error)]
pub enum CliError {
    /// Invocation errors: bad flag values, inconsistent grids, unreadable
    /// input files.
    #[error("{detail}")]
    Usage { detail: String },

    /// A model file failed validation; carries the JSON pointer of the
    /// offending field.
    #[error("schema error at `{pointer}`: {detail}")]
    Schema { pointer: String, detail: String },

    /// A construction hit a configured resource ceiling.
    #[error("resource cap exceeded: {detail}")]
    Resource { detail: String },

    /// A verification identity failed while computing report values. The
    /// libraries treat oracle disagreements as hard errors, so a run that
    /// trips one is reported as a check failure with the library's message.
    #[error("check failed: {detail}")]
    Check { detail: String },
}

impl CliError {
    pub fn usage(detail: impl Into<String>) -> Self {
        CliError::Usage {
            detail: detail.into(),
        }
    }

    pub fn exit_code(&self) -> ExitCode {
        match self {
            CliError::Usage { .. } | CliError::Schema { .. } => ExitCode::Usage,
            CliError::Resource { .. } => ExitCode::Resource,
            CliError::Check { .. } => ExitCode::CheckFailure,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;

impl From<ontic_models::OnticError> for CliError {
    fn from(err: ontic_models::OnticError) -> Self {
        match err {
            ontic_models::OnticError::Schema { pointer, detail } => {
                CliError::Schema { pointer, detail }
            }
            ontic_models::OnticError::InvalidArgument { detail } => CliError::Usage { detail },
            other => CliError::Check {
                detail: other.to_string(),
            },
        }
    }
}

impl From<embezzlement::EmbezzleError> for CliError {
    fn from(err: embezzlement::EmbezzleError) -> Self {
        match err {
            embezzlement::EmbezzleError::Resource { .. } => CliError::Resource {
                detail: err.to_string(),
            },
            embezzlement::EmbezzleError::ApproximationFailed { .. } => CliError::Resource {
                detail: err.to_string(),
            },
            embezzlement::EmbezzleError::InvalidArgument { detail } => {
                CliError::Usage { detail }
            }
            other => CliError::Check {
                detail: other.to_string(),
            },
        }
    }
}

impl From<chained_bell::ChainError> for CliError {
    fn from(err: chained_bell::ChainError) -> Self {
        match err {
            chained_bell::ChainError::InvalidArgument { detail } => CliError::Usage { detail },
            chained_bell::ChainError::BadOutcomePair { .. }
            | chained_bell::ChainError::AngleOutOfRange { .. } => CliError::Usage {
                detail: err.to_string(),
            },
            other => CliError::Check {
                detail: other.to_string(),
            },
        }
    }
}

impl From<quantum_core::QuantumError> for CliError {
    fn from(err: quantum_core::QuantumError) -> Self {
        CliError::Check {
            detail: err.to_string(),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Usage {
            detail: format!("i/o error: {err}"),
        }
    }
}
