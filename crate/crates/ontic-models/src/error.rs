use quantum_core::QuantumError;
use thiserror::Error;

/// Errors raised while constructing or checking ontic models.
#[derive(Debug, Error)]
pub enum OnticError {
    #[error("ontic space has no labels")]
    EmptySpace,

    #[error("duplicate ontic label `{label}`")]
    DuplicateLabel { label: String },

    #[error("{what} has {got} entries but the space has {expected} labels")]
    LengthMismatch {
        what: String,
        expected: usize,
        got: usize,
    },

    #[error("{what}: entry for `{label}` is {value}, which is negative or not finite")]
    BadWeight {
        what: String,
        label: String,
        value: f64,
    },

    #[error("{what}: total weight {sum} differs from 1 by more than {tolerance}")]
    WeightSum {
        what: String,
        sum: f64,
        tolerance: f64,
    },

    #[error("{what} is defined on a different ontic space than expected")]
    SpaceMismatch { what: String },

    #[error("response function declares no outcomes")]
    NoOutcomes,

    #[error("duplicate outcome label `{label}`")]
    DuplicateOutcome { label: String },

    #[error("outcome sets do not match: {detail}")]
    OutcomeMismatch { detail: String },

    #[error("no {kind} registered under tag `{tag}`")]
    UnresolvableTag { kind: String, tag: String },

    #[error("tag `{tag}` is already registered as a {kind}")]
    DuplicateTag { kind: String, tag: String },

    #[error("missing component: {detail}")]
    MissingComponent { detail: String },

    #[error("fragment is not closed: unitary `{unitary}` maps `{state}` outside the listed states")]
    FragmentNotClosed { unitary: String, state: String },

    #[error("precondition failed: {detail}")]
    PreconditionFailed { detail: String },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    #[error("internal consistency failure: {detail}")]
    Internal { detail: String },

    #[error("model description at `{pointer}` is invalid: {detail}")]
    Schema { pointer: String, detail: String },

    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

pub type Result<T> = std::result::Result<T, OnticError>;
