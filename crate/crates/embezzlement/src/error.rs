//! Error type for the embezzlement pipeline.

use thiserror::Error;

/// Errors raised while approximating weights, building the coupled states, or
/// evaluating the closed-form estimates.
#[derive(Debug, Error)]
pub enum EmbezzleError {
    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },

    /// The integer-weight scan exhausted its denominator cap without finding
    /// a window that matches every squared weight.
    #[error(
        "no integer weight profile matches within a factor (1-eps, 1+eps) for eps = {eps} \
         below the denominator cap {cap}"
    )]
    ApproximationFailed { eps: f64, cap: u64 },

    /// A requested construction exceeds a configured resource cap.
    #[error("resource cap exceeded for {what}: needs {needed}, cap is {cap}")]
    Resource { what: String, needed: f64, cap: f64 },

    /// A closed-form value disagrees with the brute-force oracle beyond the
    /// oracle tolerance. This is always a hard error: the closed forms are
    /// exact identities, so any disagreement is a defect.
    #[error(
        "closed form disagrees with oracle for {what}: closed form {closed_form}, \
         oracle {oracle}, difference {difference}"
    )]
    OracleMismatch {
        what: String,
        closed_form: f64,
        oracle: f64,
        difference: f64,
    },

    /// An internal consistency check failed (a bug, not a usage error).
    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },

    /// Error propagated from the state/projector/unitary layer.
    #[error(transparent)]
    Quantum(#[from] quantum_core::QuantumError),
}

pub type Result<T> = std::result::Result<T, EmbezzleError>;
