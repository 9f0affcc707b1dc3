use thiserror::Error;

#[derive(Debug, Error)]
pub enum ChainError {
    #[error("invalid outcome pair: i = {i}, j = {j} must be distinct indices in 1..={d}")]
    BadOutcomePair { d: u32, i: u32, j: u32 },

    #[error("angle {theta} is outside [0, π/2]")]
    AngleOutOfRange { theta: f64 },

    #[error("invalid parameter: {detail}")]
    InvalidArgument { detail: String },

    #[error("model is missing the component for rung `{tag}`: {detail}")]
    MissingRung { tag: String, detail: String },

    #[error(
        "parameter independence is violated at rung `{tag}` (defect {defect:.3e} > {tolerance:.0e}); \
         the chained estimate does not apply"
    )]
    ParameterDependence {
        tag: String,
        defect: f64,
        tolerance: f64,
    },

    #[error(
        "closed form and brute-force oracle disagree for {what}: {closed_form} vs {oracle} \
         (difference {difference:.3e})"
    )]
    OracleMismatch {
        what: String,
        closed_form: f64,
        oracle: f64,
        difference: f64,
    },

    #[error("internal invariant violated: {detail}")]
    Internal { detail: String },

    #[error(transparent)]
    Model(#[from] ontic_models::OnticError),

    #[error(transparent)]
    Quantum(#[from] quantum_core::QuantumError),
}

pub type Result<T> = std::result::Result<T, ChainError>;
