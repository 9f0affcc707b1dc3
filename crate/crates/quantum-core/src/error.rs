use thiserror::Error;

/// Errors produced by state/observable/unitary constructors and operations.
///
/// Every variant carries the concrete numbers that triggered it, so a failed
/// validation names the defect instead of just reporting "invalid input".
#[derive(Debug, Error)]
pub enum QuantumError {
    #[error("shape mismatch: expected {expected:?}, got {got:?}")]
    ShapeMismatch { expected: Vec<u32>, got: Vec<u32> },

    #[error("index arity mismatch: shape has {shape_len} factors, index has {index_len}")]
    ArityMismatch { shape_len: usize, index_len: usize },

    #[error("basis index {index} out of range at factor {position} (dimension {dimension}, indices are 1-based)")]
    IndexOutOfRange {
        position: usize,
        index: u32,
        dimension: u32,
    },

    #[error("state is not normalized: |sum of squared moduli - 1| = {defect:.3e} exceeds {tolerance:.3e}")]
    NotNormalized { defect: f64, tolerance: f64 },

    #[error("duplicate amplitude for basis label {index}")]
    DuplicateAmplitude { index: String },

    #[error("cannot normalize a state with zero norm")]
    ZeroNorm,

    #[error("factor {position} is not a projector: |<v|v> - 1| = {defect:.3e}")]
    NotAProjector { position: usize, defect: f64 },

    #[error("branch projectors {first} and {second} are not orthogonal: overlap {overlap:.3e}")]
    NonOrthogonalBranches {
        first: String,
        second: String,
        overlap: f64,
    },

    #[error("observable does not resolve the identity: branch ranks sum to {declared_rank}, space dimension is {space_dim} (missing rank {missing})")]
    IncompleteObservable {
        declared_rank: u128,
        space_dim: u128,
        missing: u128,
    },

    #[error("contradictory unitary rules: {detail}")]
    ContradictoryRules { detail: String },

    #[error("probabilities do not sum to 1: defect {defect:.3e} exceeds {tolerance:.3e}")]
    ProbabilityLeak { defect: f64, tolerance: f64 },

    #[error("{quantity} has imaginary residue {residue:.3e} exceeding {tolerance:.3e}")]
    ImaginaryResidue {
        quantity: &'static str,
        residue: f64,
        tolerance: f64,
    },

    #[error("invalid argument: {detail}")]
    InvalidArgument { detail: String },
}

/// Convenience alias used throughout the crate.
pub type Result<T> = std::result::Result<T, QuantumError>;
