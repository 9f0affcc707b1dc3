//! Finite ontic models over quantum systems, and the checkers that probe
//! them.
//!
//! An ontic model explains measurement statistics through a finite space of
//! ontic states Λ: preparations become probability measures on Λ, measurements
//! become response functions `p(a|λ)`, and unitaries become stochastic kernels
//! `γ(λ̃|λ)`. The model reproduces quantum theory when composing these pieces
//! returns the Born probabilities.
//!
//! The crate provides:
//!
//! - core types ([`OnticSpace`], [`PreparationMeasure`], [`ResponseFunction`],
//!   [`TransformationKernel`], [`OnticModel`], [`CompleteOnticModel`]) plus a
//!   [`QuantumRegistry`] binding model tags to concrete states, observables,
//!   and unitaries;
//! - the kernel algebra (response pullback, measure pushforward, kernel
//!   composition) used by every derived quantity;
//! - numeric checkers: Born reproduction, triviality, variational distance
//!   and ψ-onticity, parameter and ancilla independence, unitary invariance,
//!   the variance data-processing inequality, and the dilation consistency
//!   chain;
//! - reference constructions: the classical simulation whose ontic states
//!   are the pure states themselves, and the deterministic single-basis
//!   model that reproduces one measurement exactly;
//! - a JSON interchange format for models and their quantum referents.
//!
//! All checker outputs are plain `f64` defects (max-norm or L1-style as
//! documented per function) so callers choose their own tolerances; the
//! crate-wide defaults live in [`quantum_core::policy`].

pub mod builtins;
pub mod checks;
pub mod error;
pub mod json;
pub mod kernel_algebra;
pub mod types;

pub use error::{OnticError, Result};

pub use types::{
    CompleteOnticModel, OnticModel, OnticSpace, PreparationMeasure, QuantumRegistry,
    ResponseFunction, TransformationKernel,
};

pub use kernel_algebra::{kernel_product, pushforward_measure, response_after_kernel};

pub use checks::{
    ancilla_independence_defect, born_for_response, dilation_chain_lines,
    dilation_consistency_check, is_psi_ontic, is_trivial, joint_outcome_label, model_is_trivial,
    parameter_independence_defect, reproduce_defect, response_slice, triviality_defect,
    unitary_invariance_check, variance_inequality_check, variational_distance,
    variational_distance_sup, DilationChain, DilationReport, UnitaryInvarianceReport,
    VarianceReport,
};

pub use builtins::{
    builtin_beltrametti_bugajski, builtin_deterministic_model, convex_preparation,
    match_in_fragment, product_complete_model,
};

pub use json::{
    file_to_model, load_model_file, model_to_file, parse_model_str, JointLink, LoadedModel,
    ModelFile, Referents,
};
