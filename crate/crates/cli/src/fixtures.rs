//! Shared quantum fixtures for the verification suite.
//!
//! A qubit fragment closed under quarter and eighth turns, its two-qubit
//! extension closed under a controlled flip, and the reference constructions
//! built on top of them. The registry layout matches the shipped model files
//! in `models/`, so the suite and the JSON examples stay interchangeable.

use ontic_models::{
    builtin_beltrametti_bugajski, builtin_deterministic_model, CompleteOnticModel, OnticModel,
    QuantumRegistry,
};
use quantum_core::{
    Complex64, MultiIndex, ProjectorObservable, SparseState, StructuredUnitary, UnitaryRule,
};

use crate::error::Result;

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

fn amp(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

/// A real qubit state from (1-based index, amplitude) entries.
pub fn qubit(entries: &[(u32, f64)]) -> SparseState {
    SparseState::new(
        vec![2],
        entries
            .iter()
            .map(|&(i, re)| (MultiIndex::new(vec![i]), amp(re))),
    )
    .expect("valid qubit state")
}

/// A real two-qubit state from (i, j, amplitude) entries.
pub fn two_qubit(entries: &[(u32, u32, f64)]) -> SparseState {
    SparseState::new(
        vec![2, 2],
        entries
            .iter()
            .map(|&(i, j, re)| (MultiIndex::new(vec![i, j]), amp(re))),
    )
    .expect("valid two-qubit state")
}

/// Rotation by `theta` in the |1⟩,|2⟩ plane of a single qubit.
pub fn qubit_rotation(theta: f64) -> StructuredUnitary {
    StructuredUnitary::new(
        vec![2],
        vec![0],
        vec![UnitaryRule::Rotation {
            a: vec![1],
            b: vec![2],
            theta,
        }],
    )
    .expect("valid rotation")
}

/// Registry with the full fixture:
///
/// * qubit states `e1`, `e2`, `plus`, `minus`, and `skew` (weights 1/3, 2/3);
/// * two-qubit states `e1e1`, `e2e1`, `pluse1`, `psi2`, `e2e2` — the orbit
///   of the product states under `cnot`;
/// * observables `A` (qubit basis, outcomes `a_1`, `a_2`) and `A⊗1`;
/// * unitaries `rot2` (quarter turn), `rot4` (eighth turn), `cnot`.
pub fn registry() -> QuantumRegistry {
    let mut registry = QuantumRegistry::new();
    let third = (1.0f64 / 3.0).sqrt();
    let two_thirds = (2.0f64 / 3.0).sqrt();

    registry.register_state("e1", qubit(&[(1, 1.0)])).unwrap();
    registry.register_state("e2", qubit(&[(2, 1.0)])).unwrap();
    registry
        .register_state("plus", qubit(&[(1, SQRT_HALF), (2, SQRT_HALF)]))
        .unwrap();
    registry
        .register_state("minus", qubit(&[(1, SQRT_HALF), (2, -SQRT_HALF)]))
        .unwrap();
    registry
        .register_state("skew", qubit(&[(1, third), (2, two_thirds)]))
        .unwrap();

    registry
        .register_state("e1e1", two_qubit(&[(1, 1, 1.0)]))
        .unwrap();
    registry
        .register_state("e2e1", two_qubit(&[(2, 1, 1.0)]))
        .unwrap();
    registry
        .register_state(
            "pluse1",
            two_qubit(&[(1, 1, SQRT_HALF), (2, 1, SQRT_HALF)]),
        )
        .unwrap();
    registry
        .register_state("psi2", two_qubit(&[(1, 1, SQRT_HALF), (2, 2, SQRT_HALF)]))
        .unwrap();
    registry
        .register_state("e2e2", two_qubit(&[(2, 2, 1.0)]))
        .unwrap();

    registry
        .register_observable(
            "A",
            ProjectorObservable::factor_basis(vec![2], 0, "a").unwrap(),
        )
        .unwrap();
    registry
        .register_observable(
            "A⊗1",
            ProjectorObservable::factor_basis(vec![2, 2], 0, "a").unwrap(),
        )
        .unwrap();

    registry
        .register_unitary("rot2", qubit_rotation(std::f64::consts::FRAC_PI_2))
        .unwrap();
    registry
        .register_unitary("rot4", qubit_rotation(std::f64::consts::FRAC_PI_4))
        .unwrap();
    registry
        .register_unitary(
            "cnot",
            StructuredUnitary::new(
                vec![2, 2],
                vec![0, 1],
                vec![
                    UnitaryRule::Permutation {
                        from: vec![2, 1],
                        to: vec![2, 2],
                    },
                    UnitaryRule::Permutation {
                        from: vec![2, 2],
                        to: vec![2, 1],
                    },
                ],
            )
            .unwrap(),
        )
        .unwrap();
    registry
}

/// The quantum-states-as-ontic-states model on the four-state qubit
/// fragment, closed under both fixture rotations. Matches the shipped
/// `models/beltrametti_bugajski.json`.
pub fn quantum_fragment_model(registry: &QuantumRegistry) -> Result<CompleteOnticModel> {
    Ok(builtin_beltrametti_bugajski(
        registry,
        &["e1", "plus", "e2", "minus"],
        &["A"],
        &["rot2", "rot4"],
    )?)
}

/// The qubit + ancilla fragment closed under the controlled flip, for the
/// dilation consistency check.
pub fn dilation_fragment_model(registry: &QuantumRegistry) -> Result<CompleteOnticModel> {
    Ok(builtin_beltrametti_bugajski(
        registry,
        &["e1", "plus", "e2", "e1e1", "e2e1", "pluse1", "psi2", "e2e2"],
        &["A", "A⊗1"],
        &["cnot"],
    )?)
}

/// The deterministic hidden-outcome model for `plus` (weights 1/2, 1/2).
/// Matches the shipped `models/deterministic_counterexample.json`.
pub fn deterministic_half_model(registry: &QuantumRegistry) -> Result<OnticModel> {
    Ok(builtin_deterministic_model(
        registry,
        &[SQRT_HALF, SQRT_HALF],
        "plus",
        "A",
    )?)
}

/// The deterministic hidden-outcome model for `skew` (weights 1/3, 2/3).
pub fn deterministic_thirds_model(registry: &QuantumRegistry) -> Result<OnticModel> {
    Ok(builtin_deterministic_model(
        registry,
        &[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()],
        "skew",
        "A",
    )?)
}

/// Reference embezzlement configuration: weights (1/3, 2/3), window 0.1
/// (integer profile n = (1, 2)), ladder multiplier N.
pub fn reference_embezzle_config(big_n: u64) -> Result<embezzlement::EmbezzleConfig> {
    let c = [(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()];
    let approx = embezzlement::rational_approximation(&c, 0.1)?;
    Ok(embezzlement::EmbezzleConfig::new(approx, big_n)?)
}
