//! Shared quantum fixture for the integration tests: a qubit fragment
//! closed under the relevant rotations, a two-qubit fragment closed under a
//! controlled flip, and the observables/unitaries the checkers refer to.

use ontic_models::QuantumRegistry;
use quantum_core::{
    Complex64, MultiIndex, ProjectorObservable, SparseState, StructuredUnitary, UnitaryRule,
};

pub const SQRT_HALF: f64 = std::f64::consts::FRAC_1_SQRT_2;

pub fn amp(re: f64) -> Complex64 {
    Complex64::new(re, 0.0)
}

pub fn qubit(entries: &[(u32, f64)]) -> SparseState {
    SparseState::new(
        vec![2],
        entries
            .iter()
            .map(|&(i, re)| (MultiIndex::new(vec![i]), amp(re))),
    )
    .expect("valid qubit state")
}

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
/// * qubit states `e1`, `e2`, `plus`, `minus`;
/// * two-qubit states `e1e1`, `e2e1`, `pluse1`, `psi2`, `e2e2` (the orbit of
///   the product states under `cnot`);
/// * observables `A` (first-factor basis of a qubit, outcomes `a_1`, `a_2`)
///   and `A⊗1` (same on two qubits);
/// * unitaries `rot2` (quarter turn), `rot4` (eighth turn), `cnot`
///   (flip the second qubit when the first is |2⟩).
pub fn registry() -> QuantumRegistry {
    let mut registry = QuantumRegistry::new();
    registry
        .register_state("e1", qubit(&[(1, 1.0)]))
        .unwrap();
    registry
        .register_state("e2", qubit(&[(2, 1.0)]))
        .unwrap();
    registry
        .register_state("plus", qubit(&[(1, SQRT_HALF), (2, SQRT_HALF)]))
        .unwrap();
    registry
        .register_state("minus", qubit(&[(1, SQRT_HALF), (2, -SQRT_HALF)]))
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
