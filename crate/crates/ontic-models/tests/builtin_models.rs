//! The two reference constructions: quantum-states-as-ontic-states over a
//! closed fragment, and the deterministic hidden-outcome model.

mod common;

use ontic_models::{
    ancilla_independence_defect, builtin_beltrametti_bugajski, builtin_deterministic_model,
    is_psi_ontic, kernel_product, model_is_trivial, product_complete_model, reproduce_defect,
    triviality_defect, OnticError,
};

use common::{qubit, registry, SQRT_HALF};

#[test]
fn two_state_fragment_has_exact_born_rows() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(&reg, &["e1", "e2"], &["A"], &[]).unwrap();
    let model = complete.model(&[2]).unwrap();
    assert_eq!(model.space().labels(), ["e1", "e2"]);
    let response = model.response("A").unwrap();
    assert_eq!(response.outcomes(), ["a_1", "a_2"]);
    assert_eq!(response.rows(), &[vec![1.0, 0.0], vec![0.0, 1.0]]);
    assert_eq!(model.preparations().len(), 2);
    assert_eq!(model.preparation("e2").unwrap().weights(), &[0.0, 1.0]);
}

#[test]
fn four_state_fragment_reproduces_born_through_every_kernel() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(
        &reg,
        &["e1", "plus", "e2", "minus"],
        &["A"],
        &["rot2", "rot4"],
    )
    .unwrap();
    let model = complete.model(&[2]).unwrap();
    let response = model.response("A").unwrap();
    for prep in model.preparations() {
        let direct = reproduce_defect(&reg, model, prep, response, None).unwrap();
        assert!(direct <= 1e-12, "direct defect {direct} for {}", prep.represents());
        for kernel in model.kernels() {
            let evolved = reproduce_defect(&reg, model, prep, response, Some(kernel)).unwrap();
            assert!(
                evolved <= 1e-12,
                "defect {evolved} for {} through {}",
                prep.represents(),
                kernel.represents()
            );
        }
    }
}

#[test]
fn four_state_kernel_cycles_through_the_fragment() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(
        &reg,
        &["e1", "plus", "e2", "minus"],
        &["A"],
        &["rot4"],
    )
    .unwrap();
    let model = complete.model(&[2]).unwrap();
    let kernel = model.kernel("rot4").unwrap();
    let space = model.space();
    let orbit = [("e1", "plus"), ("plus", "e2"), ("e2", "minus"), ("minus", "e1")];
    for (from, to) in orbit {
        let i = space.index_of(from).unwrap();
        let j = space.index_of(to).unwrap();
        assert_eq!(kernel.prob(i, j), 1.0, "{from} should map to {to}");
    }
    // Four eighth-turns compose to the identity on the fragment.
    let twice = kernel_product(kernel, kernel).unwrap();
    let four_times = kernel_product(&twice, &twice).unwrap();
    for i in 0..space.len() {
        assert_eq!(four_times.prob(i, i), 1.0);
    }
}

#[test]
fn four_state_fragment_is_trivial_and_psi_ontic() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(
        &reg,
        &["e1", "plus", "e2", "minus"],
        &["A"],
        &["rot2", "rot4"],
    )
    .unwrap();
    let model = complete.model(&[2]).unwrap();
    assert!(model_is_trivial(&reg, model, 1e-9).unwrap());
    assert!(is_psi_ontic(&reg, model, 1e-9).unwrap());
}

#[test]
fn fragment_not_closed_under_a_rotation_is_rejected() {
    let reg = registry();
    let err = builtin_beltrametti_bugajski(&reg, &["e1", "plus", "e2"], &["A"], &["rot4"])
        .unwrap_err();
    match err {
        OnticError::FragmentNotClosed { unitary, state } => {
            assert_eq!(unitary, "rot4");
            assert_eq!(state, "e2");
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[test]
fn same_ray_under_two_tags_is_rejected() {
    let mut reg = registry();
    reg.register_state("e1neg", qubit(&[(1, -1.0)])).unwrap();
    let err = builtin_beltrametti_bugajski(&reg, &["e1", "e1neg"], &["A"], &[]).unwrap_err();
    assert!(matches!(err, OnticError::InvalidArgument { .. }));
}

#[test]
fn appender_synthesis_covers_exactly_the_embeddable_ancillas() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(
        &reg,
        &["e1", "plus", "e2", "e1e1", "e2e1", "pluse1", "psi2", "e2e2"],
        &["A", "A⊗1"],
        &["cnot"],
    )
    .unwrap();
    assert!(complete.model(&[2]).is_ok());
    assert!(complete.model(&[2, 2]).is_ok());

    // e1 is the only ancilla whose products with the qubit fragment all lie
    // in the two-qubit fragment.
    let appender = complete.appender(&[2], "e1").unwrap();
    assert_eq!(appender.represents(), "e1");
    assert!(complete.appender(&[2], "plus").is_err());
    assert!(complete.appender(&[2], "e2").is_err());

    let joint = complete.model(&[2, 2]).unwrap();
    let space1 = complete.model(&[2]).unwrap().space().clone();
    for (label, target) in [("e1", "e1e1"), ("plus", "pluse1"), ("e2", "e2e1")] {
        let i = space1.index_of(label).unwrap();
        let j = joint.space().index_of(target).unwrap();
        assert_eq!(appender.prob(i, j), 1.0, "{label} should append to {target}");
    }

    complete.validate(&reg).unwrap();
}

#[test]
fn quantum_fragment_satisfies_ancilla_independence_exactly() {
    let reg = registry();
    let complete = builtin_beltrametti_bugajski(
        &reg,
        &["e1", "plus", "e2", "e1e1", "e2e1", "pluse1", "psi2", "e2e2"],
        &["A", "A⊗1"],
        &["cnot"],
    )
    .unwrap();
    let defect = ancilla_independence_defect(&reg, &complete, &[2], "A", "e1").unwrap();
    assert!(defect <= 1e-12, "ancilla independence defect {defect}");
}

#[test]
fn deterministic_model_reproduces_born_but_is_far_from_trivial() {
    let reg = registry();
    let model =
        builtin_deterministic_model(&reg, &[SQRT_HALF, SQRT_HALF], "plus", "A").unwrap();
    let prep = &model.preparations()[0];
    let response = &model.responses()[0];
    assert!(reproduce_defect(&reg, &model, prep, response, None).unwrap() <= 1e-12);
    let defect = triviality_defect(&reg, &model, prep, response).unwrap();
    assert!(
        (defect - 0.5).abs() <= 1e-12,
        "balanced qubit should have triviality defect 1/2, got {defect}"
    );
    assert!(!model_is_trivial(&reg, &model, 0.25).unwrap());
}

#[test]
fn deterministic_model_defect_tracks_the_weights() {
    let mut reg = registry();
    let third = (1.0f64 / 3.0).sqrt();
    let two_thirds = (2.0f64 / 3.0).sqrt();
    reg.register_state("psi13", qubit(&[(1, third), (2, two_thirds)]))
        .unwrap();
    let model = builtin_deterministic_model(&reg, &[third, two_thirds], "psi13", "A").unwrap();
    let prep = &model.preparations()[0];
    let response = &model.responses()[0];
    let defect = triviality_defect(&reg, &model, prep, response).unwrap();
    assert!(
        (defect - 4.0 / 9.0).abs() <= 1e-12,
        "⅓/⅔ split should have triviality defect 4/9, got {defect}"
    );
}

#[test]
fn deterministic_model_in_dimension_one_is_trivial() {
    use quantum_core::{MultiIndex, ProjectorObservable, SparseState};
    let mut reg = registry();
    reg.register_state(
        "unit",
        SparseState::basis_state(vec![1], MultiIndex::new(vec![1])).unwrap(),
    )
    .unwrap();
    reg.register_observable(
        "U1",
        ProjectorObservable::factor_basis(vec![1], 0, "u").unwrap(),
    )
    .unwrap();
    let model = builtin_deterministic_model(&reg, &[1.0], "unit", "U1").unwrap();
    assert!(model_is_trivial(&reg, &model, 1e-12).unwrap());
}

#[test]
fn deterministic_model_rejects_bad_inputs() {
    let reg = registry();
    // Not normalized.
    assert!(matches!(
        builtin_deterministic_model(&reg, &[0.5, 0.5], "plus", "A"),
        Err(OnticError::InvalidArgument { .. })
    ));
    // Zero weight.
    assert!(matches!(
        builtin_deterministic_model(&reg, &[1.0, 0.0], "e1", "A"),
        Err(OnticError::InvalidArgument { .. })
    ));
    // State whose Born weights do not match c².
    assert!(matches!(
        builtin_deterministic_model(&reg, &[SQRT_HALF, SQRT_HALF], "e1", "A"),
        Err(OnticError::InvalidArgument { .. })
    ));
}

#[test]
fn distinct_models_of_equal_shape_cannot_be_joined() {
    let mut reg = registry();
    let third = (1.0f64 / 3.0).sqrt();
    let two_thirds = (2.0f64 / 3.0).sqrt();
    reg.register_state("psi13", qubit(&[(1, third), (2, two_thirds)]))
        .unwrap();
    let balanced =
        builtin_deterministic_model(&reg, &[SQRT_HALF, SQRT_HALF], "plus", "A").unwrap();
    let skewed = builtin_deterministic_model(&reg, &[third, two_thirds], "psi13", "A").unwrap();
    assert!(matches!(
        product_complete_model(&balanced, &skewed),
        Err(OnticError::InvalidArgument { .. })
    ));
}
