//! Structural properties that must hold for arbitrary model components:
//! closure of the kernel algebra under composition, monotonicity of the
//! variational distance under pushforward (data processing), the variance
//! inequality on random inputs, and guaranteed detectability of injected
//! response faults.

mod common;

use ontic_models::{
    builtin_beltrametti_bugajski, kernel_product, pushforward_measure, reproduce_defect,
    response_after_kernel, variance_inequality_check, variational_distance, OnticSpace,
    PreparationMeasure, ResponseFunction, TransformationKernel,
};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::registry;

fn labelled_space(n: usize) -> OnticSpace {
    OnticSpace::new((0..n).map(|i| format!("λ{i}")).collect()).unwrap()
}

/// Normalize to an exact distribution: divide by the sum, then absorb the
/// rounding residue into the last entry so the compensated total is 1.
fn normalize(mut v: Vec<f64>) -> Vec<f64> {
    let sum: f64 = v.iter().sum();
    for x in &mut v {
        *x /= sum;
    }
    let head: f64 = v[..v.len() - 1].iter().sum();
    let last = v.len() - 1;
    v[last] = 1.0 - head;
    v
}

fn stochastic_rows(raw: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    raw.into_iter().map(normalize).collect()
}

#[allow(clippy::type_complexity)]
fn sized_components() -> impl Strategy<
    Value = (
        Vec<f64>,      // measure 1 (unnormalized)
        Vec<f64>,      // measure 2 (unnormalized)
        Vec<Vec<f64>>, // kernel rows (unnormalized)
        Vec<Vec<f64>>, // response rows over 3 outcomes (unnormalized)
    ),
> {
    (2usize..=8).prop_flat_map(|n| {
        (
            prop::collection::vec(0.01f64..1.0, n),
            prop::collection::vec(0.01f64..1.0, n),
            prop::collection::vec(prop::collection::vec(0.01f64..1.0, n), n),
            prop::collection::vec(prop::collection::vec(0.01f64..1.0, 3), n),
        )
    })
}

proptest! {
    /// Pullback, pushforward, and composition all land back inside the
    /// class of valid stochastic objects (their constructors re-validate).
    #[test]
    fn kernel_algebra_is_closed((m1, _m2, rows, resp_rows) in sized_components()) {
        let n = m1.len();
        let space = labelled_space(n);
        let prep = PreparationMeasure::new(space.clone(), normalize(m1), "p").unwrap();
        let kernel = TransformationKernel::new(
            space.clone(),
            space.clone(),
            stochastic_rows(rows),
            "g",
        )
        .unwrap();
        let response = ResponseFunction::new(
            space.clone(),
            vec!["a".into(), "b".into(), "c".into()],
            stochastic_rows(resp_rows),
            "A",
        )
        .unwrap();

        let pulled = response_after_kernel(&response, &kernel).unwrap();
        prop_assert_eq!(pulled.space(), &space);
        prop_assert_eq!(pulled.outcomes(), response.outcomes());

        let pushed = pushforward_measure(&prep, &kernel).unwrap();
        prop_assert_eq!(pushed.space(), &space);

        let composed = kernel_product(&kernel, &kernel).unwrap();
        prop_assert_eq!(composed.source(), &space);
        prop_assert_eq!(composed.target(), &space);
    }

    /// Data processing: pushing two measures through the same kernel cannot
    /// increase their variational distance.
    #[test]
    fn pushforward_contracts_variational_distance(
        (m1, m2, rows, _resp) in sized_components()
    ) {
        let n = m1.len();
        let space = labelled_space(n);
        let p1 = PreparationMeasure::new(space.clone(), normalize(m1), "p").unwrap();
        let p2 = PreparationMeasure::new(space.clone(), normalize(m2), "q").unwrap();
        let kernel = TransformationKernel::new(
            space.clone(),
            space,
            stochastic_rows(rows),
            "g",
        )
        .unwrap();
        let before = variational_distance(&p1, &p2).unwrap();
        let after = variational_distance(
            &pushforward_measure(&p1, &kernel).unwrap(),
            &pushforward_measure(&p2, &kernel).unwrap(),
        )
        .unwrap();
        prop_assert!(after <= before + 1e-12, "VD grew: {before} -> {after}");
    }

    /// Pushing a point mass through a kernel reads off that kernel row.
    #[test]
    fn dirac_pushforward_is_the_kernel_row(
        (m1, _m2, rows, _resp) in sized_components(),
        seed in 0usize..64
    ) {
        let n = m1.len();
        let i = seed % n;
        let space = labelled_space(n);
        let kernel = TransformationKernel::new(
            space.clone(),
            space.clone(),
            stochastic_rows(rows),
            "g",
        )
        .unwrap();
        let dirac =
            PreparationMeasure::dirac(space.clone(), &format!("λ{i}"), "point").unwrap();
        let pushed = pushforward_measure(&dirac, &kernel).unwrap();
        for (j, &w) in pushed.weights().iter().enumerate() {
            prop_assert!((w - kernel.prob(i, j)).abs() <= 1e-15);
        }
    }

    /// Any response-row corruption at least ten times the tolerance is seen
    /// by the Born-reproduction checker under the point mass at that row.
    #[test]
    fn injected_faults_are_detected(
        delta in 1e-8f64..0.3,
        flip_row in prop::bool::ANY,
    ) {
        let tol = 1e-9;
        let reg = registry();
        let complete = builtin_beltrametti_bugajski(&reg, &["e1", "e2"], &["A"], &[]).unwrap();
        let model = complete.model(&[2]).unwrap();
        let (rows, label) = if flip_row {
            (vec![vec![1.0 - delta, delta], vec![0.0, 1.0]], "e1")
        } else {
            (vec![vec![1.0, 0.0], vec![delta, 1.0 - delta]], "e2")
        };
        let corrupted = ResponseFunction::new(
            model.space().clone(),
            vec!["a_1".into(), "a_2".into()],
            rows,
            "A",
        )
        .unwrap();
        let prep = model.preparation(label).unwrap();
        let defect = reproduce_defect(&reg, model, prep, &corrupted, None).unwrap();
        prop_assert!(
            defect > tol,
            "fault of size {delta} went unnoticed (defect {defect})"
        );
    }
}

/// Averaging through a kernel is a conditional expectation, so it can only
/// shrink variance. Exercised over a fixed batch of seeded random models so
/// the run is reproducible.
#[test]
fn variance_inequality_holds_on_random_models() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xB0B);
    for round in 0..200 {
        let n = rng.gen_range(2..=8usize);
        let m = rng.gen_range(2..=8usize);
        let source = labelled_space(n);
        let target = OnticSpace::new((0..m).map(|j| format!("τ{j}")).collect()).unwrap();
        let weights = normalize((0..n).map(|_| rng.gen_range(0.01..1.0)).collect());
        let prep = PreparationMeasure::new(source.clone(), weights, "p").unwrap();
        let rows = stochastic_rows(
            (0..n)
                .map(|_| (0..m).map(|_| rng.gen_range(0.01..1.0)).collect())
                .collect(),
        );
        let kernel = TransformationKernel::new(source, target, rows, "g").unwrap();
        let values: Vec<f64> = (0..m).map(|_| rng.gen::<f64>()).collect();
        let report = variance_inequality_check(&values, &kernel, &prep).unwrap();
        assert!(
            report.holds,
            "round {round}: Var(E[p|λ]) = {} exceeded Var(p) = {}",
            report.lhs, report.rhs
        );
    }
}
