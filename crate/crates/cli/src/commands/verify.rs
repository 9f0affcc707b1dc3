//! The cross-library verification suite.
//!
//! Desk-scale instances of every identity the libraries pin: sparse-state
//! arithmetic, Born reproduction on the reference models, the rotation
//! ladder with its closing bound, and the weight-equalisation identities.
//! Randomized trials draw from a seeded generator, so a fixed `--seed`
//! yields a byte-identical report.

use ontic_models::{
    is_psi_ontic, joint_outcome_label, model_is_trivial, parameter_independence_defect,
    reproduce_defect, triviality_defect, variance_inequality_check, OnticModel, OnticSpace,
    PreparationMeasure, ResponseFunction, TransformationKernel,
};
use quantum_core::{
    apply_unitary, maximally_entangled, projector_expectation, Complex64, FactorProjector,
    MultiIndex, ProductProjector, SparseState,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::args::{FaultKind, VerifyArgs};
use crate::error::Result;
use crate::fixtures;
use crate::report::{CheckRecord, Report};

/// Number of randomized trials per property check.
const TRIALS: usize = 64;

pub fn run(args: &VerifyArgs) -> Result<Report> {
    let mut rng = ChaCha8Rng::seed_from_u64(args.seed);
    let tol_exact = args.tol_exact;
    let tol_oracle = args.tol_oracle;
    let mut checks = Vec::new();

    checks.push(core_state_normalization(&mut rng, tol_exact)?);
    checks.push(core_projector_completeness(&mut rng, tol_exact)?);
    checks.push(core_unitary_isometry(&mut rng, tol_exact)?);
    checks.push(core_entangled_marginals(tol_exact)?);

    let registry = fixtures::registry();
    checks.push(model_fragment_reproduces_born(&registry, tol_exact)?);
    checks.push(model_fragment_classification(&registry, tol_oracle)?);
    checks.push(model_deterministic_reproduce(
        &registry,
        tol_exact,
        args.inject_fault,
    )?);
    checks.push(model_deterministic_triviality(&registry, tol_exact)?);
    checks.push(model_variance_jensen(&mut rng)?);
    checks.push(model_parameter_independence(tol_exact)?);
    checks.push(model_dilation_consistency(&registry, tol_oracle, tol_exact)?);

    checks.push(chain_cross_closed_form(tol_oracle)?);
    checks.push(chain_ladder_equiprobability(1, tol_oracle)?);
    checks.push(chain_ladder_equiprobability(3, tol_oracle)?);
    checks.push(chain_bound_simplification()?);

    let config = fixtures::reference_embezzle_config(2)?;
    checks.push(embezzle_oracle_residual(&mut rng, &config, tol_oracle)?);
    checks.push(embezzle_zero_closing(&config, tol_exact)?);
    checks.push(embezzle_perfect_correlation(&config, tol_exact)?);
    checks.push(embezzle_harmonic_identities()?);
    checks.push(embezzle_fidelity_monotone()?);
    checks.extend(embezzle_final_bound()?);

    Ok(Report::new("verify", Some(args.seed), checks))
}

/// All multi-indices of a small shape, in lexicographic order.
fn dense_indices(shape: &[u32]) -> Vec<MultiIndex> {
    let mut indices = vec![Vec::new()];
    for &dim in shape {
        let mut next = Vec::new();
        for prefix in &indices {
            for value in 1..=dim {
                let mut entry = prefix.clone();
                entry.push(value);
                next.push(entry);
            }
        }
        indices = next;
    }
    indices.into_iter().map(MultiIndex::new).collect()
}

fn random_state(rng: &mut ChaCha8Rng, shape: Vec<u32>) -> Result<SparseState> {
    let entries: Vec<(MultiIndex, Complex64)> = dense_indices(&shape)
        .into_iter()
        .map(|index| {
            let amp = Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0));
            (index, amp)
        })
        .collect();
    Ok(SparseState::normalized(shape, entries)?)
}

fn core_state_normalization(rng: &mut ChaCha8Rng, tol: f64) -> Result<CheckRecord> {
    let mut worst = 0.0f64;
    for _ in 0..TRIALS {
        let state = random_state(rng, vec![2, 3])?;
        worst = worst.max((state.norm_sqr() - 1.0).abs());
    }
    Ok(CheckRecord::at_most(
        "core_state_normalization",
        worst,
        0.0,
        tol,
    ))
}

fn core_projector_completeness(rng: &mut ChaCha8Rng, tol: f64) -> Result<CheckRecord> {
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let state = random_state(rng, vec![2, 2])?;
        let mut total = 0.0;
        for i in 1..=2u32 {
            for j in 1..=2u32 {
                let projector = ProductProjector::new(vec![
                    FactorProjector::Basis(i),
                    FactorProjector::Basis(j),
                ])?;
                total += projector_expectation(&state, &projector)?;
            }
        }
        worst = worst.max((total - 1.0).abs());
    }
    Ok(CheckRecord::at_most(
        "core_projector_completeness",
        worst,
        0.0,
        tol,
    ))
}

fn core_unitary_isometry(rng: &mut ChaCha8Rng, tol: f64) -> Result<CheckRecord> {
    let mut worst = 0.0f64;
    for _ in 0..8 {
        let state = random_state(rng, vec![2])?;
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let rotated = apply_unitary(&state, &fixtures::qubit_rotation(theta))?;
        worst = worst.max((rotated.norm_sqr() - 1.0).abs());
    }
    Ok(CheckRecord::at_most(
        "core_unitary_isometry",
        worst,
        0.0,
        tol,
    ))
}

fn core_entangled_marginals(tol: f64) -> Result<CheckRecord> {
    let d = 3u32;
    let psi = maximally_entangled(d)?;
    let expected = 1.0 / f64::from(d);
    let mut worst = 0.0f64;
    for k in 1..=d {
        let projector =
            ProductProjector::new(vec![FactorProjector::Basis(k), FactorProjector::Id])?;
        let prob = projector_expectation(&psi, &projector)?;
        worst = worst.max((prob - expected).abs());
    }
    Ok(CheckRecord::at_most(
        "core_entangled_marginals",
        worst,
        0.0,
        tol,
    ))
}

fn model_fragment_reproduces_born(
    registry: &ontic_models::QuantumRegistry,
    tol: f64,
) -> Result<CheckRecord> {
    let fragment = fixtures::quantum_fragment_model(registry)?;
    let model = fragment.model(&[2])?;
    let response = model.response("A")?;
    let mut worst = 0.0f64;
    for prep in model.preparations() {
        worst = worst.max(reproduce_defect(registry, model, prep, response, None)?);
        for kernel in model.kernels() {
            worst = worst.max(reproduce_defect(
                registry,
                model,
                prep,
                response,
                Some(kernel),
            )?);
        }
    }
    Ok(CheckRecord::at_most(
        "model_fragment_reproduces_born",
        worst,
        0.0,
        tol,
    ))
}

fn model_fragment_classification(
    registry: &ontic_models::QuantumRegistry,
    tol: f64,
) -> Result<CheckRecord> {
    let fragment = fixtures::quantum_fragment_model(registry)?;
    let model = fragment.model(&[2])?;
    let trivial = model_is_trivial(registry, model, tol)?;
    let psi_ontic = is_psi_ontic(registry, model, tol)?;
    Ok(CheckRecord::holds(
        "model_fragment_trivial_and_psi_ontic",
        trivial && psi_ontic,
    ))
}

fn model_deterministic_reproduce(
    registry: &ontic_models::QuantumRegistry,
    tol: f64,
    fault: Option<FaultKind>,
) -> Result<CheckRecord> {
    let model = fixtures::deterministic_half_model(registry)?;
    let prep = model.preparation("plus")?;
    let response = model.response("A")?;
    let defect = match fault {
        None => reproduce_defect(registry, &model, prep, response, None)?,
        Some(FaultKind::ResponseRow) => {
            // Shift a twentieth of the response mass between the two
            // outcomes of the first ontic state: the Born marginal moves by
            // the same amount, so the defect lands well above any tolerance.
            let mut rows = response.rows().to_vec();
            rows[0][0] = (rows[0][0] - 0.05).max(0.0);
            rows[0][1] = 1.0 - rows[0][0];
            let perturbed = ResponseFunction::new(
                model.space().clone(),
                response.outcomes().to_vec(),
                rows,
                response.represents(),
            )?;
            reproduce_defect(registry, &model, prep, &perturbed, None)?
        }
    };
    Ok(CheckRecord::at_most(
        "model_deterministic_reproduce",
        defect,
        0.0,
        tol,
    ))
}

fn model_deterministic_triviality(
    registry: &ontic_models::QuantumRegistry,
    tol: f64,
) -> Result<CheckRecord> {
    let model = fixtures::deterministic_half_model(registry)?;
    let defect = triviality_defect(
        registry,
        &model,
        model.preparation("plus")?,
        model.response("A")?,
    )?;
    // Weights (1/2, 1/2) give a triviality defect of exactly 2·c₁²·(1−c₁²).
    Ok(CheckRecord::at_most(
        "model_deterministic_triviality",
        (defect - 0.5).abs(),
        0.0,
        tol,
    ))
}

fn random_distribution(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..len).map(|_| rng.gen_range(0.05..1.0)).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|value| value / total).collect()
}

fn labelled_space(prefix: &str, len: usize) -> Result<OnticSpace> {
    Ok(OnticSpace::new(
        (0..len).map(|i| format!("{prefix}{i}")).collect(),
    )?)
}

fn model_variance_jensen(rng: &mut ChaCha8Rng) -> Result<CheckRecord> {
    let mut failures = 0u32;
    for _ in 0..TRIALS {
        let n_source = rng.gen_range(2..=8);
        let n_target = rng.gen_range(2..=8);
        let source = labelled_space("s", n_source)?;
        let target = labelled_space("t", n_target)?;
        let rows: Vec<Vec<f64>> = (0..n_source)
            .map(|_| random_distribution(rng, n_target))
            .collect();
        let kernel = TransformationKernel::new(source.clone(), target, rows, "random kernel")?;
        let preparation =
            PreparationMeasure::new(source, random_distribution(rng, n_source), "random prep")?;
        let values: Vec<f64> = (0..n_target).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let report = variance_inequality_check(&values, &kernel, &preparation)?;
        if !report.holds {
            failures += 1;
        }
    }
    Ok(CheckRecord::at_most(
        "model_variance_jensen",
        f64::from(failures),
        0.0,
        0.0,
    ))
}

/// Hand-built two-site product model: local responses read off the two
/// coordinates, the joint response is their product, so the joint margins
/// must equal the locals exactly.
fn model_parameter_independence(tol: f64) -> Result<CheckRecord> {
    let labels: Vec<String> = ["x1y1", "x1y2", "x2y1", "x2y2"]
        .iter()
        .map(|s| s.to_string())
        .collect();
    let space = OnticSpace::new(labels)?;
    let a_outcomes = vec!["a_1".to_string(), "a_2".to_string()];
    let b_outcomes = vec!["b_1".to_string(), "b_2".to_string()];
    // λ = (x_i, y_j): A reports i, B reports j.
    let a_rows = vec![
        vec![1.0, 0.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![0.0, 1.0],
    ];
    let b_rows = vec![
        vec![1.0, 0.0],
        vec![0.0, 1.0],
        vec![1.0, 0.0],
        vec![0.0, 1.0],
    ];
    let local_a = ResponseFunction::new(space.clone(), a_outcomes.clone(), a_rows.clone(), "A")?;
    let local_b = ResponseFunction::new(space.clone(), b_outcomes.clone(), b_rows.clone(), "B")?;
    let mut joint_outcomes = Vec::new();
    for a in &a_outcomes {
        for b in &b_outcomes {
            joint_outcomes.push(joint_outcome_label(a, b));
        }
    }
    let joint_rows: Vec<Vec<f64>> = (0..space.len())
        .map(|lam| {
            let mut row = Vec::new();
            for a in 0..2 {
                for b in 0..2 {
                    row.push(a_rows[lam][a] * b_rows[lam][b]);
                }
            }
            row
        })
        .collect();
    let joint = ResponseFunction::new(space.clone(), joint_outcomes, joint_rows, "A×B")?;
    let model = OnticModel::new(
        vec![2, 2],
        space.clone(),
        vec![PreparationMeasure::new(
            space,
            vec![0.25; 4],
            "uniform product",
        )?],
        vec![local_a.clone(), local_b.clone(), joint.clone()],
        Vec::new(),
    )?;
    let defect = parameter_independence_defect(&model, &local_a, &local_b, &joint)?;
    Ok(CheckRecord::at_most(
        "model_parameter_independence",
        defect,
        0.0,
        tol,
    ))
}

fn model_dilation_consistency(
    registry: &ontic_models::QuantumRegistry,
    tol_oracle: f64,
    tol_exact: f64,
) -> Result<CheckRecord> {
    let fragment = fixtures::dilation_fragment_model(registry)?;
    let model = fragment.model(&[2])?;
    let joint = fragment.model(&[2, 2])?;
    let report = ontic_models::dilation_consistency_check(
        registry,
        model.preparation("plus")?,
        fragment.appender(&[2], "e1")?,
        joint.kernel("cnot")?,
        model.response("A")?,
        joint.response("A⊗1")?,
        tol_oracle,
    )?;
    let worst = report.defect.max((report.target_fidelity - 1.0).abs());
    Ok(CheckRecord::at_most(
        "model_dilation_consistency",
        worst,
        0.0,
        tol_exact,
    ))
}

fn chain_cross_closed_form(tol: f64) -> Result<CheckRecord> {
    let angles = [
        0.0,
        std::f64::consts::FRAC_PI_8,
        std::f64::consts::FRAC_PI_6,
        std::f64::consts::FRAC_PI_3,
    ];
    let mut worst = 0.0f64;
    for (d, planes) in [(2u32, vec![(1u32, 2u32)]), (3, vec![(1, 2), (1, 3)])] {
        for (i, j) in planes {
            for &theta in &angles {
                for &phi in &angles {
                    let closed = chained_bell::cross_expectation(d, i, j, theta, phi)?;
                    let oracle =
                        chained_bell::cross_expectation_oracle(d, i, j, i, j, theta, phi)?;
                    worst = worst.max((closed - oracle).abs());
                }
            }
        }
    }
    Ok(CheckRecord::at_most(
        "chain_cross_closed_form",
        worst,
        0.0,
        tol,
    ))
}

fn chain_ladder_equiprobability(half_length: usize, tol: f64) -> Result<CheckRecord> {
    let model = chained_bell::born_exact_ladder_model(2, 1, 2, half_length)?;
    let report = chained_bell::verify_equiprobability(&model, 2, half_length, 1, 2)?;
    let mut record = CheckRecord::at_most(
        format!("chain_ladder_equiprobability_n{half_length}"),
        report.lhs,
        report.bound,
        tol,
    );
    record.pass = record.pass && report.holds && report.failing_rung.is_none();
    Ok(record)
}

fn chain_bound_simplification() -> Result<CheckRecord> {
    let mut worst = f64::NEG_INFINITY;
    for half_length in [1usize, 5, 25] {
        let bound = chained_bell::chained_bound(2, half_length)?;
        worst = worst.max(bound.presimplified - bound.simplified);
    }
    Ok(CheckRecord::at_most(
        "chain_bound_simplification",
        worst,
        0.0,
        0.0,
    ))
}

fn embezzle_oracle_residual(
    rng: &mut ChaCha8Rng,
    config: &embezzlement::EmbezzleConfig,
    tol: f64,
) -> Result<CheckRecord> {
    let psi_f = embezzlement::build_psi_f(config)?;
    let pairs = [
        embezzlement::RotationPair::new(config, 1, 1, 2, 1)?,
        embezzlement::RotationPair::new(config, 1, 1, 2, 2)?,
    ];
    let mut worst = 0.0f64;
    for _ in 0..6 {
        let theta = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        let phi = rng.gen_range(0.0..std::f64::consts::FRAC_PI_2);
        for pair in &pairs {
            let (_, diff) =
                embezzlement::closed_form_oracle_check_on(config, &psi_f, pair, theta, phi)?;
            worst = worst.max(diff);
        }
    }
    Ok(CheckRecord::at_most(
        "embezzle_oracle_residual",
        worst,
        0.0,
        tol,
    ))
}

fn embezzle_zero_closing(
    config: &embezzlement::EmbezzleConfig,
    tol: f64,
) -> Result<CheckRecord> {
    let pair = embezzlement::RotationPair::new(config, 1, 1, 2, 1)?;
    let report = embezzlement::zero_term_check(config, &pair)?;
    let worst = report
        .correlation_sum
        .abs()
        .max(report.direct_gap)
        .max(report.mirrored_gap);
    Ok(CheckRecord::at_most(
        "embezzle_zero_closing",
        worst,
        0.0,
        tol,
    ))
}

fn embezzle_perfect_correlation(
    config: &embezzlement::EmbezzleConfig,
    tol: f64,
) -> Result<CheckRecord> {
    let report = embezzlement::perfect_correlation_check(config)?;
    let worst = report
        .max_off_diagonal
        .max((report.diagonal_total - 1.0).abs());
    Ok(CheckRecord::at_most(
        "embezzle_perfect_correlation",
        worst,
        0.0,
        tol,
    ))
}

fn embezzle_harmonic_identities() -> Result<CheckRecord> {
    let config = fixtures::reference_embezzle_config(8)?;
    let report = embezzlement::harmonic_estimates(&config, 1, 2)?;
    let relative = |sum: f64, identity: f64| (sum - identity).abs() / identity.abs().max(1.0);
    let shortfall = |sum: f64, bound: f64| (bound - sum).max(0.0);
    let worst = relative(report.direct_sum_from, report.direct_identity_from)
        .max(relative(report.direct_sum_to, report.direct_identity_to))
        .max(shortfall(report.cross_sum_from, report.cross_bound_from))
        .max(shortfall(report.cross_sum_to, report.cross_bound_to));
    Ok(CheckRecord::at_most(
        "embezzle_harmonic_identities",
        worst,
        0.0,
        1e-10,
    ))
}

fn embezzle_fidelity_monotone() -> Result<CheckRecord> {
    let mut previous: Option<f64> = None;
    let mut min_step = f64::INFINITY;
    for big_n in [2u64, 4, 8] {
        let config = fixtures::reference_embezzle_config(big_n)?;
        let fidelity = embezzlement::embezzlement_fidelity(&config)?;
        if let Some(last) = previous {
            min_step = min_step.min(fidelity - last);
        }
        previous = Some(fidelity);
    }
    Ok(CheckRecord::at_least(
        "embezzle_fidelity_monotone_min_step",
        min_step,
        1e-6,
        0.0,
    ))
}

fn embezzle_final_bound() -> Result<Vec<CheckRecord>> {
    let c = [(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()];
    let budget = 1.0;
    let report = embezzlement::final_bound(&c, budget)?;
    let worst_term = report.term_chain.max(report.term_eps).max(report.term_log);
    Ok(vec![
        CheckRecord::at_most("embezzle_final_bound_terms", worst_term, budget / 3.0, 0.0),
        CheckRecord::at_most("embezzle_final_bound_total", report.total, budget, 0.0),
    ])
}
