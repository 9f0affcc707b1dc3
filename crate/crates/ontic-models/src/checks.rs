//! Defect checkers: each quantifies how far a model component is from one of
//! the framework's conditions, as an exact finite sum. A defect of zero
//! (within tolerance) means the condition holds; "almost surely" statements
//! become measure-weighted L1 defects.

use std::collections::BTreeSet;

use quantum_core::numeric::CompensatedSum;
use quantum_core::{fidelity, policy, tensor_product, Complex64, MultiIndex, SparseState};

use crate::error::{OnticError, Result};
use crate::kernel_algebra::{kernel_product, pushforward_measure, response_after_kernel};
use crate::types::{
    CompleteOnticModel, OnticModel, PreparationMeasure, QuantumRegistry, ResponseFunction,
    TransformationKernel,
};

/// Born probabilities for a response's tag pair, aligned with the response's
/// outcome order. When `after` names a unitary, the state is evolved first.
pub fn born_for_response(
    registry: &QuantumRegistry,
    state_tag: &str,
    response: &ResponseFunction,
    after: Option<&str>,
) -> Result<Vec<f64>> {
    let born = match after {
        Some(unitary_tag) => registry.born_after(state_tag, unitary_tag, response.represents())?,
        None => registry.born(state_tag, response.represents())?,
    };
    let declared: BTreeSet<&str> = response.outcomes().iter().map(String::as_str).collect();
    let provided: BTreeSet<&str> = born.iter().map(|(label, _)| label.as_str()).collect();
    if declared != provided {
        return Err(OnticError::OutcomeMismatch {
            detail: format!(
                "response `{}` declares outcomes {declared:?} but the observable resolves to \
                 branches {provided:?}",
                response.represents()
            ),
        });
    }
    Ok(response
        .outcomes()
        .iter()
        .map(|outcome| {
            born.iter()
                .find(|(label, _)| label == outcome)
                .map(|(_, p)| *p)
                .expect("outcome sets were checked equal")
        })
        .collect())
}

fn ensure_same_space(what: &str, space_a: &crate::types::OnticSpace, space_b: &crate::types::OnticSpace) -> Result<()> {
    if space_a != space_b {
        return Err(OnticError::SpaceMismatch {
            what: what.to_string(),
        });
    }
    Ok(())
}

/// How far the model is from reproducing the Born rule for one
/// (preparation, response) pair, with an optional transformation in between:
/// max over outcomes of |Σ_λ p(a|λ) μ'(λ) − Born(a)|, where μ' is the
/// preparation pushed through the kernel (if any) and the Born side uses the
/// correspondingly evolved quantum state.
pub fn reproduce_defect(
    registry: &QuantumRegistry,
    model: &OnticModel,
    preparation: &PreparationMeasure,
    response: &ResponseFunction,
    kernel: Option<&TransformationKernel>,
) -> Result<f64> {
    ensure_same_space("preparation", preparation.space(), model.space())?;
    ensure_same_space("response", response.space(), model.space())?;
    let weights: Vec<f64> = match kernel {
        None => preparation.weights().to_vec(),
        Some(k) => {
            ensure_same_space("kernel source", k.source(), model.space())?;
            ensure_same_space("kernel target", k.target(), model.space())?;
            pushforward_measure(preparation, k)?.weights().to_vec()
        }
    };
    let born = born_for_response(
        registry,
        preparation.represents(),
        response,
        kernel.map(|k| k.represents()),
    )?;
    let mut defect: f64 = 0.0;
    for (a, &born_p) in born.iter().enumerate() {
        let mut model_p = CompensatedSum::new();
        for (i, &mu) in weights.iter().enumerate() {
            if mu != 0.0 {
                model_p.add(mu * response.prob(i, a));
            }
        }
        defect = defect.max((model_p.value() - born_p).abs());
    }
    Ok(defect)
}

/// How far the response is from being outcome-deterministic at the Born
/// values under this preparation: max over outcomes of
/// Σ_λ |p(a|λ) − Born(a)| μ(λ). Zero means the λ-probabilities almost surely
/// coincide with the quantum probabilities.
pub fn triviality_defect(
    registry: &QuantumRegistry,
    model: &OnticModel,
    preparation: &PreparationMeasure,
    response: &ResponseFunction,
) -> Result<f64> {
    ensure_same_space("preparation", preparation.space(), model.space())?;
    ensure_same_space("response", response.space(), model.space())?;
    let born = born_for_response(registry, preparation.represents(), response, None)?;
    let mut defect: f64 = 0.0;
    for (a, &born_p) in born.iter().enumerate() {
        let mut acc = CompensatedSum::new();
        for (i, &mu) in preparation.weights().iter().enumerate() {
            if mu != 0.0 {
                acc.add(mu * (response.prob(i, a) - born_p).abs());
            }
        }
        defect = defect.max(acc.value());
    }
    Ok(defect)
}

/// Whether every supplied (preparation, response) pair has triviality defect
/// at most `tol`.
pub fn is_trivial(
    registry: &QuantumRegistry,
    model: &OnticModel,
    preparations: &[PreparationMeasure],
    responses: &[ResponseFunction],
    tol: f64,
) -> Result<bool> {
    for prep in preparations {
        for resp in responses {
            if triviality_defect(registry, model, prep, resp)? > tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// [`is_trivial`] over all of the model's own preparations and responses.
pub fn model_is_trivial(
    registry: &QuantumRegistry,
    model: &OnticModel,
    tol: f64,
) -> Result<bool> {
    is_trivial(
        registry,
        model,
        model.preparations(),
        model.responses(),
        tol,
    )
}

/// Variational distance between two measures on the same space, computed as
/// half the L1 distance (equal to the supremum over subsets on finite
/// spaces; see [`variational_distance_sup`] for the brute-force form).
pub fn variational_distance(
    m1: &PreparationMeasure,
    m2: &PreparationMeasure,
) -> Result<f64> {
    ensure_same_space("measures being compared", m1.space(), m2.space())?;
    let mut acc = CompensatedSum::new();
    for (a, b) in m1.weights().iter().zip(m2.weights()) {
        acc.add((a - b).abs());
    }
    Ok(0.5 * acc.value())
}

/// Brute-force supremum form of the variational distance:
/// max over subsets S of |μ₁(S) − μ₂(S)|. Exponential in the space size;
/// kept as an independent reference for small spaces.
pub fn variational_distance_sup(
    m1: &PreparationMeasure,
    m2: &PreparationMeasure,
) -> Result<f64> {
    ensure_same_space("measures being compared", m1.space(), m2.space())?;
    let n = m1.space().len();
    if n > 20 {
        return Err(OnticError::InvalidArgument {
            detail: format!("subset enumeration over {n} labels is not supported (max 20)"),
        });
    }
    let mut best: f64 = 0.0;
    for mask in 0u32..(1u32 << n) {
        let mut acc = CompensatedSum::new();
        for i in 0..n {
            if mask & (1 << i) != 0 {
                acc.add(m1.weight(i) - m2.weight(i));
            }
        }
        best = best.max(acc.value().abs());
    }
    Ok(best)
}

/// Whether every pair of the model's preparations whose tags resolve to
/// projectively distinct pure states sits at variational distance ≥ 1 − tol.
/// Pairs whose tags do not both resolve to pure states are skipped, as are
/// pairs representing the same ray.
pub fn is_psi_ontic(
    registry: &QuantumRegistry,
    model: &OnticModel,
    tol: f64,
) -> Result<bool> {
    let preps = model.preparations();
    let tol_exact = policy::current().tol_exact;
    for (i, p1) in preps.iter().enumerate() {
        let Ok(s1) = registry.state(p1.represents()) else {
            continue;
        };
        for p2 in preps.iter().skip(i + 1) {
            let Ok(s2) = registry.state(p2.represents()) else {
                continue;
            };
            if s1.shape() != s2.shape() {
                continue;
            }
            if fidelity(s1, s2)? >= 1.0 - tol_exact {
                continue; // same ray, possibly under a different tag
            }
            if variational_distance(p1, p2)? < 1.0 - tol {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Outcome label used for joint responses: local outcomes `a` and `b` pair
/// up as `"a,b"`.
pub fn joint_outcome_label(a: &str, b: &str) -> String {
    format!("{a},{b}")
}

/// How far a joint response is from having the declared local responses as
/// its margins: max over ontic states and local outcomes of the gap between
/// the local λ-probability and the summed-out joint λ-probability, taken
/// over both sides.
pub fn parameter_independence_defect(
    joint_model: &OnticModel,
    local_a: &ResponseFunction,
    local_b: &ResponseFunction,
    joint_response: &ResponseFunction,
) -> Result<f64> {
    ensure_same_space("local response A", local_a.space(), joint_model.space())?;
    ensure_same_space("local response B", local_b.space(), joint_model.space())?;
    ensure_same_space("joint response", joint_response.space(), joint_model.space())?;
    let na = local_a.outcomes().len();
    let nb = local_b.outcomes().len();
    if joint_response.outcomes().len() != na * nb {
        return Err(OnticError::OutcomeMismatch {
            detail: format!(
                "joint response `{}` has {} outcomes; expected {} × {} pairs",
                joint_response.represents(),
                joint_response.outcomes().len(),
                na,
                nb
            ),
        });
    }
    // pair_index[a][b] = column of the joint outcome "a,b"
    let mut pair_index = vec![vec![0usize; nb]; na];
    for (ai, a) in local_a.outcomes().iter().enumerate() {
        for (bi, b) in local_b.outcomes().iter().enumerate() {
            let label = joint_outcome_label(a, b);
            pair_index[ai][bi] =
                joint_response
                    .outcome_index(&label)
                    .ok_or_else(|| OnticError::OutcomeMismatch {
                        detail: format!(
                            "joint response `{}` is missing the outcome `{label}`",
                            joint_response.represents()
                        ),
                    })?;
        }
    }
    let mut defect: f64 = 0.0;
    for lambda in 0..joint_model.space().len() {
        for (ai, row) in pair_index.iter().enumerate() {
            let mut margin = CompensatedSum::new();
            for &column in row {
                margin.add(joint_response.prob(lambda, column));
            }
            defect = defect.max((local_a.prob(lambda, ai) - margin.value()).abs());
        }
        for bi in 0..nb {
            let mut margin = CompensatedSum::new();
            for row in &pair_index {
                margin.add(joint_response.prob(lambda, row[bi]));
            }
            defect = defect.max((local_b.prob(lambda, bi) - margin.value()).abs());
        }
    }
    Ok(defect)
}

/// How far the single-system λ-probabilities are from arising as averages of
/// the joint λ-probabilities under the appender for ancilla preparation
/// `p2_tag`: max over ontic states and outcomes of
/// |p_A(a|λ) − Σ_λ̃ p_{A⊗1}(a|λ̃) γ(λ̃|λ)|, quantified over every response
/// representative tagged `a_tag` in the single model and `a_tag⊗1` in the
/// joint model.
pub fn ancilla_independence_defect(
    registry: &QuantumRegistry,
    complete: &CompleteOnticModel,
    shape1: &[u32],
    a_tag: &str,
    p2_tag: &str,
) -> Result<f64> {
    let model1 = complete.model(shape1)?;
    let appender = complete.appender(shape1, p2_tag)?;
    let shape2 = registry.state_shape(p2_tag)?;
    let joint_shape: Vec<u32> = shape1.iter().chain(shape2.iter()).copied().collect();
    let joint = complete.model(&joint_shape)?;
    ensure_same_space("appender source", appender.source(), model1.space())?;
    ensure_same_space("appender target", appender.target(), joint.space())?;

    let locals = model1.responses_for(a_tag);
    if locals.is_empty() {
        return Err(OnticError::MissingComponent {
            detail: format!("single-system model has no response tagged `{a_tag}`"),
        });
    }
    let lifted_tag = format!("{a_tag}⊗1");
    let lifted = joint.responses_for(&lifted_tag);
    if lifted.is_empty() {
        return Err(OnticError::MissingComponent {
            detail: format!("joint model has no response tagged `{lifted_tag}`"),
        });
    }

    let mut defect: f64 = 0.0;
    for local in &locals {
        for joint_resp in &lifted {
            let averaged = response_after_kernel(joint_resp, appender)?;
            let declared: BTreeSet<&str> =
                local.outcomes().iter().map(String::as_str).collect();
            let lifted_outcomes: BTreeSet<&str> =
                joint_resp.outcomes().iter().map(String::as_str).collect();
            if declared != lifted_outcomes {
                return Err(OnticError::OutcomeMismatch {
                    detail: format!(
                        "responses tagged `{a_tag}` and `{lifted_tag}` declare different \
                         outcome sets"
                    ),
                });
            }
            for (a, outcome) in local.outcomes().iter().enumerate() {
                let a_in_avg = averaged
                    .outcome_index(outcome)
                    .expect("outcome sets were checked equal");
                for lambda in 0..model1.space().len() {
                    defect =
                        defect.max((local.prob(lambda, a) - averaged.prob(lambda, a_in_avg)).abs());
                }
            }
        }
    }
    Ok(defect)
}

/// Result of a unitary-invariance check for one
/// (preparation, kernel, response, outcome) tuple.
#[derive(Clone, Copy, Debug)]
pub struct UnitaryInvarianceReport {
    /// Whether the quantum premise Tr(ρ[a]) = Tr(UρU*[a]) holds within tol.
    pub premise_holds: bool,
    /// Measure-weighted L1 gap between the response and its composition with
    /// the kernel: Σ_λ |p(a|λ) − Σ_λ̃ p(a|λ̃) γ(λ̃|λ)| μ(λ).
    pub invariance_defect: f64,
    /// The tuple satisfies unitary invariance: premise fails, or defect ≤ tol.
    pub holds: bool,
}

/// Check unitary invariance for one outcome: when the unitary leaves the
/// outcome's Born probability unchanged, the response must almost surely
/// agree with its own pullback through the kernel.
pub fn unitary_invariance_check(
    registry: &QuantumRegistry,
    model: &OnticModel,
    preparation: &PreparationMeasure,
    kernel: &TransformationKernel,
    response: &ResponseFunction,
    outcome: &str,
    tol: f64,
) -> Result<UnitaryInvarianceReport> {
    ensure_same_space("preparation", preparation.space(), model.space())?;
    ensure_same_space("response", response.space(), model.space())?;
    ensure_same_space("kernel source", kernel.source(), model.space())?;
    ensure_same_space("kernel target", kernel.target(), model.space())?;
    let a = response
        .outcome_index(outcome)
        .ok_or_else(|| OnticError::OutcomeMismatch {
            detail: format!(
                "response `{}` has no outcome `{outcome}`",
                response.represents()
            ),
        })?;
    let born_before = born_for_response(registry, preparation.represents(), response, None)?;
    let born_after = born_for_response(
        registry,
        preparation.represents(),
        response,
        Some(kernel.represents()),
    )?;
    let premise_holds = (born_before[a] - born_after[a]).abs() <= tol;

    let composed = response_after_kernel(response, kernel)?;
    let a_composed = composed
        .outcome_index(outcome)
        .expect("composition preserves outcome labels");
    let mut acc = CompensatedSum::new();
    for (lambda, &mu) in preparation.weights().iter().enumerate() {
        if mu != 0.0 {
            acc.add(mu * (response.prob(lambda, a) - composed.prob(lambda, a_composed)).abs());
        }
    }
    let invariance_defect = acc.value();
    Ok(UnitaryInvarianceReport {
        premise_holds,
        invariance_defect,
        holds: !premise_holds || invariance_defect <= tol,
    })
}

/// Result of a variance comparison between a function pulled back through a
/// kernel and the function itself under the pushforward measure.
#[derive(Clone, Copy, Debug)]
pub struct VarianceReport {
    /// Var_μ(q) with q(λ) = Σ_λ̃ p(λ̃) γ(λ̃|λ).
    pub lhs: f64,
    /// Var_{γ*μ}(p).
    pub rhs: f64,
    /// lhs ≤ rhs + 1e-12 (averaging can only shrink variance).
    pub holds: bool,
}

/// Values of one response column (the function λ ↦ p(a|λ)) for a fixed
/// outcome, for feeding into [`variance_inequality_check`].
pub fn response_slice(response: &ResponseFunction, outcome: &str) -> Result<Vec<f64>> {
    let a = response
        .outcome_index(outcome)
        .ok_or_else(|| OnticError::OutcomeMismatch {
            detail: format!(
                "response `{}` has no outcome `{outcome}`",
                response.represents()
            ),
        })?;
    Ok((0..response.space().len())
        .map(|lambda| response.prob(lambda, a))
        .collect())
}

/// Compare the variance of the kernel-averaged function under μ with the
/// variance of the bare function under the pushforward γ*μ. Averaging is a
/// conditional expectation, so lhs ≤ rhs always; the report records both
/// sides so the inequality can be asserted from outside.
pub fn variance_inequality_check(
    values: &[f64],
    kernel: &TransformationKernel,
    preparation: &PreparationMeasure,
) -> Result<VarianceReport> {
    if values.len() != kernel.target().len() {
        return Err(OnticError::LengthMismatch {
            what: "function values over the kernel target".into(),
            expected: kernel.target().len(),
            got: values.len(),
        });
    }
    ensure_same_space("preparation", preparation.space(), kernel.source())?;
    for &v in values {
        if !v.is_finite() {
            return Err(OnticError::InvalidArgument {
                detail: "function values must be finite".into(),
            });
        }
    }
    let averaged: Vec<f64> = kernel
        .rows()
        .iter()
        .map(|row| {
            let mut acc = CompensatedSum::new();
            for (to, &gamma) in row.iter().enumerate() {
                if gamma != 0.0 {
                    acc.add(gamma * values[to]);
                }
            }
            acc.value()
        })
        .collect();
    let variance = |weights: &[f64], vals: &[f64]| -> f64 {
        let mut mean = CompensatedSum::new();
        let mut second = CompensatedSum::new();
        for (&w, &v) in weights.iter().zip(vals) {
            if w != 0.0 {
                mean.add(w * v);
                second.add(w * v * v);
            }
        }
        let m = mean.value();
        second.value() - m * m
    };
    let lhs = variance(preparation.weights(), &averaged);
    let pushed = pushforward_measure(preparation, kernel)?;
    let rhs = variance(pushed.weights(), values);
    Ok(VarianceReport {
        lhs,
        rhs,
        holds: lhs <= rhs + 1e-12,
    })
}

/// Per-outcome lines of the dilation-consistency derivation. Each line is a
/// measure-weighted L1 quantity; writing p for the single-system response,
/// p_J for the lifted joint response, γ_φ for the appender, and γ_U for the
/// joint kernel:
///
/// * `direct_gap`: Σ_λ μ(λ) |p(a|λ) − (p_J ∘ γ_U γ_φ)(a|λ)| — the quantity
///   the check is about.
/// * `appended_gap`: same, with p replaced by p_J ∘ γ_φ. Equals `direct_gap`
///   exactly when ancilla independence holds.
/// * `split_bound`: the appender pulled outside the absolute value;
///   dominates `appended_gap` by convexity.
/// * `pushforward_gap`: the same sum reorganized over the pushforward
///   measure γ_φ*μ; equals `split_bound` identically and vanishes exactly
///   when the joint model is invariant under the kernel on the support of
///   the appended preparation.
#[derive(Clone, Debug)]
pub struct DilationChain {
    pub outcome: String,
    pub direct_gap: f64,
    pub appended_gap: f64,
    pub split_bound: f64,
    pub pushforward_gap: f64,
}

/// Result of [`dilation_consistency_check`].
#[derive(Clone, Debug)]
pub struct DilationReport {
    /// Fidelity between U(ψ₁ ⊗ φ) and the entangled target state.
    pub target_fidelity: f64,
    pub chains: Vec<DilationChain>,
    /// Max of `direct_gap` over outcomes.
    pub defect: f64,
}

/// The derivation lines for every outcome, without the quantum
/// precondition. Exposed separately so degenerate kernels (e.g. identity)
/// can be analyzed; [`dilation_consistency_check`] is the gated form.
pub fn dilation_chain_lines(
    preparation: &PreparationMeasure,
    appender: &TransformationKernel,
    joint_kernel: &TransformationKernel,
    response: &ResponseFunction,
    joint_response: &ResponseFunction,
) -> Result<Vec<DilationChain>> {
    ensure_same_space("preparation", preparation.space(), appender.source())?;
    ensure_same_space("response", response.space(), appender.source())?;
    ensure_same_space("joint response", joint_response.space(), appender.target())?;
    ensure_same_space("joint kernel source", joint_kernel.source(), appender.target())?;
    ensure_same_space("joint kernel target", joint_kernel.target(), appender.target())?;
    let declared: BTreeSet<&str> = response.outcomes().iter().map(String::as_str).collect();
    let joint_outcomes: BTreeSet<&str> =
        joint_response.outcomes().iter().map(String::as_str).collect();
    if declared != joint_outcomes {
        return Err(OnticError::OutcomeMismatch {
            detail: format!(
                "responses `{}` and `{}` declare different outcome sets",
                response.represents(),
                joint_response.represents()
            ),
        });
    }

    let transported_joint = response_after_kernel(joint_response, joint_kernel)?;
    let composed = kernel_product(joint_kernel, appender)?;
    let full_transport = response_after_kernel(joint_response, &composed)?;
    let appended = response_after_kernel(joint_response, appender)?;
    let pushed = pushforward_measure(preparation, appender)?;

    let numeric_tol = 1e-9;
    let mut chains = Vec::with_capacity(response.outcomes().len());
    for outcome in response.outcomes() {
        let a = response.outcome_index(outcome).expect("own outcome");
        let a_joint = joint_response
            .outcome_index(outcome)
            .expect("outcome sets were checked equal");

        let mut direct = CompensatedSum::new();
        let mut appended_line = CompensatedSum::new();
        let mut split = CompensatedSum::new();
        for (lambda, &mu) in preparation.weights().iter().enumerate() {
            if mu == 0.0 {
                continue;
            }
            direct.add(mu * (response.prob(lambda, a) - full_transport.prob(lambda, a)).abs());
            appended_line
                .add(mu * (appended.prob(lambda, a) - full_transport.prob(lambda, a)).abs());
            for (mid, &gamma) in appender.rows()[lambda].iter().enumerate() {
                if gamma != 0.0 {
                    split.add(
                        mu * gamma
                            * (joint_response.prob(mid, a_joint)
                                - transported_joint.prob(mid, a_joint))
                            .abs(),
                    );
                }
            }
        }
        let mut push_line = CompensatedSum::new();
        for (mid, &nu) in pushed.weights().iter().enumerate() {
            if nu != 0.0 {
                push_line.add(
                    nu * (joint_response.prob(mid, a_joint)
                        - transported_joint.prob(mid, a_joint))
                    .abs(),
                );
            }
        }

        let chain = DilationChain {
            outcome: outcome.clone(),
            direct_gap: direct.value(),
            appended_gap: appended_line.value(),
            split_bound: split.value(),
            pushforward_gap: push_line.value(),
        };
        // These two relations are theorems about finite sums; a violation
        // beyond floating-point noise means the implementation is broken.
        if chain.appended_gap > chain.split_bound + numeric_tol {
            return Err(OnticError::Internal {
                detail: format!(
                    "convexity step violated for outcome `{outcome}`: {} > {}",
                    chain.appended_gap, chain.split_bound
                ),
            });
        }
        if (chain.split_bound - chain.pushforward_gap).abs() > numeric_tol {
            return Err(OnticError::Internal {
                detail: format!(
                    "pushforward reorganization mismatch for outcome `{outcome}`: {} vs {}",
                    chain.split_bound, chain.pushforward_gap
                ),
            });
        }
        chains.push(chain);
    }
    Ok(chains)
}

/// Check that measuring directly agrees (almost surely) with the dilated
/// procedure: append an ancilla prepared as `appender.represents()`, apply
/// the joint kernel, and measure the lifted response. The quantum
/// precondition — the kernel's unitary must map ψ₁ ⊗ φ to the entangled
/// state Σ_i c_i e_i ⊗ e_i built from ψ₁'s amplitudes — is enforced first.
pub fn dilation_consistency_check(
    registry: &QuantumRegistry,
    preparation: &PreparationMeasure,
    appender: &TransformationKernel,
    joint_kernel: &TransformationKernel,
    response: &ResponseFunction,
    joint_response: &ResponseFunction,
    tol: f64,
) -> Result<DilationReport> {
    let psi1 = registry
        .state(preparation.represents())
        .map_err(|_| OnticError::PreconditionFailed {
            detail: format!(
                "preparation tag `{}` must resolve to a pure state",
                preparation.represents()
            ),
        })?;
    let phi = registry.state(appender.represents())?;
    let unitary = registry.unitary(joint_kernel.represents())?;
    if psi1.shape().len() != 1 || phi.shape() != psi1.shape() {
        return Err(OnticError::PreconditionFailed {
            detail: format!(
                "dilation requires two single-factor systems of equal dimension; got {:?} and {:?}",
                psi1.shape(),
                phi.shape()
            ),
        });
    }
    let d = psi1.shape()[0];
    let joint_shape = vec![d, d];
    let target_amps: Vec<(MultiIndex, Complex64)> = psi1
        .amplitudes()
        .map(|(index, amp)| {
            let i = index.factors()[0];
            (MultiIndex::new(vec![i, i]), *amp)
        })
        .collect();
    let target = SparseState::new(joint_shape, target_amps)?;
    let evolved = unitary.apply(&tensor_product(psi1, phi)?)?;
    let target_fidelity = fidelity(&evolved, &target)?;
    if target_fidelity < 1.0 - tol {
        return Err(OnticError::PreconditionFailed {
            detail: format!(
                "unitary `{}` maps ψ₁ ⊗ φ to the entangled target with fidelity {target_fidelity}, \
                 below 1 − {tol}",
                joint_kernel.represents()
            ),
        });
    }
    let chains = dilation_chain_lines(
        preparation,
        appender,
        joint_kernel,
        response,
        joint_response,
    )?;
    let defect = chains
        .iter()
        .map(|c| c.direct_gap)
        .fold(0.0f64, f64::max);
    Ok(DilationReport {
        target_fidelity,
        chains,
        defect,
    })
}
