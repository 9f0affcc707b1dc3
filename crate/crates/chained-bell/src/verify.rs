//! Walking the chained estimate through an ontic model: per-rung marginal
//! splits, the telescoping sum, and the comparison against the quantum
//! cross-term values.

use ontic_models::{
    joint_outcome_label, parameter_independence_defect, OnticModel, OnticSpace,
    PreparationMeasure, ResponseFunction,
};
use quantum_core::numeric::CompensatedSum;
use quantum_core::policy;

use crate::error::{ChainError, Result};
use crate::expectation::{
    chained_bound, closing_expectation, cross_expectation_oracle, marginal_expectation_oracle,
    rung_expectation,
};
use crate::ladder::{RotationLadder, RungKind};

/// Preparation tag under which the verifier looks up the maximally
/// entangled input measure.
pub const MAXIMALLY_ENTANGLED_TAG: &str = "psi_d";

/// Slack granted to the theorem-level inequalities (triangle/telescoping
/// steps that hold for every model) and to the soundness comparison against
/// the quantum values.
const THEOREM_SLACK: f64 = 1e-9;

/// One line of the chained estimate as walked through a concrete model.
#[derive(Clone, Debug)]
pub struct RungReport {
    /// Joint response tag serving this rung, e.g. "A[1]⊗B[0]".
    pub label: String,
    pub kind: RungKind,
    /// A-side rotation angle.
    pub theta: f64,
    /// B-side rotation angle.
    pub phi: f64,
    /// ∫ |p_A(·) − p_B(·)| dμ for the outcome pair this rung compares.
    pub model_gap: f64,
    /// The marginal split: sum of the off-target joint rates that bound the
    /// gap once the joint response has the locals as margins.
    pub cross_sum: f64,
    /// What the cross-term sum must be for Born statistics on ψ_d.
    pub quantum_cross: f64,
    /// Whether the model's cross-term sum stays within the quantum value.
    pub sound: bool,
}

/// Full account of one chained-estimate run.
#[derive(Clone, Debug)]
pub struct ChainReport {
    pub dimension: u32,
    pub half_length: usize,
    pub outcome_i: u32,
    pub outcome_j: u32,
    /// ∫ |p_{A[0]}(a_i) − p_{A[0]}(a_j)| dμ: the quantity being bounded.
    pub lhs: f64,
    pub rungs: Vec<RungReport>,
    /// Sum of the 2N+1 exact rung values (2/d)sin²δ.
    pub presimplified_bound: f64,
    /// π²/(2d(2N+1)).
    pub bound: f64,
    /// All rungs sound and lhs within the simplified bound.
    pub holds: bool,
    /// Tag of the first rung whose cross-term sum exceeds the quantum value:
    /// the correlation the model fails to reproduce.
    pub failing_rung: Option<String>,
}

fn fetch_response<'m>(model: &'m OnticModel, tag: &str) -> Result<&'m ResponseFunction> {
    model.response(tag).map_err(|_| ChainError::MissingRung {
        tag: tag.to_string(),
        detail: "response function not present in the model".to_string(),
    })
}

fn outcome_index(response: &ResponseFunction, outcome: &str) -> Result<usize> {
    response
        .outcome_index(outcome)
        .ok_or_else(|| ChainError::MissingRung {
            tag: response.represents().to_string(),
            detail: format!("outcome `{outcome}` not present"),
        })
}

/// ∫ |p_left(λ) − p_right(λ)| dμ over the preparation's weights.
fn integrated_abs_gap(
    prep: &PreparationMeasure,
    left: &ResponseFunction,
    left_outcome: usize,
    right: &ResponseFunction,
    right_outcome: usize,
) -> f64 {
    let mut total = CompensatedSum::new();
    for (index, &weight) in prep.weights().iter().enumerate() {
        total.add(weight * (left.prob(index, left_outcome) - right.prob(index, right_outcome)).abs());
    }
    total.value()
}

/// ∫ p_joint(outcome|λ) dμ.
fn integrated_rate(prep: &PreparationMeasure, joint: &ResponseFunction, outcome: usize) -> f64 {
    let mut total = CompensatedSum::new();
    for (index, &weight) in prep.weights().iter().enumerate() {
        total.add(weight * joint.prob(index, outcome));
    }
    total.value()
}

/// Run the chained estimate for the outcome pair (i, j) in dimension d with
/// chain half-length N against a model's responses for the rotated-basis
/// ladder. The model must carry the preparation `psi_d`, local responses
/// `A[0]`..`A[N]` and `B[0]`..`B[N]`, and a joint response for every rung.
///
/// Hard failures (errors): a missing component, a joint response whose
/// margins stray from the declared locals, or a violated theorem-level
/// inequality. Soft failures (reported, not errored): a rung whose
/// cross-term sum exceeds the quantum value — that is the verdict the run
/// exists to deliver, naming the quantum correlation the model misses.
pub fn verify_equiprobability(
    model: &OnticModel,
    d: u32,
    half_length: usize,
    i: u32,
    j: u32,
) -> Result<ChainReport> {
    let ladder = RotationLadder::new(d, i, j, half_length)?;
    let tolerances = policy::current();

    let prep = model
        .preparation(MAXIMALLY_ENTANGLED_TAG)
        .map_err(|_| ChainError::MissingRung {
            tag: MAXIMALLY_ENTANGLED_TAG.to_string(),
            detail: "preparation not present in the model".to_string(),
        })?;

    let a0 = fetch_response(model, &ladder.a_tag(0))?;
    let lhs = integrated_abs_gap(
        prep,
        a0,
        outcome_index(a0, &ladder.outcome_a(i))?,
        a0,
        outcome_index(a0, &ladder.outcome_a(j))?,
    );

    let mut rungs = Vec::new();
    let mut failing_rung = None;
    let mut gap_total = CompensatedSum::new();

    for rung in ladder.rungs() {
        let a_tag = ladder.a_tag(rung.a_position);
        let b_tag = ladder.b_tag(rung.b_position);
        let joint_tag = ladder.joint_tag(rung.a_position, rung.b_position);
        let a_resp = fetch_response(model, &a_tag)?;
        let b_resp = fetch_response(model, &b_tag)?;
        let joint = fetch_response(model, &joint_tag)?;

        let pi_defect = parameter_independence_defect(model, a_resp, b_resp, joint)?;
        if pi_defect > tolerances.tol_exact {
            return Err(ChainError::ParameterDependence {
                tag: joint_tag,
                defect: pi_defect,
                tolerance: tolerances.tol_exact,
            });
        }

        let joint_rate = |a_out: u32, b_out: u32| -> Result<f64> {
            let label =
                joint_outcome_label(&ladder.outcome_a(a_out), &ladder.outcome_b(b_out));
            Ok(integrated_rate(prep, joint, outcome_index(joint, &label)?))
        };

        let (model_gap, cross_sum, quantum_cross) = match rung.kind {
            RungKind::Adjacent => {
                // |p_A(a_i) − p_B(b_i)| ≤ Σ_{k≠i} p(a_i, b_k) + Σ_{l≠i} p(a_l, b_i)
                let model_gap = integrated_abs_gap(
                    prep,
                    a_resp,
                    outcome_index(a_resp, &ladder.outcome_a(i))?,
                    b_resp,
                    outcome_index(b_resp, &ladder.outcome_b(i))?,
                );
                let mut cross = CompensatedSum::new();
                for k in 1..=d {
                    if k != i {
                        cross.add(joint_rate(i, k)?);
                    }
                }
                for l in 1..=d {
                    if l != i {
                        cross.add(joint_rate(l, i)?);
                    }
                }
                let quantum = rung_expectation(d, i, j, rung.theta, rung.phi)?;
                (model_gap, cross.value(), quantum)
            }
            RungKind::Closing => {
                // |p_B(b_i) − p_A(a_j)| ≤ Σ_{k≠j} p(a_k, b_i) + Σ_{l≠i} p(a_j, b_l)
                // (the shared term p(a_j, b_i) cancels out of the difference).
                let model_gap = integrated_abs_gap(
                    prep,
                    b_resp,
                    outcome_index(b_resp, &ladder.outcome_b(i))?,
                    a_resp,
                    outcome_index(a_resp, &ladder.outcome_a(j))?,
                );
                let mut cross = CompensatedSum::new();
                for k in 1..=d {
                    if k != j {
                        cross.add(joint_rate(k, i)?);
                    }
                }
                for l in 1..=d {
                    if l != i {
                        cross.add(joint_rate(j, l)?);
                    }
                }
                let quantum = closing_expectation(d, i, j)?;
                (model_gap, cross.value(), quantum)
            }
        };

        // Once the margins match (checked above), the marginal split is a
        // theorem, not a property of the model.
        if model_gap > cross_sum + THEOREM_SLACK {
            return Err(ChainError::Internal {
                detail: format!(
                    "rung {joint_tag}: gap {model_gap} exceeds its marginal split {cross_sum}"
                ),
            });
        }

        let sound = cross_sum <= quantum_cross + THEOREM_SLACK;
        if !sound && failing_rung.is_none() {
            failing_rung = Some(joint_tag.clone());
        }
        gap_total.add(model_gap);
        rungs.push(RungReport {
            label: joint_tag,
            kind: rung.kind,
            theta: rung.theta,
            phi: rung.phi,
            model_gap,
            cross_sum,
            quantum_cross,
            sound,
        });
    }

    // The telescoping step is a pointwise triangle inequality; it cannot
    // fail for any model with the required components.
    if lhs > gap_total.value() + THEOREM_SLACK {
        return Err(ChainError::Internal {
            detail: format!(
                "telescoping failed: lhs {lhs} exceeds rung-gap total {}",
                gap_total.value()
            ),
        });
    }

    let bound = chained_bound(d, half_length)?;
    let holds = failing_rung.is_none() && lhs <= bound.simplified + THEOREM_SLACK;

    Ok(ChainReport {
        dimension: d,
        half_length,
        outcome_i: i,
        outcome_j: j,
        lhs,
        rungs,
        presimplified_bound: bound.presimplified,
        bound: bound.simplified,
        holds,
        failing_rung,
    })
}

/// ∫ |p(left|λ) − p(right|λ)| dμ for two outcomes of one response function.
pub fn pairwise_outcome_gap(
    model: &OnticModel,
    prep_tag: &str,
    response_tag: &str,
    left: &str,
    right: &str,
) -> Result<f64> {
    let prep = model.preparation(prep_tag)?;
    let response = model.response(response_tag)?;
    Ok(integrated_abs_gap(
        prep,
        response,
        outcome_index(response, left)?,
        response,
        outcome_index(response, right)?,
    ))
}

/// ∫ |p(outcome|λ) − 1/n| dμ where n is the number of outcomes: the
/// integrated distance from exact equiprobability. The pairwise estimate
/// controls this through 1/n · Σ_j ∫|p(outcome) − p(outcome_j)| dμ.
pub fn equiprobability_gap(
    model: &OnticModel,
    prep_tag: &str,
    response_tag: &str,
    outcome: &str,
) -> Result<f64> {
    let prep = model.preparation(prep_tag)?;
    let response = model.response(response_tag)?;
    let position = outcome_index(response, outcome)?;
    let uniform = 1.0 / response.outcomes().len() as f64;
    let mut total = CompensatedSum::new();
    for (index, &weight) in prep.weights().iter().enumerate() {
        total.add(weight * (response.prob(index, position) - uniform).abs());
    }
    Ok(total.value())
}

fn clamped_probability(raw: f64, what: &str) -> Result<f64> {
    if raw < -policy::current().tol_exact {
        return Err(ChainError::Internal {
            detail: format!("{what}: oracle produced negative probability {raw}"),
        });
    }
    Ok(raw.max(0.0))
}

/// Build the one-state model whose responses carry the exact Born rates of
/// ψ_d for every ladder measurement: the reference fixture every chained run
/// must certify. All rows come from the projector oracle, none are assumed.
pub fn born_exact_ladder_model(d: u32, i: u32, j: u32, half_length: usize) -> Result<OnticModel> {
    let ladder = RotationLadder::new(d, i, j, half_length)?;
    let space = OnticSpace::new(vec![MAXIMALLY_ENTANGLED_TAG.to_string()])?;
    let prep = PreparationMeasure::dirac(
        space.clone(),
        MAXIMALLY_ENTANGLED_TAG,
        MAXIMALLY_ENTANGLED_TAG,
    )?;

    let mut responses = Vec::new();
    let push_local = |responses: &mut Vec<ResponseFunction>,
                          side: usize,
                          tag: String,
                          angle: f64|
     -> Result<()> {
        let mut outcomes = Vec::with_capacity(d as usize);
        let mut row = Vec::with_capacity(d as usize);
        for k in 1..=d {
            outcomes.push(if side == 0 {
                ladder.outcome_a(k)
            } else {
                ladder.outcome_b(k)
            });
            let raw = marginal_expectation_oracle(d, i, j, k, angle, side)?;
            row.push(clamped_probability(raw, &tag)?);
        }
        responses.push(ResponseFunction::new(space.clone(), outcomes, vec![row], tag)?);
        Ok(())
    };
    for n in 0..=half_length {
        push_local(&mut responses, 0, ladder.a_tag(n), ladder.a_angle(n))?;
        push_local(&mut responses, 1, ladder.b_tag(n), ladder.b_angle(n))?;
    }

    for rung in ladder.rungs() {
        let tag = ladder.joint_tag(rung.a_position, rung.b_position);
        let mut outcomes = Vec::with_capacity((d * d) as usize);
        let mut row = Vec::with_capacity((d * d) as usize);
        for k in 1..=d {
            for l in 1..=d {
                outcomes.push(joint_outcome_label(&ladder.outcome_a(k), &ladder.outcome_b(l)));
                let raw = cross_expectation_oracle(d, i, j, k, l, rung.theta, rung.phi)?;
                row.push(clamped_probability(raw, &tag)?);
            }
        }
        responses.push(ResponseFunction::new(space.clone(), outcomes, vec![row], tag)?);
    }

    Ok(OnticModel::new(
        vec![d, d],
        space,
        vec![prep],
        responses,
        Vec::new(),
    )?)
}
