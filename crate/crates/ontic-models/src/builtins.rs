//! Reference model constructions.
//!
//! Two concrete families: the Beltrametti–Bugajski construction, where the
//! ontic states are the quantum states themselves (over a finite fragment of
//! pure states), and the deterministic hidden-outcome construction, where
//! the ontic state predetermines the outcome of one maximal measurement.
//! Both exist to give the checkers known-answer inputs: the first is
//! Born-exact and trivial, the second Born-exact and deliberately
//! non-trivial.

use std::collections::BTreeMap;

use quantum_core::numeric::CompensatedSum;
use quantum_core::{born_distribution, fidelity, policy, tensor_product, SparseState};

use crate::error::{OnticError, Result};
use crate::types::{
    CompleteOnticModel, OnticModel, OnticSpace, PreparationMeasure, QuantumRegistry,
    ResponseFunction, TransformationKernel,
};

/// Find the fragment member (by position) that a state matches up to phase.
pub fn match_in_fragment(
    state: &SparseState,
    members: &[&SparseState],
    tol: f64,
) -> Result<Option<usize>> {
    for (position, member) in members.iter().enumerate() {
        if fidelity(state, member)? >= 1.0 - tol {
            return Ok(Some(position));
        }
    }
    Ok(None)
}

/// Build the quantum-states-as-ontic-states model over a finite fragment.
///
/// State tags are grouped by Hilbert shape; each group becomes one model
/// whose ontic states are the listed pure states (labels = tags, compared up
/// to global phase). Responses are Born rows for every registered observable
/// of matching shape; kernels are the deterministic maps induced by every
/// listed unitary of matching shape, which requires the group to be closed
/// under it. Appenders are synthesized wherever they land inside a listed
/// group: for fragment states ψ (shape s₁) and φ (shape s₂), if every ψ ⊗ φ
/// is again a fragment state of shape s₁ ++ s₂, the map ψ ↦ ψ ⊗ φ becomes
/// the appender keyed by (s₁, φ's tag).
pub fn builtin_beltrametti_bugajski(
    registry: &QuantumRegistry,
    state_tags: &[&str],
    observable_tags: &[&str],
    unitary_tags: &[&str],
) -> Result<CompleteOnticModel> {
    let tol = policy::current().tol_exact;
    let mut groups: BTreeMap<Vec<u32>, Vec<&str>> = BTreeMap::new();
    for tag in state_tags {
        let state = registry.state(tag)?;
        groups.entry(state.shape().to_vec()).or_default().push(tag);
    }

    let mut models: BTreeMap<Vec<u32>, OnticModel> = BTreeMap::new();
    for (shape, tags) in &groups {
        let members: Vec<&SparseState> = tags
            .iter()
            .map(|tag| registry.state(tag))
            .collect::<Result<_>>()?;
        for (i, a) in members.iter().enumerate() {
            for (j, b) in members.iter().enumerate().skip(i + 1) {
                if fidelity(a, b)? >= 1.0 - tol {
                    return Err(OnticError::InvalidArgument {
                        detail: format!(
                            "fragment states `{}` and `{}` are the same ray",
                            tags[i], tags[j]
                        ),
                    });
                }
            }
        }
        let space = OnticSpace::new(tags.iter().map(|t| t.to_string()).collect())?;

        let preparations = tags
            .iter()
            .map(|tag| PreparationMeasure::dirac(space.clone(), tag, *tag))
            .collect::<Result<Vec<_>>>()?;

        let mut responses = Vec::new();
        for obs_tag in observable_tags {
            let observable = registry.observable(obs_tag)?;
            if observable.shape() != shape.as_slice() {
                continue;
            }
            let outcomes: Vec<String> =
                observable.labels().iter().map(|l| l.to_string()).collect();
            let rows = members
                .iter()
                .map(|state| {
                    Ok(born_distribution(state, observable)?
                        .into_iter()
                        .map(|(_, p)| p)
                        .collect::<Vec<f64>>())
                })
                .collect::<Result<Vec<_>>>()?;
            responses.push(ResponseFunction::new(
                space.clone(),
                outcomes,
                rows,
                *obs_tag,
            )?);
        }

        let mut kernels = Vec::new();
        for u_tag in unitary_tags {
            let unitary = registry.unitary(u_tag)?;
            if unitary.shape() != shape.as_slice() {
                continue;
            }
            let mut rows = Vec::with_capacity(members.len());
            for (position, state) in members.iter().enumerate() {
                let image = unitary.apply(state)?;
                let matched = match_in_fragment(&image, &members, tol)?.ok_or_else(|| {
                    OnticError::FragmentNotClosed {
                        unitary: u_tag.to_string(),
                        state: tags[position].to_string(),
                    }
                })?;
                let mut row = vec![0.0; members.len()];
                row[matched] = 1.0;
                rows.push(row);
            }
            kernels.push(TransformationKernel::new(
                space.clone(),
                space.clone(),
                rows,
                *u_tag,
            )?);
        }

        models.insert(
            shape.clone(),
            OnticModel::new(shape.clone(), space, preparations, responses, kernels)?,
        );
    }

    let spaces: BTreeMap<Vec<u32>, OnticSpace> = models
        .iter()
        .map(|(shape, model)| (shape.clone(), model.space().clone()))
        .collect();
    let mut complete = CompleteOnticModel::new(models)?;

    for phi_tag in state_tags {
        let phi = registry.state(phi_tag)?;
        let shape2 = phi.shape();
        for (shape1, tags1) in &groups {
            let joint_shape: Vec<u32> =
                shape1.iter().chain(shape2.iter()).copied().collect();
            let Some(joint_tags) = groups.get(&joint_shape) else {
                continue;
            };
            let joint_members: Vec<&SparseState> = joint_tags
                .iter()
                .map(|tag| registry.state(tag))
                .collect::<Result<_>>()?;
            let mut rows = Vec::with_capacity(tags1.len());
            let mut all_found = true;
            for tag1 in tags1 {
                let product = tensor_product(registry.state(tag1)?, phi)?;
                match match_in_fragment(&product, &joint_members, tol)? {
                    Some(position) => {
                        let mut row = vec![0.0; joint_members.len()];
                        row[position] = 1.0;
                        rows.push(row);
                    }
                    None => {
                        all_found = false;
                        break;
                    }
                }
            }
            if all_found {
                let kernel = TransformationKernel::new(
                    spaces[shape1].clone(),
                    spaces[&joint_shape].clone(),
                    rows,
                    *phi_tag,
                )?;
                complete.insert_appender(shape1.clone(), *phi_tag, kernel)?;
            }
        }
    }
    Ok(complete)
}

/// Build the deterministic hidden-outcome model: one ontic state per outcome
/// of a maximal observable, the preparation weighting them by the Born
/// probabilities c_i², and the response revealing the predetermined outcome
/// with certainty. Born-exact by construction, but far from trivial for any
/// non-degenerate c.
pub fn builtin_deterministic_model(
    registry: &QuantumRegistry,
    c: &[f64],
    psi_tag: &str,
    observable_tag: &str,
) -> Result<OnticModel> {
    if c.is_empty() {
        return Err(OnticError::InvalidArgument {
            detail: "weight vector c is empty".into(),
        });
    }
    let tol = policy::current().tol_exact;
    let mut total = CompensatedSum::new();
    for (i, &ci) in c.iter().enumerate() {
        if !ci.is_finite() || ci <= 0.0 {
            return Err(OnticError::InvalidArgument {
                detail: format!("c[{i}] = {ci}; all entries must be strictly positive"),
            });
        }
        total.add(ci * ci);
    }
    if (total.value() - 1.0).abs() > tol {
        return Err(OnticError::InvalidArgument {
            detail: format!("Σ c_i² = {}, not 1", total.value()),
        });
    }

    let observable = registry.observable(observable_tag)?;
    let d = c.len() as u32;
    if observable.shape() != [d] {
        return Err(OnticError::InvalidArgument {
            detail: format!(
                "observable `{observable_tag}` has shape {:?}; expected [{d}]",
                observable.shape()
            ),
        });
    }
    if observable.branches().len() != c.len() {
        return Err(OnticError::InvalidArgument {
            detail: format!(
                "observable `{observable_tag}` has {} branches; a maximal observable with {} \
                 is required",
                observable.branches().len(),
                c.len()
            ),
        });
    }
    let psi = registry.state(psi_tag)?;
    if psi.shape() != observable.shape() {
        return Err(OnticError::InvalidArgument {
            detail: format!(
                "state `{psi_tag}` has shape {:?}; expected {:?}",
                psi.shape(),
                observable.shape()
            ),
        });
    }
    let born = born_distribution(psi, observable)?;
    for (i, (label, p)) in born.iter().enumerate() {
        if (p - c[i] * c[i]).abs() > tol {
            return Err(OnticError::InvalidArgument {
                detail: format!(
                    "state `{psi_tag}` has Born weight {p} for outcome `{label}`, but c[{i}]² \
                     = {}",
                    c[i] * c[i]
                ),
            });
        }
    }

    let outcomes: Vec<String> = born.iter().map(|(label, _)| label.clone()).collect();
    let space = OnticSpace::new(outcomes.clone())?;
    let weights: Vec<f64> = c.iter().map(|&ci| ci * ci).collect();
    let preparation = PreparationMeasure::new(space.clone(), weights, psi_tag)?;
    let rows: Vec<Vec<f64>> = (0..c.len())
        .map(|i| {
            let mut row = vec![0.0; c.len()];
            row[i] = 1.0;
            row
        })
        .collect();
    let response = ResponseFunction::new(space.clone(), outcomes, rows, observable_tag)?;
    OnticModel::new(
        observable.shape().to_vec(),
        space,
        vec![preparation],
        vec![response],
        vec![],
    )
}

/// Product construction joining two models: the joint ontic space is the
/// cartesian product, joint preparations are product measures tagged
/// `p₁⊗p₂`, responses comprise lifts of each side (`A⊗1`, `1⊗B`) and full
/// products (`A⊗B` with paired outcomes), and each preparation of the second
/// model yields an appender placing it in the second slot. Ancilla
/// independence holds exactly by construction.
pub fn product_complete_model(
    model1: &OnticModel,
    model2: &OnticModel,
) -> Result<CompleteOnticModel> {
    if model1.shape() == model2.shape() && model1 != model2 {
        return Err(OnticError::InvalidArgument {
            detail: "two distinct models of the same shape cannot share a complete model".into(),
        });
    }
    let n1 = model1.space().len();
    let n2 = model2.space().len();
    let joint_labels: Vec<String> = model1
        .space()
        .labels()
        .iter()
        .flat_map(|l1| {
            model2
                .space()
                .labels()
                .iter()
                .map(move |l2| format!("{l1}|{l2}"))
        })
        .collect();
    let joint_space = OnticSpace::new(joint_labels)?;
    let slot = |i: usize, j: usize| i * n2 + j;

    let mut preparations = Vec::new();
    for p1 in model1.preparations() {
        for p2 in model2.preparations() {
            let mut weights = vec![0.0; n1 * n2];
            for i in 0..n1 {
                for j in 0..n2 {
                    weights[slot(i, j)] = p1.weight(i) * p2.weight(j);
                }
            }
            preparations.push(PreparationMeasure::new(
                joint_space.clone(),
                weights,
                format!("{}⊗{}", p1.represents(), p2.represents()),
            )?);
        }
    }

    let mut responses = Vec::new();
    for r1 in model1.responses() {
        let rows: Vec<Vec<f64>> = (0..n1 * n2)
            .map(|s| r1.rows()[s / n2].clone())
            .collect();
        responses.push(ResponseFunction::new(
            joint_space.clone(),
            r1.outcomes().to_vec(),
            rows,
            format!("{}⊗1", r1.represents()),
        )?);
    }
    for r2 in model2.responses() {
        let rows: Vec<Vec<f64>> = (0..n1 * n2)
            .map(|s| r2.rows()[s % n2].clone())
            .collect();
        responses.push(ResponseFunction::new(
            joint_space.clone(),
            r2.outcomes().to_vec(),
            rows,
            format!("1⊗{}", r2.represents()),
        )?);
    }
    for r1 in model1.responses() {
        for r2 in model2.responses() {
            let outcomes: Vec<String> = r1
                .outcomes()
                .iter()
                .flat_map(|a| {
                    r2.outcomes()
                        .iter()
                        .map(move |b| crate::checks::joint_outcome_label(a, b))
                })
                .collect();
            let rows: Vec<Vec<f64>> = (0..n1 * n2)
                .map(|s| {
                    let row1 = &r1.rows()[s / n2];
                    let row2 = &r2.rows()[s % n2];
                    row1.iter()
                        .flat_map(|&pa| row2.iter().map(move |&pb| pa * pb))
                        .collect()
                })
                .collect();
            responses.push(ResponseFunction::new(
                joint_space.clone(),
                outcomes,
                rows,
                format!("{}⊗{}", r1.represents(), r2.represents()),
            )?);
        }
    }

    let joint_shape: Vec<u32> = model1
        .shape()
        .iter()
        .chain(model2.shape().iter())
        .copied()
        .collect();
    let joint = OnticModel::new(joint_shape, joint_space.clone(), preparations, responses, vec![])?;

    let mut models = BTreeMap::new();
    models.insert(model1.shape().to_vec(), model1.clone());
    models.insert(model2.shape().to_vec(), model2.clone());
    models.insert(joint.shape().to_vec(), joint);
    let mut complete = CompleteOnticModel::new(models)?;

    for p2 in model2.preparations() {
        let rows: Vec<Vec<f64>> = (0..n1)
            .map(|i| {
                let mut row = vec![0.0; n1 * n2];
                for j in 0..n2 {
                    row[slot(i, j)] = p2.weight(j);
                }
                row
            })
            .collect();
        let kernel = TransformationKernel::new(
            model1.space().clone(),
            joint_space.clone(),
            rows,
            p2.represents(),
        )?;
        complete.insert_appender(model1.shape().to_vec(), p2.represents(), kernel)?;
    }
    Ok(complete)
}

/// Convex combination of preparations on a common space.
pub fn convex_preparation(
    components: &[(f64, &PreparationMeasure)],
    represents: impl Into<String>,
) -> Result<PreparationMeasure> {
    let (first, rest) = components.split_first().ok_or_else(|| OnticError::InvalidArgument {
        detail: "convex combination needs at least one component".into(),
    })?;
    let space = first.1.space().clone();
    for (_, component) in rest {
        if component.space() != &space {
            return Err(OnticError::SpaceMismatch {
                what: format!("component `{}`", component.represents()),
            });
        }
    }
    let mut weights = vec![0.0; space.len()];
    for (coefficient, component) in components {
        if !coefficient.is_finite() || *coefficient < 0.0 {
            return Err(OnticError::InvalidArgument {
                detail: format!("mixing coefficient {coefficient} is negative or not finite"),
            });
        }
        for (slot, w) in component.weights().iter().enumerate() {
            weights[slot] += coefficient * w;
        }
    }
    PreparationMeasure::new(space, weights, represents)
}
