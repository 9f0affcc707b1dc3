//! JSON interchange for ontic models.
//!
//! The core schema makes every checker input explicit:
//! `{space, preparations: [{tag, weights}], responses: [{tag, outcomes,
//! rows}], kernels: [{tag, rows}], joint_links: [{localA, localB, joint}]}`.
//! A `joint_links` entry names a joint response together with the two local
//! responses that should be its margins.
//!
//! Checkers that compare against the Born rule need quantum referents for
//! the tags, so the format carries an optional `referents` section (plus the
//! system `shape`) describing pure states, mixtures, observables, and
//! unitaries. Files without referents still load; only the purely
//! model-side checks can run on them.
//!
//! All validation failures carry a JSON-pointer-style path to the offending
//! field.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};

use quantum_core::{
    Branch, BranchProjector, Complex64, MultiIndex, ProjectorObservable, SparseState,
    StructuredUnitary, UnitaryRule,
};

use crate::error::{OnticError, Result};
use crate::types::{
    OnticModel, OnticSpace, PreparationMeasure, QuantumRegistry, ResponseFunction,
    TransformationKernel,
};

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ModelFile {
    /// Hilbert-space shape of the modeled system; required when referents
    /// are supplied.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub shape: Vec<u32>,
    pub space: Vec<String>,
    #[serde(default)]
    pub preparations: Vec<PrepEntry>,
    #[serde(default)]
    pub responses: Vec<RespEntry>,
    #[serde(default)]
    pub kernels: Vec<KernelEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub joint_links: Vec<JointLink>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub referents: Option<Referents>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PrepEntry {
    pub tag: String,
    pub weights: Vec<f64>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RespEntry {
    pub tag: String,
    pub outcomes: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct KernelEntry {
    pub tag: String,
    pub rows: Vec<Vec<f64>>,
}

/// Marks a joint response whose margins should be the two named local
/// responses (parameter independence is checked across each link).
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct JointLink {
    #[serde(rename = "localA")]
    pub local_a: String,
    #[serde(rename = "localB")]
    pub local_b: String,
    pub joint: String,
}

#[derive(Clone, Debug, Default, Serialize, Deserialize)]
pub struct Referents {
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub states: BTreeMap<String, StateEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub mixtures: BTreeMap<String, Vec<MixtureComponent>>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub observables: BTreeMap<String, ObservableEntry>,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub unitaries: BTreeMap<String, UnitaryEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct StateEntry {
    pub shape: Vec<u32>,
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct AmplitudeEntry {
    pub index: Vec<u32>,
    pub re: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub im: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MixtureComponent {
    pub weight: f64,
    pub tag: String,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObservableEntry {
    /// Complete measurement of one tensor factor in its computational
    /// basis; branch labels are `{prefix}_{i}`.
    FactorBasis {
        shape: Vec<u32>,
        position: usize,
        prefix: String,
    },
    /// Family of rank-1 branches given by explicit state vectors.
    Rank1Family {
        shape: Vec<u32>,
        branches: Vec<Rank1Branch>,
    },
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct Rank1Branch {
    pub label: String,
    pub amplitudes: Vec<AmplitudeEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct UnitaryEntry {
    pub shape: Vec<u32>,
    pub positions: Vec<usize>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub rotations: Vec<RotationEntry>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub permutations: Vec<PermutationEntry>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RotationEntry {
    pub a: Vec<u32>,
    pub b: Vec<u32>,
    pub theta: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PermutationEntry {
    pub from: Vec<u32>,
    pub to: Vec<u32>,
}

/// A model plus everything needed to check it.
#[derive(Clone, Debug)]
pub struct LoadedModel {
    pub model: OnticModel,
    pub registry: QuantumRegistry,
    pub links: Vec<JointLink>,
}

fn schema(pointer: impl Into<String>, err: impl ToString) -> OnticError {
    OnticError::Schema {
        pointer: pointer.into(),
        detail: err.to_string(),
    }
}

fn state_from_entry(pointer: &str, entry: &StateEntry) -> Result<SparseState> {
    let amplitudes: Vec<(MultiIndex, Complex64)> = entry
        .amplitudes
        .iter()
        .map(|a| {
            (
                MultiIndex::new(a.index.clone()),
                Complex64::new(a.re, a.im),
            )
        })
        .collect();
    SparseState::new(entry.shape.clone(), amplitudes).map_err(|e| schema(pointer, e))
}

fn observable_from_entry(pointer: &str, entry: &ObservableEntry) -> Result<ProjectorObservable> {
    match entry {
        ObservableEntry::FactorBasis {
            shape,
            position,
            prefix,
        } => ProjectorObservable::factor_basis(shape.clone(), *position, prefix)
            .map_err(|e| schema(pointer, e)),
        ObservableEntry::Rank1Family { shape, branches } => {
            let built: Vec<Branch> = branches
                .iter()
                .enumerate()
                .map(|(i, branch)| {
                    let state = state_from_entry(
                        &format!("{pointer}/branches/{i}"),
                        &StateEntry {
                            shape: shape.clone(),
                            amplitudes: branch.amplitudes.clone(),
                        },
                    )?;
                    Ok(Branch::new(
                        branch.label.clone(),
                        vec![BranchProjector::Rank1(state)],
                    ))
                })
                .collect::<Result<_>>()?;
            ProjectorObservable::new(shape.clone(), built).map_err(|e| schema(pointer, e))
        }
    }
}

fn unitary_from_entry(pointer: &str, entry: &UnitaryEntry) -> Result<StructuredUnitary> {
    let mut rules = Vec::new();
    for rotation in &entry.rotations {
        rules.push(UnitaryRule::Rotation {
            a: rotation.a.clone(),
            b: rotation.b.clone(),
            theta: rotation.theta,
        });
    }
    for permutation in &entry.permutations {
        rules.push(UnitaryRule::Permutation {
            from: permutation.from.clone(),
            to: permutation.to.clone(),
        });
    }
    StructuredUnitary::new(entry.shape.clone(), entry.positions.clone(), rules)
        .map_err(|e| schema(pointer, e))
}

/// Build the registry described by a referents section.
pub fn registry_from_referents(referents: &Referents) -> Result<QuantumRegistry> {
    let mut registry = QuantumRegistry::new();
    for (tag, entry) in &referents.states {
        let state = state_from_entry(&format!("/referents/states/{tag}"), entry)?;
        registry
            .register_state(tag.clone(), state)
            .map_err(|e| schema(format!("/referents/states/{tag}"), e))?;
    }
    for (tag, components) in &referents.mixtures {
        registry
            .register_mixture(
                tag.clone(),
                components
                    .iter()
                    .map(|c| (c.weight, c.tag.clone()))
                    .collect(),
            )
            .map_err(|e| schema(format!("/referents/mixtures/{tag}"), e))?;
    }
    for (tag, entry) in &referents.observables {
        let pointer = format!("/referents/observables/{tag}");
        let observable = observable_from_entry(&pointer, entry)?;
        registry
            .register_observable(tag.clone(), observable)
            .map_err(|e| schema(pointer, e))?;
    }
    for (tag, entry) in &referents.unitaries {
        let pointer = format!("/referents/unitaries/{tag}");
        let unitary = unitary_from_entry(&pointer, entry)?;
        registry
            .register_unitary(tag.clone(), unitary)
            .map_err(|e| schema(pointer, e))?;
    }
    Ok(registry)
}

/// Validate a parsed file and build the model, registry, and links.
pub fn file_to_model(file: &ModelFile) -> Result<LoadedModel> {
    let space = OnticSpace::new(file.space.clone()).map_err(|e| schema("/space", e))?;

    let mut preparations = Vec::with_capacity(file.preparations.len());
    for (i, entry) in file.preparations.iter().enumerate() {
        preparations.push(
            PreparationMeasure::new(space.clone(), entry.weights.clone(), entry.tag.clone())
                .map_err(|e| schema(format!("/preparations/{i}/weights"), e))?,
        );
    }

    let mut responses = Vec::with_capacity(file.responses.len());
    for (i, entry) in file.responses.iter().enumerate() {
        responses.push(
            ResponseFunction::new(
                space.clone(),
                entry.outcomes.clone(),
                entry.rows.clone(),
                entry.tag.clone(),
            )
            .map_err(|e| schema(format!("/responses/{i}"), e))?,
        );
    }

    let mut kernels = Vec::with_capacity(file.kernels.len());
    for (i, entry) in file.kernels.iter().enumerate() {
        kernels.push(
            TransformationKernel::new(
                space.clone(),
                space.clone(),
                entry.rows.clone(),
                entry.tag.clone(),
            )
            .map_err(|e| schema(format!("/kernels/{i}/rows"), e))?,
        );
    }

    for (i, link) in file.joint_links.iter().enumerate() {
        for (field, tag) in [
            ("localA", &link.local_a),
            ("localB", &link.local_b),
            ("joint", &link.joint),
        ] {
            if !responses.iter().any(|r| r.represents() == tag.as_str()) {
                return Err(schema(
                    format!("/joint_links/{i}/{field}"),
                    format!("no response tagged `{tag}`"),
                ));
            }
        }
    }

    let registry = match &file.referents {
        Some(referents) => registry_from_referents(referents)?,
        None => QuantumRegistry::new(),
    };
    if file.referents.is_some() && file.shape.is_empty() {
        return Err(schema(
            "/shape",
            "shape is required when referents are supplied",
        ));
    }

    let model = OnticModel::new(
        file.shape.clone(),
        space,
        preparations,
        responses,
        kernels,
    )
    .map_err(|e| schema("", e))?;
    Ok(LoadedModel {
        model,
        registry,
        links: file.joint_links.clone(),
    })
}

/// Parse and validate a model description from JSON text.
pub fn parse_model_str(text: &str) -> Result<LoadedModel> {
    let file: ModelFile =
        serde_json::from_str(text).map_err(|e| schema("", format!("JSON parse error: {e}")))?;
    file_to_model(&file)
}

/// Load and validate a model description from a file.
pub fn load_model_file(path: impl AsRef<Path>) -> Result<LoadedModel> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path).map_err(|e| OnticError::InvalidArgument {
        detail: format!("cannot read `{}`: {e}", path.display()),
    })?;
    parse_model_str(&text)
}

fn amplitudes_of(state: &SparseState) -> Vec<AmplitudeEntry> {
    state
        .amplitudes()
        .map(|(index, amp)| AmplitudeEntry {
            index: index.factors().to_vec(),
            re: amp.re,
            im: amp.im,
        })
        .collect()
}

fn observable_to_entry(tag: &str, observable: &ProjectorObservable) -> Result<ObservableEntry> {
    // Detect a factor-basis observable: every branch is a single basis slice
    // constraining the same position, labelled `{prefix}_{i}`.
    let mut position: Option<usize> = None;
    let mut is_factor_basis = true;
    for (i, branch) in observable.branches().iter().enumerate() {
        match branch.members.as_slice() {
            [BranchProjector::Slice(slice)] => {
                let constraints: &BTreeMap<usize, u32> = slice.constraints();
                if constraints.len() != 1 {
                    is_factor_basis = false;
                    break;
                }
                let (&pos, &index) = constraints.iter().next().expect("one constraint");
                if position.get_or_insert(pos) != &pos || index != (i + 1) as u32 {
                    is_factor_basis = false;
                    break;
                }
            }
            _ => {
                is_factor_basis = false;
                break;
            }
        }
    }
    if is_factor_basis {
        if let Some(position) = position {
            let labels = observable.labels();
            let expected_prefix = labels[0].strip_suffix("_1");
            if let Some(prefix) = expected_prefix {
                let all_match = labels
                    .iter()
                    .enumerate()
                    .all(|(i, label)| *label == format!("{prefix}_{}", i + 1));
                if all_match {
                    return Ok(ObservableEntry::FactorBasis {
                        shape: observable.shape().to_vec(),
                        position,
                        prefix: prefix.to_string(),
                    });
                }
            }
        }
    }
    let branches = observable
        .branches()
        .iter()
        .map(|branch| match branch.members.as_slice() {
            [BranchProjector::Rank1(state)] => Ok(Rank1Branch {
                label: branch.label.clone(),
                amplitudes: amplitudes_of(state),
            }),
            _ => Err(OnticError::InvalidArgument {
                detail: format!(
                    "observable `{tag}` mixes projector kinds and cannot be serialized"
                ),
            }),
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(ObservableEntry::Rank1Family {
        shape: observable.shape().to_vec(),
        branches,
    })
}

fn unitary_to_entry(unitary: &StructuredUnitary) -> UnitaryEntry {
    UnitaryEntry {
        shape: unitary.shape().to_vec(),
        positions: unitary.positions().to_vec(),
        rotations: unitary
            .rotation_rules()
            .map(|(a, b, theta)| RotationEntry {
                a: a.to_vec(),
                b: b.to_vec(),
                theta,
            })
            .collect(),
        permutations: unitary
            .permutation_pairs()
            .map(|(from, to)| PermutationEntry {
                from: from.to_vec(),
                to: to.to_vec(),
            })
            .collect(),
    }
}

/// Serialize a model together with the referents its tags resolve to.
/// Referents are exported only for tags the registry actually resolves.
pub fn model_to_file(
    model: &OnticModel,
    registry: &QuantumRegistry,
    links: &[JointLink],
) -> Result<ModelFile> {
    let mut referents = Referents::default();
    let mut state_tags: Vec<&str> = Vec::new();
    for prep in model.preparations() {
        state_tags.push(prep.represents());
    }
    for kernel in model.kernels() {
        // Appender kernels carry preparation tags; in-model kernels carry
        // unitary tags. Collect both kinds and let resolution decide.
        state_tags.push(kernel.represents());
    }
    for tag in state_tags {
        if let Ok(state) = registry.state(tag) {
            referents.states.insert(
                tag.to_string(),
                StateEntry {
                    shape: state.shape().to_vec(),
                    amplitudes: amplitudes_of(state),
                },
            );
        } else if let Some(components) = registry.mixture_components(tag) {
            for (_, pure_tag) in components {
                if let Ok(state) = registry.state(pure_tag) {
                    referents.states.insert(
                        pure_tag.clone(),
                        StateEntry {
                            shape: state.shape().to_vec(),
                            amplitudes: amplitudes_of(state),
                        },
                    );
                }
            }
            referents.mixtures.insert(
                tag.to_string(),
                components
                    .iter()
                    .map(|(weight, pure_tag)| MixtureComponent {
                        weight: *weight,
                        tag: pure_tag.clone(),
                    })
                    .collect(),
            );
        }
    }
    for response in model.responses() {
        let tag = response.represents();
        if let Ok(observable) = registry.observable(tag) {
            referents
                .observables
                .insert(tag.to_string(), observable_to_entry(tag, observable)?);
        }
    }
    for kernel in model.kernels() {
        let tag = kernel.represents();
        if let Ok(unitary) = registry.unitary(tag) {
            referents
                .unitaries
                .insert(tag.to_string(), unitary_to_entry(unitary));
        }
    }

    let has_referents = !referents.states.is_empty()
        || !referents.mixtures.is_empty()
        || !referents.observables.is_empty()
        || !referents.unitaries.is_empty();
    Ok(ModelFile {
        shape: model.shape().to_vec(),
        space: model.space().labels().to_vec(),
        preparations: model
            .preparations()
            .iter()
            .map(|p| PrepEntry {
                tag: p.represents().to_string(),
                weights: p.weights().to_vec(),
            })
            .collect(),
        responses: model
            .responses()
            .iter()
            .map(|r| RespEntry {
                tag: r.represents().to_string(),
                outcomes: r.outcomes().to_vec(),
                rows: r.rows().to_vec(),
            })
            .collect(),
        kernels: model
            .kernels()
            .iter()
            .map(|k| KernelEntry {
                tag: k.represents().to_string(),
                rows: k.rows().to_vec(),
            })
            .collect(),
        joint_links: links.to_vec(),
        referents: has_referents.then_some(referents),
    })
}
