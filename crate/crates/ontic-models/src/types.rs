//! Core data types for finite ontic models.
//!
//! An ontic model assigns to a quantum system a finite label set Λ of ontic
//! states, probability measures over Λ for preparations, outcome
//! distributions conditional on the ontic state for measurements, and
//! stochastic kernels on Λ for transformations. All weights are stored
//! densely, aligned with the space's label order, and every stochastic
//! object is validated at construction time.
//!
//! The quantum side of every check lives in a [`QuantumRegistry`]: model
//! components carry string tags (`represents`) that the registry resolves to
//! concrete states, observables, and unitaries, so the same model can be
//! checked against independently constructed quantum referents.

use std::collections::{BTreeMap, BTreeSet};

use quantum_core::numeric::CompensatedSum;
use quantum_core::{
    born_distribution, policy, Complex64, MultiIndex, ProjectorObservable, SparseState,
    StructuredUnitary,
};

use crate::error::{OnticError, Result};

/// Finite set of ontic-state labels; the order is the storage order for all
/// weight vectors defined over the space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OnticSpace {
    labels: Vec<String>,
}

impl OnticSpace {
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(OnticError::EmptySpace);
        }
        let mut seen = BTreeSet::new();
        for label in &labels {
            if !seen.insert(label.as_str()) {
                return Err(OnticError::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        Ok(OnticSpace { labels })
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, index: usize) -> &str {
        &self.labels[index]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }
}

fn check_distribution(what: &str, labels: &[String], weights: &[f64]) -> Result<()> {
    if weights.len() != labels.len() {
        return Err(OnticError::LengthMismatch {
            what: what.to_string(),
            expected: labels.len(),
            got: weights.len(),
        });
    }
    let mut total = CompensatedSum::new();
    for (label, &w) in labels.iter().zip(weights) {
        if !w.is_finite() || w < 0.0 {
            return Err(OnticError::BadWeight {
                what: what.to_string(),
                label: label.clone(),
                value: w,
            });
        }
        total.add(w);
    }
    let tolerance = policy::current().tol_exact;
    let sum = total.value();
    if (sum - 1.0).abs() > tolerance {
        return Err(OnticError::WeightSum {
            what: what.to_string(),
            sum,
            tolerance,
        });
    }
    Ok(())
}

/// Probability measure over an ontic space, tagged with the quantum state it
/// is a preparation of.
#[derive(Clone, Debug, PartialEq)]
pub struct PreparationMeasure {
    space: OnticSpace,
    weights: Vec<f64>,
    represents: String,
}

impl PreparationMeasure {
    pub fn new(space: OnticSpace, weights: Vec<f64>, represents: impl Into<String>) -> Result<Self> {
        let represents = represents.into();
        check_distribution(
            &format!("preparation `{represents}`"),
            space.labels(),
            &weights,
        )?;
        Ok(PreparationMeasure {
            space,
            weights,
            represents,
        })
    }

    /// Point measure concentrated on one label.
    pub fn dirac(space: OnticSpace, label: &str, represents: impl Into<String>) -> Result<Self> {
        let position = space.index_of(label).ok_or_else(|| OnticError::MissingComponent {
            detail: format!("label `{label}` is not in the ontic space"),
        })?;
        let mut weights = vec![0.0; space.len()];
        weights[position] = 1.0;
        PreparationMeasure::new(space, weights, represents)
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn weight(&self, index: usize) -> f64 {
        self.weights[index]
    }

    pub fn represents(&self) -> &str {
        &self.represents
    }
}

/// Outcome distribution conditional on the ontic state, tagged with the
/// observable it responds to. `rows[λ][a]` is the probability of outcome `a`
/// given ontic state `λ`.
#[derive(Clone, Debug, PartialEq)]
pub struct ResponseFunction {
    space: OnticSpace,
    outcomes: Vec<String>,
    rows: Vec<Vec<f64>>,
    represents: String,
}

impl ResponseFunction {
    pub fn new(
        space: OnticSpace,
        outcomes: Vec<String>,
        rows: Vec<Vec<f64>>,
        represents: impl Into<String>,
    ) -> Result<Self> {
        let represents = represents.into();
        if outcomes.is_empty() {
            return Err(OnticError::NoOutcomes);
        }
        let mut seen = BTreeSet::new();
        for outcome in &outcomes {
            if !seen.insert(outcome.as_str()) {
                return Err(OnticError::DuplicateOutcome {
                    label: outcome.clone(),
                });
            }
        }
        if rows.len() != space.len() {
            return Err(OnticError::LengthMismatch {
                what: format!("response `{represents}` rows"),
                expected: space.len(),
                got: rows.len(),
            });
        }
        for (label, row) in space.labels().iter().zip(&rows) {
            check_distribution(
                &format!("response `{represents}` row for `{label}`"),
                &outcomes,
                row,
            )?;
        }
        Ok(ResponseFunction {
            space,
            outcomes,
            rows,
            represents,
        })
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn outcomes(&self) -> &[String] {
        &self.outcomes
    }

    pub fn outcome_index(&self, outcome: &str) -> Option<usize> {
        self.outcomes.iter().position(|o| o == outcome)
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Probability of the outcome with index `outcome` given ontic state
    /// `label` (both positional).
    pub fn prob(&self, label: usize, outcome: usize) -> f64 {
        self.rows[label][outcome]
    }

    pub fn represents(&self) -> &str {
        &self.represents
    }
}

/// Stochastic kernel from one ontic space to another, tagged with the
/// unitary it implements (or, for appenders, the preparation it appends).
/// `rows[λ][λ̃]` is the transition probability from source `λ` to target `λ̃`.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformationKernel {
    source: OnticSpace,
    target: OnticSpace,
    rows: Vec<Vec<f64>>,
    represents: String,
}

impl TransformationKernel {
    pub fn new(
        source: OnticSpace,
        target: OnticSpace,
        rows: Vec<Vec<f64>>,
        represents: impl Into<String>,
    ) -> Result<Self> {
        let represents = represents.into();
        if rows.len() != source.len() {
            return Err(OnticError::LengthMismatch {
                what: format!("kernel `{represents}` rows"),
                expected: source.len(),
                got: rows.len(),
            });
        }
        for (label, row) in source.labels().iter().zip(&rows) {
            check_distribution(
                &format!("kernel `{represents}` row for `{label}`"),
                target.labels(),
                row,
            )?;
        }
        Ok(TransformationKernel {
            source,
            target,
            rows,
            represents,
        })
    }

    /// Identity kernel on a space.
    pub fn identity(space: OnticSpace, represents: impl Into<String>) -> Self {
        let n = space.len();
        let rows = (0..n)
            .map(|i| {
                let mut row = vec![0.0; n];
                row[i] = 1.0;
                row
            })
            .collect();
        TransformationKernel {
            source: space.clone(),
            target: space,
            rows,
            represents: represents.into(),
        }
    }

    pub fn source(&self) -> &OnticSpace {
        &self.source
    }

    pub fn target(&self) -> &OnticSpace {
        &self.target
    }

    pub fn rows(&self) -> &[Vec<f64>] {
        &self.rows
    }

    /// Transition probability from source index `from` to target index `to`.
    pub fn prob(&self, from: usize, to: usize) -> f64 {
        self.rows[from][to]
    }

    pub fn represents(&self) -> &str {
        &self.represents
    }
}

/// Ontic model for one quantum system: a space plus the preparations,
/// responses, and in-space transformation kernels defined over it. Several
/// preparations or responses may carry the same tag (contextuality); checks
/// quantify over all of them.
#[derive(Clone, Debug, PartialEq)]
pub struct OnticModel {
    shape: Vec<u32>,
    space: OnticSpace,
    preparations: Vec<PreparationMeasure>,
    responses: Vec<ResponseFunction>,
    kernels: Vec<TransformationKernel>,
}

impl OnticModel {
    pub fn new(
        shape: Vec<u32>,
        space: OnticSpace,
        preparations: Vec<PreparationMeasure>,
        responses: Vec<ResponseFunction>,
        kernels: Vec<TransformationKernel>,
    ) -> Result<Self> {
        for prep in &preparations {
            if prep.space() != &space {
                return Err(OnticError::SpaceMismatch {
                    what: format!("preparation `{}`", prep.represents()),
                });
            }
        }
        for resp in &responses {
            if resp.space() != &space {
                return Err(OnticError::SpaceMismatch {
                    what: format!("response `{}`", resp.represents()),
                });
            }
        }
        for kernel in &kernels {
            if kernel.source() != &space || kernel.target() != &space {
                return Err(OnticError::SpaceMismatch {
                    what: format!("kernel `{}`", kernel.represents()),
                });
            }
        }
        Ok(OnticModel {
            shape,
            space,
            preparations,
            responses,
            kernels,
        })
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    pub fn space(&self) -> &OnticSpace {
        &self.space
    }

    pub fn preparations(&self) -> &[PreparationMeasure] {
        &self.preparations
    }

    pub fn responses(&self) -> &[ResponseFunction] {
        &self.responses
    }

    pub fn kernels(&self) -> &[TransformationKernel] {
        &self.kernels
    }

    pub fn preparations_for(&self, tag: &str) -> Vec<&PreparationMeasure> {
        self.preparations
            .iter()
            .filter(|p| p.represents() == tag)
            .collect()
    }

    pub fn responses_for(&self, tag: &str) -> Vec<&ResponseFunction> {
        self.responses
            .iter()
            .filter(|r| r.represents() == tag)
            .collect()
    }

    pub fn kernels_for(&self, tag: &str) -> Vec<&TransformationKernel> {
        self.kernels
            .iter()
            .filter(|k| k.represents() == tag)
            .collect()
    }

    /// First preparation carrying the tag, or an error naming it.
    pub fn preparation(&self, tag: &str) -> Result<&PreparationMeasure> {
        self.preparations
            .iter()
            .find(|p| p.represents() == tag)
            .ok_or_else(|| OnticError::MissingComponent {
                detail: format!("no preparation tagged `{tag}` in the model"),
            })
    }

    /// First response carrying the tag, or an error naming it.
    pub fn response(&self, tag: &str) -> Result<&ResponseFunction> {
        self.responses
            .iter()
            .find(|r| r.represents() == tag)
            .ok_or_else(|| OnticError::MissingComponent {
                detail: format!("no response tagged `{tag}` in the model"),
            })
    }

    /// First kernel carrying the tag, or an error naming it.
    pub fn kernel(&self, tag: &str) -> Result<&TransformationKernel> {
        self.kernels
            .iter()
            .find(|k| k.represents() == tag)
            .ok_or_else(|| OnticError::MissingComponent {
                detail: format!("no kernel tagged `{tag}` in the model"),
            })
    }

    pub fn push_preparation(&mut self, prep: PreparationMeasure) -> Result<()> {
        if prep.space() != &self.space {
            return Err(OnticError::SpaceMismatch {
                what: format!("preparation `{}`", prep.represents()),
            });
        }
        self.preparations.push(prep);
        Ok(())
    }
}

/// Registry of quantum referents that model tags resolve against. Pure
/// states, observables, and unitaries are stored directly; mixed states are
/// stored as convex combinations of pure tags.
#[derive(Clone, Debug, Default)]
pub struct QuantumRegistry {
    states: BTreeMap<String, SparseState>,
    mixtures: BTreeMap<String, Vec<(f64, String)>>,
    observables: BTreeMap<String, ProjectorObservable>,
    unitaries: BTreeMap<String, StructuredUnitary>,
}

impl QuantumRegistry {
    pub fn new() -> Self {
        QuantumRegistry::default()
    }

    pub fn register_state(&mut self, tag: impl Into<String>, state: SparseState) -> Result<()> {
        let tag = tag.into();
        if self.states.contains_key(&tag) || self.mixtures.contains_key(&tag) {
            return Err(OnticError::DuplicateTag {
                kind: "state".into(),
                tag,
            });
        }
        self.states.insert(tag, state);
        Ok(())
    }

    /// Register a mixed state as a convex combination of already-registered
    /// pure tags.
    pub fn register_mixture(
        &mut self,
        tag: impl Into<String>,
        components: Vec<(f64, String)>,
    ) -> Result<()> {
        let tag = tag.into();
        if self.states.contains_key(&tag) || self.mixtures.contains_key(&tag) {
            return Err(OnticError::DuplicateTag {
                kind: "state".into(),
                tag,
            });
        }
        if components.is_empty() {
            return Err(OnticError::InvalidArgument {
                detail: format!("mixture `{tag}` has no components"),
            });
        }
        let mut total = CompensatedSum::new();
        let mut shape: Option<Vec<u32>> = None;
        for (weight, pure_tag) in &components {
            if !weight.is_finite() || *weight < 0.0 {
                return Err(OnticError::BadWeight {
                    what: format!("mixture `{tag}`"),
                    label: pure_tag.clone(),
                    value: *weight,
                });
            }
            total.add(*weight);
            let component = self.state(pure_tag)?;
            match &shape {
                None => shape = Some(component.shape().to_vec()),
                Some(s) if s.as_slice() == component.shape() => {}
                Some(_) => {
                    return Err(OnticError::InvalidArgument {
                        detail: format!(
                            "mixture `{tag}` mixes states of different shapes"
                        ),
                    })
                }
            }
        }
        let tolerance = policy::current().tol_exact;
        if (total.value() - 1.0).abs() > tolerance {
            return Err(OnticError::WeightSum {
                what: format!("mixture `{tag}`"),
                sum: total.value(),
                tolerance,
            });
        }
        self.mixtures.insert(tag, components);
        Ok(())
    }

    pub fn register_observable(
        &mut self,
        tag: impl Into<String>,
        observable: ProjectorObservable,
    ) -> Result<()> {
        let tag = tag.into();
        if self.observables.contains_key(&tag) {
            return Err(OnticError::DuplicateTag {
                kind: "observable".into(),
                tag,
            });
        }
        self.observables.insert(tag, observable);
        Ok(())
    }

    pub fn register_unitary(
        &mut self,
        tag: impl Into<String>,
        unitary: StructuredUnitary,
    ) -> Result<()> {
        let tag = tag.into();
        if self.unitaries.contains_key(&tag) {
            return Err(OnticError::DuplicateTag {
                kind: "unitary".into(),
                tag,
            });
        }
        self.unitaries.insert(tag, unitary);
        Ok(())
    }

    /// Resolve a tag to a pure state.
    pub fn state(&self, tag: &str) -> Result<&SparseState> {
        self.states.get(tag).ok_or_else(|| OnticError::UnresolvableTag {
            kind: "pure state".into(),
            tag: tag.into(),
        })
    }

    pub fn observable(&self, tag: &str) -> Result<&ProjectorObservable> {
        self.observables
            .get(tag)
            .ok_or_else(|| OnticError::UnresolvableTag {
                kind: "observable".into(),
                tag: tag.into(),
            })
    }

    pub fn unitary(&self, tag: &str) -> Result<&StructuredUnitary> {
        self.unitaries
            .get(tag)
            .ok_or_else(|| OnticError::UnresolvableTag {
                kind: "unitary".into(),
                tag: tag.into(),
            })
    }

    pub fn is_pure_tag(&self, tag: &str) -> bool {
        self.states.contains_key(tag)
    }

    pub fn state_tags(&self) -> impl Iterator<Item = &str> {
        self.states.keys().map(String::as_str)
    }

    pub fn observable_tags(&self) -> impl Iterator<Item = &str> {
        self.observables.keys().map(String::as_str)
    }

    pub fn unitary_tags(&self) -> impl Iterator<Item = &str> {
        self.unitaries.keys().map(String::as_str)
    }

    pub fn mixture_components(&self, tag: &str) -> Option<&[(f64, String)]> {
        self.mixtures.get(tag).map(Vec::as_slice)
    }

    /// Resolve a tag to a density: a convex combination of pure states.
    pub fn density(&self, tag: &str) -> Result<Vec<(f64, &SparseState)>> {
        if let Some(state) = self.states.get(tag) {
            return Ok(vec![(1.0, state)]);
        }
        if let Some(components) = self.mixtures.get(tag) {
            let mut out = Vec::with_capacity(components.len());
            for (weight, pure_tag) in components {
                out.push((*weight, self.state(pure_tag)?));
            }
            return Ok(out);
        }
        Err(OnticError::UnresolvableTag {
            kind: "state".into(),
            tag: tag.into(),
        })
    }

    /// Hilbert-space shape of the state a tag resolves to.
    pub fn state_shape(&self, tag: &str) -> Result<Vec<u32>> {
        Ok(self.density(tag)?[0].1.shape().to_vec())
    }

    /// Born distribution of the state behind `state_tag` for the observable
    /// behind `observable_tag`, in the observable's branch order.
    pub fn born(&self, state_tag: &str, observable_tag: &str) -> Result<Vec<(String, f64)>> {
        let observable = self.observable(observable_tag)?;
        let density = self.density(state_tag)?;
        let mut acc: Vec<(String, f64)> = observable
            .branches()
            .iter()
            .map(|b| (b.label.clone(), 0.0))
            .collect();
        for (weight, component) in density {
            for (slot, (_, p)) in born_distribution(component, observable)?.iter().enumerate() {
                acc[slot].1 += weight * p;
            }
        }
        Ok(acc)
    }

    /// Born distribution after evolving the state with the unitary behind
    /// `unitary_tag`.
    pub fn born_after(
        &self,
        state_tag: &str,
        unitary_tag: &str,
        observable_tag: &str,
    ) -> Result<Vec<(String, f64)>> {
        let observable = self.observable(observable_tag)?;
        let unitary = self.unitary(unitary_tag)?;
        let density = self.density(state_tag)?;
        let mut acc: Vec<(String, f64)> = observable
            .branches()
            .iter()
            .map(|b| (b.label.clone(), 0.0))
            .collect();
        for (weight, component) in density {
            let evolved = unitary.apply(component)?;
            for (slot, (_, p)) in born_distribution(&evolved, observable)?.iter().enumerate() {
                acc[slot].1 += weight * p;
            }
        }
        Ok(acc)
    }
}

/// Density matrix of a convex combination of sparse pure states, as a sparse
/// matrix over pairs of basis indices. Used to compare densities without any
/// sensitivity to global phases.
fn density_matrix(
    components: &[(f64, &SparseState)],
) -> BTreeMap<(MultiIndex, MultiIndex), Complex64> {
    let mut out: BTreeMap<(MultiIndex, MultiIndex), Complex64> = BTreeMap::new();
    for (weight, state) in components {
        for (row, a_row) in state.amplitudes() {
            for (col, a_col) in state.amplitudes() {
                let entry = out
                    .entry((row.clone(), col.clone()))
                    .or_insert(Complex64::new(0.0, 0.0));
                *entry += *weight * *a_row * a_col.conj();
            }
        }
    }
    out
}

fn densities_match(
    a: &[(f64, &SparseState)],
    b: &[(f64, &SparseState)],
    tolerance: f64,
) -> bool {
    let ma = density_matrix(a);
    let mb = density_matrix(b);
    let zero = Complex64::new(0.0, 0.0);
    let keys: BTreeSet<_> = ma.keys().chain(mb.keys()).cloned().collect();
    keys.into_iter().all(|key| {
        let va = ma.get(&key).copied().unwrap_or(zero);
        let vb = mb.get(&key).copied().unwrap_or(zero);
        (va - vb).norm() <= tolerance
    })
}

/// Collection of ontic models for systems of different shapes, together with
/// appender kernels that embed a single-system model into a joint model by
/// adjoining an independently prepared second system.
#[derive(Clone, Debug, Default)]
pub struct CompleteOnticModel {
    models: BTreeMap<Vec<u32>, OnticModel>,
    appenders: BTreeMap<(Vec<u32>, String), TransformationKernel>,
}

impl CompleteOnticModel {
    pub fn new(models: BTreeMap<Vec<u32>, OnticModel>) -> Result<Self> {
        for (shape, model) in &models {
            if model.shape() != shape.as_slice() {
                return Err(OnticError::InvalidArgument {
                    detail: format!(
                        "model keyed by shape {shape:?} declares shape {:?}",
                        model.shape()
                    ),
                });
            }
        }
        Ok(CompleteOnticModel {
            models,
            appenders: BTreeMap::new(),
        })
    }

    pub fn models(&self) -> &BTreeMap<Vec<u32>, OnticModel> {
        &self.models
    }

    pub fn appenders(&self) -> &BTreeMap<(Vec<u32>, String), TransformationKernel> {
        &self.appenders
    }

    pub fn model(&self, shape: &[u32]) -> Result<&OnticModel> {
        self.models
            .get(shape)
            .ok_or_else(|| OnticError::MissingComponent {
                detail: format!("no model for system shape {shape:?}"),
            })
    }

    pub fn appender(&self, shape: &[u32], prep_tag: &str) -> Result<&TransformationKernel> {
        self.appenders
            .get(&(shape.to_vec(), prep_tag.to_string()))
            .ok_or_else(|| OnticError::MissingComponent {
                detail: format!(
                    "no appender for system shape {shape:?} and ancilla preparation `{prep_tag}`"
                ),
            })
    }

    pub fn insert_appender(
        &mut self,
        shape: Vec<u32>,
        prep_tag: impl Into<String>,
        kernel: TransformationKernel,
    ) -> Result<()> {
        let prep_tag = prep_tag.into();
        if let Some(model) = self.models.get(&shape) {
            if kernel.source() != model.space() {
                return Err(OnticError::SpaceMismatch {
                    what: format!("appender for shape {shape:?} and `{prep_tag}`"),
                });
            }
        }
        self.appenders.insert((shape, prep_tag), kernel);
        Ok(())
    }

    /// Check the completeness condition: for every appender keyed by
    /// (shape₁, P₂) and every preparation μ of the shape₁ model, the
    /// pushforward of μ through the appender must equal a preparation of the
    /// joint model whose tag resolves to the product density ρ₁ ⊗ ρ₂.
    pub fn validate(&self, registry: &QuantumRegistry) -> Result<()> {
        let tol = policy::current();
        for ((shape1, p2_tag), appender) in &self.appenders {
            let model1 = self.model(shape1)?;
            if appender.source() != model1.space() {
                return Err(OnticError::SpaceMismatch {
                    what: format!("appender for shape {shape1:?} and `{p2_tag}`"),
                });
            }
            let ancilla = registry.density(p2_tag)?;
            let shape2 = ancilla[0].1.shape().to_vec();
            let joint_shape: Vec<u32> = shape1.iter().chain(shape2.iter()).copied().collect();
            let joint = self.model(&joint_shape)?;
            if appender.target() != joint.space() {
                return Err(OnticError::SpaceMismatch {
                    what: format!("appender target for shape {shape1:?} and `{p2_tag}`"),
                });
            }
            for prep in model1.preparations() {
                let pushed = crate::kernel_algebra::pushforward_measure(prep, appender)?;
                let expected = product_density(registry, prep.represents(), p2_tag)?;
                let matched = joint.preparations().iter().any(|candidate| {
                    if measure_l1(candidate.weights(), pushed.weights()) > tol.tol_composed {
                        return false;
                    }
                    match registry.density(candidate.represents()) {
                        Ok(density) => {
                            let expected_refs: Vec<(f64, &SparseState)> =
                                expected.iter().map(|(w, s)| (*w, s)).collect();
                            densities_match(&density, &expected_refs, tol.tol_composed)
                        }
                        Err(_) => false,
                    }
                });
                if !matched {
                    return Err(OnticError::MissingComponent {
                        detail: format!(
                            "joint model for shape {joint_shape:?} has no preparation matching \
                             the pushforward of `{}` through the appender for `{p2_tag}`",
                            prep.represents()
                        ),
                    });
                }
            }
        }
        Ok(())
    }
}

/// Components of the density ρ₁ ⊗ [φ₂] where ρ₁ is the density behind
/// `tag1` and φ₂ the state behind `tag2`.
fn product_density(
    registry: &QuantumRegistry,
    tag1: &str,
    tag2: &str,
) -> Result<Vec<(f64, SparseState)>> {
    let d1 = registry.density(tag1)?;
    let d2 = registry.density(tag2)?;
    let mut out = Vec::with_capacity(d1.len() * d2.len());
    for (w1, s1) in &d1 {
        for (w2, s2) in &d2 {
            out.push((w1 * w2, quantum_core::tensor_product(s1, s2)?));
        }
    }
    Ok(out)
}

fn measure_l1(a: &[f64], b: &[f64]) -> f64 {
    let mut acc = CompensatedSum::new();
    for (x, y) in a.iter().zip(b) {
        acc.add((x - y).abs());
    }
    acc.value()
}
