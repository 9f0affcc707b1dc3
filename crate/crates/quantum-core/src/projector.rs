//! Projectors and eigenvalue-labelled projector observables.
//!
//! Two projector flavours cover everything the verification needs:
//!
//! - [`ProductProjector`]: a tensor product of per-factor projectors (identity,
//!   a single basis vector, or a rank-1 vector projector). This is the shape of
//!   every correlation operator in the chained estimates, e.g. [U_a e_i (x) U_b e_j].
//! - [`BranchProjector`]: a member of an observable branch, either a rank-1
//!   projector onto an explicit sparse state or a basis-aligned slice (all basis
//!   vectors matching a set of fixed factor indices).
//!
//! Observables are finite families of mutually orthogonal branches whose
//! projectors jointly resolve the identity; that completeness is what makes
//! the Born distribution a probability distribution.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::index::{total_dimension, MultiIndex};
use crate::numeric::{CompensatedComplexSum, CompensatedSum};
use crate::policy;
use crate::state::SparseState;

/// Projector acting on a single tensor factor.
#[derive(Clone, Debug)]
pub enum FactorProjector {
    /// Identity on this factor.
    Id,
    /// Projector onto the basis vector with this 1-based index.
    Basis(u32),
    /// Rank-1 projector onto a unit vector, stored as sparse components
    /// (1-based basis index -> amplitude).
    Vector(BTreeMap<u32, Complex64>),
}

impl FactorProjector {
    /// Rank-1 projector onto a vector given as (index, amplitude) pairs.
    pub fn vector(components: impl IntoIterator<Item = (u32, Complex64)>) -> Self {
        FactorProjector::Vector(components.into_iter().collect())
    }
}

/// Tensor product of per-factor projectors.
#[derive(Clone, Debug)]
pub struct ProductProjector {
    factors: Vec<FactorProjector>,
}

impl ProductProjector {
    /// Validate that each vector factor is genuinely a projector (unit norm,
    /// so |v><v| squares to itself) and each basis index is nonzero.
    pub fn new(factors: Vec<FactorProjector>) -> Result<Self> {
        let tol = policy::current().tol_exact;
        for (position, factor) in factors.iter().enumerate() {
            match factor {
                FactorProjector::Id => {}
                FactorProjector::Basis(index) => {
                    if *index == 0 {
                        return Err(QuantumError::IndexOutOfRange {
                            position,
                            index: 0,
                            dimension: 0,
                        });
                    }
                }
                FactorProjector::Vector(components) => {
                    let mut norm_sqr = CompensatedSum::new();
                    for amp in components.values() {
                        norm_sqr.add(amp.norm_sqr());
                    }
                    let defect = (norm_sqr.value() - 1.0).abs();
                    if defect > tol {
                        return Err(QuantumError::NotAProjector { position, defect });
                    }
                }
            }
        }
        Ok(ProductProjector { factors })
    }

    /// Identity on `arity` factors.
    pub fn identity(arity: usize) -> Self {
        ProductProjector {
            factors: vec![FactorProjector::Id; arity],
        }
    }

    pub fn factors(&self) -> &[FactorProjector] {
        &self.factors
    }

    fn validate_against_shape(&self, shape: &[u32]) -> Result<()> {
        if self.factors.len() != shape.len() {
            return Err(QuantumError::ArityMismatch {
                shape_len: shape.len(),
                index_len: self.factors.len(),
            });
        }
        for (position, (factor, &dimension)) in self.factors.iter().zip(shape).enumerate() {
            let max_index = match factor {
                FactorProjector::Id => None,
                FactorProjector::Basis(index) => Some(*index),
                FactorProjector::Vector(components) => components.keys().max().copied(),
            };
            if let Some(index) = max_index {
                if index == 0 || index > dimension {
                    return Err(QuantumError::IndexOutOfRange {
                        position,
                        index,
                        dimension,
                    });
                }
            }
        }
        Ok(())
    }
}

/// Apply a product projector to a state, returning the (generally
/// non-normalized) projected amplitudes.
fn project_product(
    state: &SparseState,
    projector: &ProductProjector,
) -> Result<BTreeMap<MultiIndex, Complex64>> {
    projector.validate_against_shape(state.shape())?;

    let vector_positions: Vec<usize> = projector
        .factors
        .iter()
        .enumerate()
        .filter_map(|(p, f)| matches!(f, FactorProjector::Vector(_)).then_some(p))
        .collect();

    // Group amplitudes by their label outside the vector factors. Within a
    // group the projection is rank-1: the group collapses onto (x) v_f with
    // coefficient sum_x a_x * prod_f conj(v_f[x_f]).
    let mut groups: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    'amp: for (index, amp) in state.amplitudes() {
        let mut coeff = *amp;
        for (position, factor) in projector.factors.iter().enumerate() {
            match factor {
                FactorProjector::Id => {}
                FactorProjector::Basis(basis_index) => {
                    if index.get(position) != *basis_index {
                        continue 'amp;
                    }
                }
                FactorProjector::Vector(components) => {
                    match components.get(&index.get(position)) {
                        Some(v) => coeff *= v.conj(),
                        None => continue 'amp,
                    }
                }
            }
        }
        // group key: vector positions masked to 0 (0 is never a valid index)
        let key = index.with_sub(&vector_positions, &vec![0; vector_positions.len()]);
        *groups.entry(key).or_insert(Complex64::new(0.0, 0.0)) += coeff;
    }

    // Expand each group back over the product of the vector supports.
    let mut projected: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
    for (key, group_coeff) in groups {
        let mut expansion: Vec<(Vec<u32>, Complex64)> = vec![(Vec::new(), group_coeff)];
        for &position in &vector_positions {
            let FactorProjector::Vector(components) = &projector.factors[position] else {
                unreachable!("vector_positions only lists vector factors");
            };
            expansion = expansion
                .into_iter()
                .flat_map(|(prefix, coeff)| {
                    components.iter().map(move |(&basis_index, &v)| {
                        let mut next = prefix.clone();
                        next.push(basis_index);
                        (next, coeff * v)
                    })
                })
                .collect();
        }
        for (values, amp) in expansion {
            if amp.norm() == 0.0 {
                continue;
            }
            projected.insert(key.with_sub(&vector_positions, &values), amp);
        }
    }
    Ok(projected)
}

/// Expectation value <state| P |state> for a product projector.
///
/// Computed by projecting the state and taking the inner product with the
/// original; the imaginary residue of that inner product is asserted to be
/// below the exact tolerance before the real part is returned.
pub fn projector_expectation(state: &SparseState, projector: &ProductProjector) -> Result<f64> {
    let projected = project_product(state, projector)?;
    let mut acc = CompensatedComplexSum::new();
    for (index, amp) in &projected {
        let original = state.amp(index);
        if original != Complex64::new(0.0, 0.0) {
            acc.add(original.conj() * amp);
        }
    }
    let value = acc.value();
    let tolerance = policy::current().tol_exact;
    if value.im.abs() > tolerance {
        return Err(QuantumError::ImaginaryResidue {
            quantity: "projector expectation",
            residue: value.im.abs(),
            tolerance,
        });
    }
    Ok(value.re)
}

/// Basis-aligned slice projector: sum of |x><x| over every basis label whose
/// entries match the fixed constraints (0-based factor position -> 1-based index).
#[derive(Clone, Debug, Default)]
pub struct BasisSlice {
    constraints: BTreeMap<usize, u32>,
}

impl BasisSlice {
    pub fn new(constraints: impl IntoIterator<Item = (usize, u32)>) -> Self {
        BasisSlice {
            constraints: constraints.into_iter().collect(),
        }
    }

    pub fn constraints(&self) -> &BTreeMap<usize, u32> {
        &self.constraints
    }

    pub fn matches(&self, index: &MultiIndex) -> bool {
        self.constraints
            .iter()
            .all(|(&position, &value)| index.get(position) == value)
    }

    /// Rank of the projector within a space of the given shape:
    /// the product of the unconstrained factor dimensions.
    pub fn rank(&self, shape: &[u32]) -> u128 {
        shape
            .iter()
            .enumerate()
            .filter(|(position, _)| !self.constraints.contains_key(position))
            .map(|(_, &d)| d as u128)
            .product()
    }

    /// Two slices are orthogonal exactly when they disagree on some factor
    /// they both constrain.
    pub fn orthogonal_to(&self, other: &BasisSlice) -> bool {
        self.constraints.iter().any(|(position, value)| {
            other
                .constraints
                .get(position)
                .is_some_and(|other_value| other_value != value)
        })
    }

    fn validate_against_shape(&self, shape: &[u32]) -> Result<()> {
        for (&position, &index) in &self.constraints {
            if position >= shape.len() {
                return Err(QuantumError::ArityMismatch {
                    shape_len: shape.len(),
                    index_len: position + 1,
                });
            }
            if index == 0 || index > shape[position] {
                return Err(QuantumError::IndexOutOfRange {
                    position,
                    index,
                    dimension: shape[position],
                });
            }
        }
        Ok(())
    }
}

/// One projector inside an observable branch.
#[derive(Clone, Debug)]
pub enum BranchProjector {
    /// Rank-1 projector |phi><phi| onto an explicit unit-norm state.
    Rank1(SparseState),
    /// Basis-aligned slice (arbitrary rank).
    Slice(BasisSlice),
}

impl BranchProjector {
    fn rank(&self, shape: &[u32]) -> u128 {
        match self {
            BranchProjector::Rank1(_) => 1,
            BranchProjector::Slice(slice) => slice.rank(shape),
        }
    }

    fn expectation(&self, state: &SparseState) -> Result<f64> {
        match self {
            BranchProjector::Rank1(phi) => Ok(phi.inner(state)?.norm_sqr()),
            BranchProjector::Slice(slice) => {
                slice.validate_against_shape(state.shape())?;
                let mut acc = CompensatedSum::new();
                for (index, amp) in state.amplitudes() {
                    if slice.matches(index) {
                        acc.add(amp.norm_sqr());
                    }
                }
                Ok(acc.value())
            }
        }
    }

    /// Absolute overlap between two branch projectors (0 means orthogonal).
    fn overlap(&self, other: &BranchProjector) -> Result<f64> {
        match (self, other) {
            (BranchProjector::Rank1(a), BranchProjector::Rank1(b)) => Ok(a.inner(b)?.norm()),
            (BranchProjector::Rank1(phi), BranchProjector::Slice(slice))
            | (BranchProjector::Slice(slice), BranchProjector::Rank1(phi)) => {
                let mut acc = CompensatedSum::new();
                for (index, amp) in phi.amplitudes() {
                    if slice.matches(index) {
                        acc.add(amp.norm_sqr());
                    }
                }
                Ok(acc.value())
            }
            (BranchProjector::Slice(a), BranchProjector::Slice(b)) => {
                Ok(if a.orthogonal_to(b) { 0.0 } else { 1.0 })
            }
        }
    }
}

/// One eigenvalue branch: a label and the projectors spanning its eigenspace.
#[derive(Clone, Debug)]
pub struct Branch {
    pub label: String,
    pub members: Vec<BranchProjector>,
}

impl Branch {
    pub fn new(label: impl Into<String>, members: Vec<BranchProjector>) -> Self {
        Branch {
            label: label.into(),
            members,
        }
    }
}

/// Eigenvalue-labelled family of mutually orthogonal projectors resolving the
/// identity on its space.
#[derive(Clone, Debug)]
pub struct ProjectorObservable {
    shape: Vec<u32>,
    branches: Vec<Branch>,
}

impl ProjectorObservable {
    /// Validate orthogonality (all member pairs, within and across branches)
    /// and completeness (ranks sum to the space dimension).
    pub fn new(shape: Vec<u32>, branches: Vec<Branch>) -> Result<Self> {
        let tol = policy::current().tol_exact;
        let mut labelled: Vec<(String, &BranchProjector)> = Vec::new();
        for branch in &branches {
            for (m, member) in branch.members.iter().enumerate() {
                match member {
                    BranchProjector::Rank1(phi) => {
                        if phi.shape() != shape {
                            return Err(QuantumError::ShapeMismatch {
                                expected: shape.clone(),
                                got: phi.shape().to_vec(),
                            });
                        }
                    }
                    BranchProjector::Slice(slice) => slice.validate_against_shape(&shape)?,
                }
                labelled.push((format!("{}[{}]", branch.label, m), member));
            }
        }
        for (i, (name_i, proj_i)) in labelled.iter().enumerate() {
            for (name_j, proj_j) in &labelled[i + 1..] {
                let overlap = proj_i.overlap(proj_j)?;
                if overlap > tol {
                    return Err(QuantumError::NonOrthogonalBranches {
                        first: name_i.clone(),
                        second: name_j.clone(),
                        overlap,
                    });
                }
            }
        }
        let space_dim = total_dimension(&shape);
        let declared_rank: u128 = labelled.iter().map(|(_, p)| p.rank(&shape)).sum();
        if declared_rank != space_dim {
            return Err(QuantumError::IncompleteObservable {
                declared_rank,
                space_dim,
                missing: space_dim.saturating_sub(declared_rank),
            });
        }
        let mut seen = std::collections::BTreeSet::new();
        for branch in &branches {
            if !seen.insert(branch.label.clone()) {
                return Err(QuantumError::InvalidArgument {
                    detail: format!("duplicate branch label {:?}", branch.label),
                });
            }
        }
        Ok(ProjectorObservable { shape, branches })
    }

    /// Observable measuring the computational basis of one factor: branch i
    /// has label `prefix_i` and projects factor `position` onto basis index i.
    pub fn factor_basis(shape: Vec<u32>, position: usize, prefix: &str) -> Result<Self> {
        if position >= shape.len() {
            return Err(QuantumError::InvalidArgument {
                detail: format!(
                    "factor position {position} out of range for shape of arity {}",
                    shape.len()
                ),
            });
        }
        let dimension = shape[position];
        let branches = (1..=dimension)
            .map(|i| {
                Branch::new(
                    format!("{prefix}_{i}"),
                    vec![BranchProjector::Slice(BasisSlice::new([(position, i)]))],
                )
            })
            .collect();
        ProjectorObservable::new(shape, branches)
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    pub fn branches(&self) -> &[Branch] {
        &self.branches
    }

    pub fn labels(&self) -> Vec<&str> {
        self.branches.iter().map(|b| b.label.as_str()).collect()
    }
}

/// Born distribution of an observable in a state: probability of a label is
/// the squared norm of the branch-projected state. Probabilities must sum to
/// 1 within the composed tolerance.
pub fn born_distribution(
    state: &SparseState,
    observable: &ProjectorObservable,
) -> Result<Vec<(String, f64)>> {
    if state.shape() != observable.shape() {
        return Err(QuantumError::ShapeMismatch {
            expected: observable.shape().to_vec(),
            got: state.shape().to_vec(),
        });
    }
    let mut distribution = Vec::with_capacity(observable.branches().len());
    let mut total = CompensatedSum::new();
    for branch in observable.branches() {
        let mut probability = CompensatedSum::new();
        for member in &branch.members {
            probability.add(member.expectation(state)?);
        }
        let probability = probability.value();
        total.add(probability);
        distribution.push((branch.label.clone(), probability));
    }
    let defect = (total.value() - 1.0).abs();
    let tolerance = policy::current().tol_composed;
    if defect > tolerance {
        return Err(QuantumError::ProbabilityLeak { defect, tolerance });
    }
    Ok(distribution)
}
