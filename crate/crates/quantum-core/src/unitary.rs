//! Structured unitaries: basis permutations plus two-level Givens rotations.
//!
//! Every unitary in the verification pipeline is specified by its action on
//! basis vectors — a relabelling of indices on a subset of the tensor factors,
//! or a rotation inside the span of two basis vectors. Storing that action
//! directly (instead of a dense matrix) keeps application cost proportional to
//! the state's support and is the only representation that survives the
//! embezzlement dimensions.
//!
//! A permutation rule set may be partial (sources and targets need not be the
//! same set of sub-tuples). It is completed to a genuine permutation by
//! closing each source->...->target chain into a cycle (the chain's final
//! target maps back to its initial source) and acting as the identity
//! elsewhere. A plain "identity on unmatched labels" default would send two
//! labels to the same place whenever some rule target is not itself a rule
//! source, so the closure is what keeps the operator unitary on the whole
//! space while agreeing with the specified action everywhere it is specified.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::index::MultiIndex;
use crate::state::SparseState;

/// One rule of a structured unitary, acting on the unitary's factor positions.
#[derive(Clone, Debug)]
pub enum UnitaryRule {
    /// Basis relabelling: |from> -> |to>.
    Permutation { from: Vec<u32>, to: Vec<u32> },
    /// Givens rotation in span{|a>, |b>}:
    /// |a> -> cos(theta)|a> + sin(theta)|b>,
    /// |b> -> cos(theta)|b> - sin(theta)|a>.
    Rotation {
        a: Vec<u32>,
        b: Vec<u32>,
        theta: f64,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum RotationRole {
    First,
    Second,
}

/// A unitary given by permutation/rotation rules on a subset of factors,
/// acting as the identity on every basis vector no rule touches.
#[derive(Clone, Debug)]
pub struct StructuredUnitary {
    shape: Vec<u32>,
    /// 0-based factor positions the rules read and write.
    positions: Vec<usize>,
    perm_forward: BTreeMap<Vec<u32>, Vec<u32>>,
    perm_backward: BTreeMap<Vec<u32>, Vec<u32>>,
    rotations: Vec<(Vec<u32>, Vec<u32>, f64)>,
    rotation_index: BTreeMap<Vec<u32>, (usize, RotationRole)>,
}

impl StructuredUnitary {
    /// The identity operator on a space.
    pub fn identity(shape: Vec<u32>) -> Self {
        StructuredUnitary {
            shape,
            positions: Vec::new(),
            perm_forward: BTreeMap::new(),
            perm_backward: BTreeMap::new(),
            rotations: Vec::new(),
            rotation_index: BTreeMap::new(),
        }
    }

    /// Compile a rule list into a unitary. All rules address sub-tuples on the
    /// same `positions`. Contradictions (two rules claiming the same source,
    /// two rules producing the same target, a rotation touching a permutation
    /// label) are construction-time errors.
    pub fn new(shape: Vec<u32>, positions: Vec<usize>, rules: Vec<UnitaryRule>) -> Result<Self> {
        if rules.is_empty() {
            return Ok(StructuredUnitary::identity(shape));
        }
        if positions.is_empty() {
            return Err(QuantumError::InvalidArgument {
                detail: "non-identity rules require at least one factor position".into(),
            });
        }
        {
            let mut seen = std::collections::BTreeSet::new();
            for &p in &positions {
                if p >= shape.len() {
                    return Err(QuantumError::InvalidArgument {
                        detail: format!(
                            "factor position {p} out of range for shape of arity {}",
                            shape.len()
                        ),
                    });
                }
                if !seen.insert(p) {
                    return Err(QuantumError::InvalidArgument {
                        detail: format!("factor position {p} listed twice"),
                    });
                }
            }
        }

        let check_tuple = |tuple: &[u32]| -> Result<()> {
            if tuple.len() != positions.len() {
                return Err(QuantumError::ArityMismatch {
                    shape_len: positions.len(),
                    index_len: tuple.len(),
                });
            }
            for (k, (&index, &p)) in tuple.iter().zip(&positions).enumerate() {
                let dimension = shape[p];
                if index == 0 || index > dimension {
                    return Err(QuantumError::IndexOutOfRange {
                        position: positions[k],
                        index,
                        dimension,
                    });
                }
            }
            Ok(())
        };

        let mut perm_forward: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        let mut perm_backward: BTreeMap<Vec<u32>, Vec<u32>> = BTreeMap::new();
        let mut rotations: Vec<(Vec<u32>, Vec<u32>, f64)> = Vec::new();
        let mut rotation_index: BTreeMap<Vec<u32>, (usize, RotationRole)> = BTreeMap::new();

        for rule in &rules {
            match rule {
                UnitaryRule::Permutation { from, to } => {
                    check_tuple(from)?;
                    check_tuple(to)?;
                    if rotation_index.contains_key(from) || rotation_index.contains_key(to) {
                        return Err(QuantumError::ContradictoryRules {
                            detail: format!(
                                "permutation {from:?} -> {to:?} touches a rotation label"
                            ),
                        });
                    }
                    if perm_forward.insert(from.clone(), to.clone()).is_some() {
                        return Err(QuantumError::ContradictoryRules {
                            detail: format!("two rules map the source {from:?}"),
                        });
                    }
                    if perm_backward.insert(to.clone(), from.clone()).is_some() {
                        return Err(QuantumError::ContradictoryRules {
                            detail: format!("two rules produce the target {to:?}"),
                        });
                    }
                }
                UnitaryRule::Rotation { a, b, theta } => {
                    check_tuple(a)?;
                    check_tuple(b)?;
                    if a == b {
                        return Err(QuantumError::ContradictoryRules {
                            detail: format!("rotation with coinciding labels {a:?}"),
                        });
                    }
                    for label in [a, b] {
                        if perm_forward.contains_key(label)
                            || perm_backward.contains_key(label)
                            || rotation_index.contains_key(label)
                        {
                            return Err(QuantumError::ContradictoryRules {
                                detail: format!("rotation label {label:?} already claimed"),
                            });
                        }
                    }
                    let slot = rotations.len();
                    rotations.push((a.clone(), b.clone(), *theta));
                    rotation_index.insert(a.clone(), (slot, RotationRole::First));
                    rotation_index.insert(b.clone(), (slot, RotationRole::Second));
                }
            }
        }

        Ok(StructuredUnitary {
            shape,
            positions,
            perm_forward,
            perm_backward,
            rotations,
            rotation_index,
        })
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    /// 0-based factor positions the rules act on.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    /// The permutation part as (source, target) sub-tuples, including the
    /// chain-closure entries synthesized at construction time.
    pub fn permutation_pairs(&self) -> impl Iterator<Item = (&[u32], &[u32])> {
        self.perm_forward
            .iter()
            .map(|(from, to)| (from.as_slice(), to.as_slice()))
    }

    /// The rotation rules as (a, b, theta) sub-tuples.
    pub fn rotation_rules(&self) -> impl Iterator<Item = (&[u32], &[u32], f64)> {
        self.rotations
            .iter()
            .map(|(a, b, theta)| (a.as_slice(), b.as_slice(), *theta))
    }

    /// The inverse unitary (reversed permutation, negated rotation angles).
    pub fn inverse(&self) -> StructuredUnitary {
        let mut rotation_index = BTreeMap::new();
        let rotations: Vec<_> = self
            .rotations
            .iter()
            .map(|(a, b, theta)| (a.clone(), b.clone(), -theta))
            .collect();
        for (slot, (a, b, _)) in rotations.iter().enumerate() {
            rotation_index.insert(a.clone(), (slot, RotationRole::First));
            rotation_index.insert(b.clone(), (slot, RotationRole::Second));
        }
        StructuredUnitary {
            shape: self.shape.clone(),
            positions: self.positions.clone(),
            perm_forward: self.perm_backward.clone(),
            perm_backward: self.perm_forward.clone(),
            rotations,
            rotation_index,
        }
    }

    /// Where a basis sub-tuple is sent by the permutation part, including the
    /// chain closure for targets that are not themselves sources.
    fn permute_sub(&self, sub: &[u32]) -> Option<Vec<u32>> {
        if let Some(target) = self.perm_forward.get(sub) {
            return Some(target.clone());
        }
        if self.perm_backward.contains_key(sub) {
            // `sub` ends a chain: close the cycle by walking back to its start.
            let mut current = sub;
            while let Some(previous) = self.perm_backward.get(current) {
                current = previous;
            }
            return Some(current.to_vec());
        }
        None
    }

    /// Apply to a state. Support grows by at most a factor 2 per rotation rule.
    pub fn apply(&self, state: &SparseState) -> Result<SparseState> {
        if state.shape() != self.shape {
            return Err(QuantumError::ShapeMismatch {
                expected: self.shape.clone(),
                got: state.shape().to_vec(),
            });
        }
        let mut out: BTreeMap<MultiIndex, Complex64> = BTreeMap::new();
        let mut add = |index: MultiIndex, amp: Complex64| {
            *out.entry(index).or_insert(Complex64::new(0.0, 0.0)) += amp;
        };
        for (index, &amp) in state.amplitudes() {
            let sub = index.sub(&self.positions);
            if let Some(&(slot, role)) = self.rotation_index.get(&sub) {
                let (a, b, theta) = &self.rotations[slot];
                let (cos, sin) = (theta.cos(), theta.sin());
                let index_a = index.with_sub(&self.positions, a);
                let index_b = index.with_sub(&self.positions, b);
                match role {
                    RotationRole::First => {
                        // |a> -> cos|a> + sin|b>
                        add(index_a, amp * cos);
                        add(index_b, amp * sin);
                    }
                    RotationRole::Second => {
                        // |b> -> cos|b> - sin|a>
                        add(index_b, amp * cos);
                        add(index_a, -amp * sin);
                    }
                }
            } else if let Some(target) = self.permute_sub(&sub) {
                add(index.with_sub(&self.positions, &target), amp);
            } else {
                add(index.clone(), amp);
            }
        }
        SparseState::new(self.shape.clone(), out)
    }
}

/// Free-function form of [`StructuredUnitary::apply`].
pub fn apply_unitary(state: &SparseState, u: &StructuredUnitary) -> Result<SparseState> {
    u.apply(state)
}
