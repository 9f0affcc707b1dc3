//! Outcome-block rotations and the rotated measurement pair.
//!
//! A rotation couples two outcomes (i, j) and (ĩ, j̃) of one party: it turns
//! the (slot, Schmidt) pattern (j, i) toward (j̃, ĩ) by an angle θ, leaving
//! the ladder register and the other party untouched. Measuring the rotated
//! observable at angle θ is realised by applying the rotation (after the
//! relabelling unitary) to the state and reading the unrotated projectors —
//! the conjugated-operator picture and this state picture give identical
//! Born values, and only the state picture keeps everything sparse.

use quantum_core::{projector_expectation, SparseState, StructuredUnitary, UnitaryRule};

use crate::config::EmbezzleConfig;
use crate::error::{EmbezzleError, Result};
use crate::observables::{joint_projector, left_projector, right_projector};
use crate::state::build_psi_f;

/// An ordered pair of distinct outcomes being rotated into each other.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RotationPair {
    i: u32,
    j: u64,
    i_tilde: u32,
    j_tilde: u64,
}

impl RotationPair {
    /// Validate (i, j) ≠ (ĩ, j̃) with j ≤ n_i and j̃ ≤ n_ĩ.
    pub fn new(config: &EmbezzleConfig, i: u32, j: u64, i_tilde: u32, j_tilde: u64) -> Result<Self> {
        for (weight, slot) in [(i, j), (i_tilde, j_tilde)] {
            let n = config.count(weight)?;
            if slot == 0 || slot > n {
                return Err(EmbezzleError::InvalidArgument {
                    detail: format!("slot {slot} out of range 1..={n} for weight {weight}"),
                });
            }
        }
        if (i, j) == (i_tilde, j_tilde) {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!("rotation endpoints coincide at ({i}, {j})"),
            });
        }
        Ok(RotationPair {
            i,
            j,
            i_tilde,
            j_tilde,
        })
    }

    /// The source outcome (i, j).
    pub fn from_outcome(&self) -> (u32, u64) {
        (self.i, self.j)
    }

    /// The destination outcome (ĩ, j̃).
    pub fn to_outcome(&self) -> (u32, u64) {
        (self.i_tilde, self.j_tilde)
    }
}

fn rotation_rule(pair: &RotationPair, theta: f64) -> Result<UnitaryRule> {
    let slot = |j: u64| {
        u32::try_from(j).map_err(|_| EmbezzleError::InvalidArgument {
            detail: format!("slot index {j} exceeds the factor index range"),
        })
    };
    Ok(UnitaryRule::Rotation {
        a: vec![slot(pair.j)?, pair.i],
        b: vec![slot(pair.j_tilde)?, pair.i_tilde],
        theta,
    })
}

/// The two single-party rotations at angle θ: the left one acts on positions
/// (2, 4) and the right one on positions (3, 5), each rotating the
/// (j, i) ↔ (j̃, ĩ) block and fixing every other label.
pub fn theta_unitaries(
    config: &EmbezzleConfig,
    pair: &RotationPair,
    theta: f64,
) -> Result<(StructuredUnitary, StructuredUnitary)> {
    let shape = config.shape()?;
    let left = StructuredUnitary::new(shape.clone(), vec![2, 4], vec![rotation_rule(pair, theta)?])?;
    let right = StructuredUnitary::new(shape, vec![3, 5], vec![rotation_rule(pair, theta)?])?;
    Ok((left, right))
}

/// The rotated measurement pair at angles (θ for the left party, φ for the
/// right party), realised as the rotated final state plus the unrotated
/// outcome projectors.
#[derive(Clone, Debug)]
pub struct RotatedObservables {
    state: SparseState,
}

impl RotatedObservables {
    /// The measurement state: both block rotations applied to the final
    /// coupled state.
    pub fn state(&self) -> &SparseState {
        &self.state
    }

    /// Born probability of left outcome (i, j) under the θ-rotated left
    /// observable.
    pub fn left_probability(&self, config: &EmbezzleConfig, i: u32, j: u64) -> Result<f64> {
        Ok(projector_expectation(
            &self.state,
            &left_projector(config, i, j)?,
        )?)
    }

    /// Born probability of right outcome (i, j) under the φ-rotated right
    /// observable.
    pub fn right_probability(&self, config: &EmbezzleConfig, i: u32, j: u64) -> Result<f64> {
        Ok(projector_expectation(
            &self.state,
            &right_projector(config, i, j)?,
        )?)
    }

    /// Joint Born probability of left outcome `left` and right outcome
    /// `right`.
    pub fn joint_probability(
        &self,
        config: &EmbezzleConfig,
        left: (u32, u64),
        right: (u32, u64),
    ) -> Result<f64> {
        Ok(projector_expectation(
            &self.state,
            &joint_projector(config, left, right)?,
        )?)
    }
}

/// Build the rotated measurement pair on a freshly built final state.
pub fn rotated_observables(
    config: &EmbezzleConfig,
    pair: &RotationPair,
    theta: f64,
    phi: f64,
) -> Result<RotatedObservables> {
    let psi_f = build_psi_f(config)?;
    rotated_observables_on(config, &psi_f, pair, theta, phi)
}

/// [`rotated_observables`] against a caller-supplied final state, so ladder
/// sweeps can reuse one built state.
pub fn rotated_observables_on(
    config: &EmbezzleConfig,
    psi_f: &SparseState,
    pair: &RotationPair,
    theta: f64,
    phi: f64,
) -> Result<RotatedObservables> {
    let shape = config.shape()?;
    // The two rotations touch disjoint positions, so the application order
    // is immaterial.
    let left = StructuredUnitary::new(shape.clone(), vec![2, 4], vec![rotation_rule(pair, theta)?])?;
    let right = StructuredUnitary::new(shape, vec![3, 5], vec![rotation_rule(pair, phi)?])?;
    let state = left.apply(&right.apply(psi_f)?)?;
    Ok(RotatedObservables { state })
}
