//! The local outcome projectors and the perfect-correlation property of the
//! final coupled state.
//!
//! Each party measures its slot and Schmidt registers: outcome (i, j) with
//! i ≤ d and j ≤ n_i corresponds to the rank-one pattern (slot = j,
//! Schmidt = i) with the ladder register left untouched. There are
//! d_eps = Σ n_i outcomes per side. On the final state the two sides agree
//! exactly: every mixed term ⟨P^left_{i,j} P^right_{r,s}⟩ with
//! (i, j) ≠ (r, s) is zero with no tolerance at all, because the supports of
//! the projected states are disjoint subsets of the block/slot diagonal.

use quantum_core::{projector_expectation, FactorProjector, ProductProjector, SparseState};

use crate::config::EmbezzleConfig;
use crate::error::{EmbezzleError, Result};
use crate::state::build_psi_f;

fn check_outcome(config: &EmbezzleConfig, i: u32, j: u64) -> Result<()> {
    let n = config.count(i)?;
    if j == 0 || j > n {
        return Err(EmbezzleError::InvalidArgument {
            detail: format!("slot outcome {j} out of range 1..={n} for weight {i}"),
        });
    }
    Ok(())
}

fn slot_u32(j: u64) -> u32 {
    u32::try_from(j).expect("slot index exceeds u32 after shape validation")
}

/// The left-party outcome projector for (i, j): slot register 2 at j,
/// Schmidt register 4 at i, identity elsewhere.
pub fn left_projector(config: &EmbezzleConfig, i: u32, j: u64) -> Result<ProductProjector> {
    check_outcome(config, i, j)?;
    Ok(ProductProjector::new(vec![
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Basis(slot_u32(j)),
        FactorProjector::Id,
        FactorProjector::Basis(i),
        FactorProjector::Id,
    ])?)
}

/// The right-party outcome projector for (i, j): slot register 3 at j,
/// Schmidt register 5 at i, identity elsewhere.
pub fn right_projector(config: &EmbezzleConfig, i: u32, j: u64) -> Result<ProductProjector> {
    check_outcome(config, i, j)?;
    Ok(ProductProjector::new(vec![
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Basis(slot_u32(j)),
        FactorProjector::Id,
        FactorProjector::Basis(i),
    ])?)
}

/// Both outcome projectors at once: left at (i, j), right at (r, s).
pub fn joint_projector(
    config: &EmbezzleConfig,
    left: (u32, u64),
    right: (u32, u64),
) -> Result<ProductProjector> {
    check_outcome(config, left.0, left.1)?;
    check_outcome(config, right.0, right.1)?;
    Ok(ProductProjector::new(vec![
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Basis(slot_u32(left.1)),
        FactorProjector::Basis(slot_u32(right.1)),
        FactorProjector::Basis(left.0),
        FactorProjector::Basis(right.0),
    ])?)
}

/// All outcomes (i, j) in lexicographic order: i ∈ 1..=d, j ∈ 1..=n_i.
pub fn outcome_pairs(config: &EmbezzleConfig) -> Vec<(u32, u64)> {
    let mut pairs = Vec::with_capacity(config.approx().d_eps() as usize);
    for i in 1..=config.schmidt_rank() {
        for j in 1..=config.approx().counts()[i as usize - 1] {
            pairs.push((i, j));
        }
    }
    pairs
}

/// Result of sweeping every ordered outcome pair on the final state.
#[derive(Clone, Debug)]
pub struct CorrelationReport {
    /// Largest ⟨P^left_{i,j} P^right_{r,s}⟩ over (i,j) ≠ (r,s). Exactly zero.
    pub max_off_diagonal: f64,
    /// Σ ⟨P^left_{i,j} P^right_{i,j}⟩, which must exhaust the state.
    pub diagonal_total: f64,
    /// Number of ordered pairs inspected, diagonal included.
    pub pairs_checked: usize,
}

/// Brute-force sweep of all joint outcome expectations on the final state.
///
/// Fails if any mixed term exceeds 1e-12 or the diagonal does not sum to 1;
/// the construction guarantees both, so a violation is a defect in the
/// relabelling, not a numerical artifact.
pub fn perfect_correlation_check(config: &EmbezzleConfig) -> Result<CorrelationReport> {
    let psi_f = build_psi_f(config)?;
    perfect_correlation_check_on(config, &psi_f)
}

/// [`perfect_correlation_check`] against a caller-supplied final state, so
/// sweeps can reuse one built state.
pub fn perfect_correlation_check_on(
    config: &EmbezzleConfig,
    psi_f: &SparseState,
) -> Result<CorrelationReport> {
    let outcomes = outcome_pairs(config);
    let mut max_off_diagonal: f64 = 0.0;
    let mut diagonal = quantum_core::numeric::CompensatedSum::new();
    let mut pairs_checked = 0usize;
    for &left in &outcomes {
        for &right in &outcomes {
            let value = projector_expectation(psi_f, &joint_projector(config, left, right)?)?;
            pairs_checked += 1;
            if left == right {
                diagonal.add(value);
            } else {
                max_off_diagonal = max_off_diagonal.max(value.abs());
            }
        }
    }
    let report = CorrelationReport {
        max_off_diagonal,
        diagonal_total: diagonal.value(),
        pairs_checked,
    };
    if report.max_off_diagonal > 1e-12 {
        return Err(EmbezzleError::Internal {
            detail: format!(
                "mixed outcome expectation {} breaks perfect correlation",
                report.max_off_diagonal
            ),
        });
    }
    if (report.diagonal_total - 1.0).abs() > 1e-12 {
        return Err(EmbezzleError::Internal {
            detail: format!(
                "diagonal outcome expectations sum to {}, expected 1",
                report.diagonal_total
            ),
        });
    }
    Ok(report)
}
