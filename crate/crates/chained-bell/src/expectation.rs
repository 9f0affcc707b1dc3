//! Closed-form quantum expectations for the chained estimate, each checked
//! against the brute-force Born oracle at every call.

use quantum_core::numeric::CompensatedSum;
use quantum_core::{
    maximally_entangled, policy, projector_expectation, FactorProjector, MultiIndex,
    ProductProjector, SparseState, StructuredUnitary,
};

use crate::error::{ChainError, Result};
use crate::ladder::rotation_unitary;

/// The rotated basis vector U_θ e_k as a single-factor projector.
fn rotated_factor(unitary: &StructuredUnitary, d: u32, k: u32) -> Result<FactorProjector> {
    let basis = SparseState::basis_state(vec![d], MultiIndex::new(vec![k]))?;
    let rotated = unitary.apply(&basis)?;
    Ok(FactorProjector::vector(
        rotated.amplitudes().map(|(index, amp)| (index.factors()[0], *amp)),
    ))
}

/// Brute-force Born expectation ⟨ψ_d| [U_θ e_k ⊗ U_φ e_l] |ψ_d⟩.
pub fn cross_expectation_oracle(d: u32, i: u32, j: u32, k: u32, l: u32, theta: f64, phi: f64) -> Result<f64> {
    let psi = maximally_entangled(d)?;
    let u_theta = rotation_unitary(d, i, j, theta)?;
    let u_phi = rotation_unitary(d, i, j, phi)?;
    let projector = ProductProjector::new(vec![
        rotated_factor(&u_theta, d, k)?,
        rotated_factor(&u_phi, d, l)?,
    ])?;
    Ok(projector_expectation(&psi, &projector)?)
}

/// Brute-force Born probability of outcome k for the rotated-basis
/// measurement on one side of ψ_d, the other side untouched:
/// ⟨ψ_d| [U_θ e_k] ⊗ 1 |ψ_d⟩ (side 0) or ⟨ψ_d| 1 ⊗ [U_θ e_k] |ψ_d⟩ (side 1).
pub fn marginal_expectation_oracle(d: u32, i: u32, j: u32, k: u32, theta: f64, side: usize) -> Result<f64> {
    if side > 1 {
        return Err(ChainError::InvalidArgument {
            detail: format!("side {side} is not 0 or 1"),
        });
    }
    let psi = maximally_entangled(d)?;
    let unitary = rotation_unitary(d, i, j, theta)?;
    let rotated = rotated_factor(&unitary, d, k)?;
    let factors = if side == 0 {
        vec![rotated, FactorProjector::Id]
    } else {
        vec![FactorProjector::Id, rotated]
    };
    Ok(projector_expectation(&psi, &ProductProjector::new(factors)?)?)
}

/// The cross-term expectation ⟨ψ_d| [U_θ e_i ⊗ U_φ e_j] |ψ_d⟩ for the
/// rotation in the (i, j) plane, in closed form: sin²(φ − θ)/d. Every call
/// recomputes the value through the projector oracle and fails hard if the
/// two disagree — a disagreement means either the closed form or the oracle
/// is wrong, and no downstream result can be trusted.
pub fn cross_expectation(d: u32, i: u32, j: u32, theta: f64, phi: f64) -> Result<f64> {
    let closed_form = (phi - theta).sin().powi(2) / d as f64;
    let oracle = cross_expectation_oracle(d, i, j, i, j, theta, phi)?;
    let difference = (closed_form - oracle).abs();
    let tolerance = policy::current().tol_composed;
    if difference > tolerance {
        return Err(ChainError::OracleMismatch {
            what: format!("cross term d={d} (i,j)=({i},{j}) θ={theta} φ={phi}"),
            closed_form,
            oracle,
            difference,
        });
    }
    Ok(closed_form)
}

/// The quantum value of one adjacent rung of the chained estimate:
/// ⟨[U_θ e_i ⊗ U_φ e_j]⟩ + ⟨[U_θ e_j ⊗ U_φ e_i]⟩ = (2/d) sin²(φ − θ).
/// The off-plane cross terms (k ∉ {i, j}) vanish; that is asserted through
/// the oracle rather than assumed.
pub fn rung_expectation(d: u32, i: u32, j: u32, theta: f64, phi: f64) -> Result<f64> {
    let mut total = CompensatedSum::new();
    // Σ_{k≠i} ⟨[U_θ e_i ⊗ U_φ e_k]⟩: only k = j survives.
    for k in 1..=d {
        if k == i {
            continue;
        }
        let term = if k == j {
            cross_expectation(d, i, j, theta, phi)?
        } else {
            let off_plane = cross_expectation_oracle(d, i, j, i, k, theta, phi)?;
            if off_plane.abs() > policy::current().tol_composed {
                return Err(ChainError::OracleMismatch {
                    what: format!("off-plane cross term (i={i}, k={k})"),
                    closed_form: 0.0,
                    oracle: off_plane,
                    difference: off_plane.abs(),
                });
            }
            0.0
        };
        total.add(term);
    }
    // Σ_{l≠i} ⟨[U_θ e_l ⊗ U_φ e_i]⟩: only l = j survives.
    for l in 1..=d {
        if l == i {
            continue;
        }
        let term = if l == j {
            let closed_form = (phi - theta).sin().powi(2) / d as f64;
            let oracle = cross_expectation_oracle(d, i, j, j, i, theta, phi)?;
            let difference = (closed_form - oracle).abs();
            if difference > policy::current().tol_composed {
                return Err(ChainError::OracleMismatch {
                    what: format!("swapped cross term d={d} (j,i)=({j},{i}) θ={theta} φ={phi}"),
                    closed_form,
                    oracle,
                    difference,
                });
            }
            closed_form
        } else {
            let off_plane = cross_expectation_oracle(d, i, j, l, i, theta, phi)?;
            if off_plane.abs() > policy::current().tol_composed {
                return Err(ChainError::OracleMismatch {
                    what: format!("off-plane cross term (l={l}, i={i})"),
                    closed_form: 0.0,
                    oracle: off_plane,
                    difference: off_plane.abs(),
                });
            }
            0.0
        };
        total.add(term);
    }
    Ok(total.value())
}

/// The quantum value of the closing line: Σ_{k≠j} ⟨[e_k ⊗ U_{π/2} e_i]⟩ +
/// Σ_{l≠i} ⟨[e_j ⊗ U_{π/2} e_l]⟩. U_{π/2} carries e_i to e_j (and e_j to
/// −e_i), so by the perfect correlations of ψ_d every term vanishes. The
/// vanishing is verified by the oracle; the returned value is exactly 0.
pub fn closing_expectation(d: u32, i: u32, j: u32) -> Result<f64> {
    let quarter = std::f64::consts::FRAC_PI_2;
    let mut residual: f64 = 0.0;
    for k in 1..=d {
        if k == j {
            continue;
        }
        residual = residual.max(cross_expectation_oracle(d, i, j, k, i, 0.0, quarter)?.abs());
    }
    for l in 1..=d {
        if l == i {
            continue;
        }
        residual = residual.max(cross_expectation_oracle(d, i, j, j, l, 0.0, quarter)?.abs());
    }
    if residual > policy::current().tol_exact {
        return Err(ChainError::OracleMismatch {
            what: format!("perfect-correlation sum d={d} (i,j)=({i},{j})"),
            closed_form: 0.0,
            oracle: residual,
            difference: residual,
        });
    }
    Ok(0.0)
}

/// The chained bound in both forms.
#[derive(Clone, Copy, Debug)]
pub struct ChainedBound {
    /// (2N+1) · (2/d) · sin²(π/(2(2N+1))): the sum of the 2N+1 rung values.
    pub presimplified: f64,
    /// π²/(2d(2N+1)): the simplified bound obtained from sin x ≤ x.
    pub simplified: f64,
}

/// Evaluate the chained bound for dimension d and chain half-length N.
/// The pre-simplification form is guaranteed (and asserted) to be at most
/// the simplified form.
pub fn chained_bound(d: u32, half_length: usize) -> Result<ChainedBound> {
    if d < 2 {
        return Err(ChainError::InvalidArgument {
            detail: format!("dimension {d} is below 2"),
        });
    }
    let steps = (2 * half_length + 1) as f64;
    let delta = std::f64::consts::FRAC_PI_2 / steps;
    let presimplified = steps * (2.0 / d as f64) * delta.sin().powi(2);
    let simplified = std::f64::consts::PI.powi(2) / (2.0 * d as f64 * steps);
    if presimplified > simplified + 1e-15 {
        return Err(ChainError::Internal {
            detail: format!(
                "sin x ≤ x failed: pre-simplified bound {presimplified} exceeds {simplified}"
            ),
        });
    }
    Ok(ChainedBound {
        presimplified,
        simplified,
    })
}
