//! The six-factor coupled states and the embezzlement unitaries.
//!
//! Factor layout, fixed throughout the crate (all indices 1-based):
//!
//! | position | dimension | role                                |
//! |----------|-----------|-------------------------------------|
//! | 0        | D         | left ladder register                |
//! | 1        | D         | right ladder register               |
//! | 2        | m         | left slot register                  |
//! | 3        | m         | right slot register                 |
//! | 4        | d         | left Schmidt register               |
//! | 5        | d         | right Schmidt register              |
//!
//! Positions 0/2/4 belong to the left party and 1/3/5 to the right party, so
//! "left" operations touch only even positions and "right" only odd ones.
//!
//! The initial state couples a harmonically weighted size-D pair directly to
//! the Schmidt weights. The two local relabelling unitaries then trade ladder
//! resolution for slot resolution: afterwards the ladder pair is harmonically
//! weighted on blocks and the slot/Schmidt registers carry an equal-weight
//! pair of dimension d_eps = Σ n_i, which is the equal-weight target the
//! final bound compares against.

use num_complex::Complex64;
use quantum_core::{MultiIndex, SparseState, StructuredUnitary, UnitaryRule};

use crate::config::EmbezzleConfig;
use crate::error::{EmbezzleError, Result};

/// Environment variable overriding the sparse-support cap.
pub const SUPPORT_CAP_ENV: &str = "ONTICLAB_CAP_SUPPORT";

/// Default cap on the number of stored amplitudes in any built state.
pub const DEFAULT_SUPPORT_CAP: u64 = 10_000_000;

/// The active sparse-support cap: `ONTICLAB_CAP_SUPPORT` when set to a valid
/// integer, the default otherwise.
pub fn support_cap() -> u64 {
    std::env::var(SUPPORT_CAP_ENV)
        .ok()
        .and_then(|raw| raw.trim().parse::<u64>().ok())
        .unwrap_or(DEFAULT_SUPPORT_CAP)
}

fn check_support(what: &str, needed: u64) -> Result<()> {
    let cap = support_cap();
    if needed > cap {
        return Err(EmbezzleError::Resource {
            what: format!("{what} sparse support"),
            needed: needed as f64,
            cap: cap as f64,
        });
    }
    Ok(())
}

fn factor_u32(value: u64) -> u32 {
    // shape() has already verified that D and m fit in u32.
    u32::try_from(value).expect("factor index exceeds u32 after shape validation")
}

/// The initial coupled state: amplitude C·c_i/√k at (k, k, 1, 1, i, i).
///
/// Exactly D·d nonzero amplitudes, unit norm. The ladder pair carries the
/// harmonic weights, the slot registers start parked at slot 1, and the
/// Schmidt registers carry the weights being approximated.
pub fn build_psi_i(config: &EmbezzleConfig) -> Result<SparseState> {
    let shape = config.shape()?;
    let d = config.schmidt_rank();
    let big_d = config.pair_dim();
    check_support("initial state", big_d.saturating_mul(d as u64))?;
    let normalizer = config.normalizer();
    let mut entries = Vec::with_capacity((big_d * d as u64) as usize);
    for k in 1..=big_d {
        let k_u32 = factor_u32(k);
        let weight_scale = normalizer / (k as f64).sqrt();
        for i in 1..=d {
            let amp = weight_scale * config.weight(i)?;
            entries.push((
                MultiIndex::new(vec![k_u32, k_u32, 1, 1, i, i]),
                Complex64::new(amp, 0.0),
            ));
        }
    }
    Ok(SparseState::new(shape, entries)?)
}

/// The two local relabelling unitaries (left, right).
///
/// The left one maps (k, 1, i) → (⌈k/n_i⌉, j_{i,k}, i) on positions (0, 2, 4)
/// and the right one applies the same map on positions (1, 3, 5). Each is
/// specified as a plain permutation of basis labels; rule compilation rejects
/// any collision and closes open relabelling chains into cycles, so the
/// operators are unitary on the whole space while acting as specified on
/// every vector reachable from the initial state.
pub fn build_embezzle_unitaries(
    config: &EmbezzleConfig,
) -> Result<(StructuredUnitary, StructuredUnitary)> {
    let shape = config.shape()?;
    let d = config.schmidt_rank();
    let big_d = config.pair_dim();
    let index = config.index();
    let mut rules = Vec::new();
    for i in 1..=d {
        for k in 1..=big_d {
            let block = index.block_of(i, k)?;
            let slot = index.j_of(i, k)?;
            let from = vec![factor_u32(k), 1, i];
            let to = vec![factor_u32(block), factor_u32(slot), i];
            if from != to {
                rules.push(UnitaryRule::Permutation { from, to });
            }
        }
    }
    let left = StructuredUnitary::new(shape.clone(), vec![0, 2, 4], rules.clone())?;
    let right = StructuredUnitary::new(shape, vec![1, 3, 5], rules)?;
    Ok((left, right))
}

/// The final coupled state: both relabelling unitaries applied to the initial
/// state, verified term-by-term against its closed-form expansion
/// C·c_i/√k at (⌈k/n_i⌉, ⌈k/n_i⌉, j_{i,k}, j_{i,k}, i, i).
pub fn build_psi_f(config: &EmbezzleConfig) -> Result<SparseState> {
    let psi_i = build_psi_i(config)?;
    let (left, right) = build_embezzle_unitaries(config)?;
    let psi_f = left.apply(&right.apply(&psi_i)?)?;

    let d = config.schmidt_rank();
    let big_d = config.pair_dim();
    let index = config.index();
    let normalizer = config.normalizer();
    let mut expected = 0usize;
    for i in 1..=d {
        for k in 1..=big_d {
            let block = factor_u32(index.block_of(i, k)?);
            let slot = factor_u32(index.j_of(i, k)?);
            let target = MultiIndex::new(vec![block, block, slot, slot, i, i]);
            let amp = psi_f.amp(&target);
            let want = normalizer * config.weight(i)? / (k as f64).sqrt();
            if (amp.re - want).abs() > 1e-15 || amp.im != 0.0 {
                return Err(EmbezzleError::Internal {
                    detail: format!(
                        "final-state amplitude at {target:?} is {amp}, expected {want}"
                    ),
                });
            }
            expected += 1;
        }
    }
    if psi_f.support_len() != expected {
        return Err(EmbezzleError::Internal {
            detail: format!(
                "final state has {} amplitudes, expected {expected}",
                psi_f.support_len()
            ),
        });
    }
    Ok(psi_f)
}

/// The ideal product the final state approaches as N grows: a harmonically
/// weighted size-D pair on the ladder registers, tensored with an
/// equal-weight pair of dimension d_eps spread over the (slot, Schmidt)
/// registers — amplitude C/√(k·d_eps) at (k, k, j, j, i, i) for every
/// k ≤ D, i ≤ d, j ≤ n_i.
pub fn build_target(config: &EmbezzleConfig) -> Result<SparseState> {
    let shape = config.shape()?;
    let d = config.schmidt_rank();
    let big_d = config.pair_dim();
    let d_eps = config.approx().d_eps();
    check_support("target state", big_d.saturating_mul(d_eps))?;
    let normalizer = config.normalizer();
    let equal_weight = 1.0 / (d_eps as f64).sqrt();
    let mut entries = Vec::with_capacity((big_d * d_eps) as usize);
    for k in 1..=big_d {
        let k_u32 = factor_u32(k);
        let ladder_amp = normalizer / (k as f64).sqrt();
        for i in 1..=d {
            for j in 1..=config.count(i)? {
                entries.push((
                    MultiIndex::new(vec![k_u32, k_u32, factor_u32(j), factor_u32(j), i, i]),
                    Complex64::new(ladder_amp * equal_weight, 0.0),
                ));
            }
        }
    }
    Ok(SparseState::new(shape, entries)?)
}

/// Overlap |⟨final state | ideal product⟩|. Strictly below 1 for finite N and
/// non-decreasing in N, which is the whole point of the coupling: the better
/// the ladder resolves the harmonic weights, the closer the construction gets
/// to handing out an exact equal-weight pair.
pub fn embezzlement_fidelity(config: &EmbezzleConfig) -> Result<f64> {
    let psi_f = build_psi_f(config)?;
    let target = build_target(config)?;
    Ok(quantum_core::fidelity(&psi_f, &target)?)
}
