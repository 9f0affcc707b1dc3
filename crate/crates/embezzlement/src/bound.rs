//! The closed three-term error bound and its coherence against the
//! numerically evaluated chain of estimates.
//!
//! [`final_bound`] selects ladder parameters for a requested total error
//! budget: a chain half-length `L` whose chain term eats less than a third of
//! the budget, a rational-approximation window `ε` sized to the ladder, and
//! an embezzling multiplier `N` large enough that the logarithmic leakage
//! term stays under the final third.  The multiplier grows exponentially in
//! `L·log(d_ε)`, so it is reported in log10 whenever it is too large to
//! enumerate, and the bound remains valid because the leakage term only
//! shrinks as `N` grows.
//!
//! [`bound_coherence`] replays the derivation of that bound on an actual
//! configuration, evaluating each intermediate estimate on the constructed
//! state and checking the chain is genuinely non-decreasing step by step.

use std::collections::BTreeMap;
use std::f64::consts::{LN_10, PI};

use quantum_core::numeric::CompensatedSum;
use quantum_core::{projector_expectation, FactorProjector, ProductProjector};

use crate::config::EmbezzleConfig;
use crate::error::{EmbezzleError, Result};
use crate::ladder::{more_chains_ladder_on, LadderOrientation};
use crate::observables::{outcome_pairs, right_projector};
use crate::rational::{rational_approximation_capped, DEFAULT_DENOMINATOR_CAP};
use crate::rotation::RotationPair;
use crate::state::build_psi_f;

/// Multiplicative margin applied to the multiplier-selection threshold so
/// that the strict inequality on the leakage term survives floating-point
/// rounding of the minimal choice.
const LOG_MARGIN: f64 = 1e-3;

/// Largest exponent for which the multiplier is materialised as a number
/// rather than kept in log space (`exp` stays comfortably inside f64 range).
const MAX_EXACT_EXPONENT: f64 = 700.0;

/// Exactly representable integer ceiling for a reported multiplier.
const MAX_EXACT_MULTIPLIER: f64 = 9.007_199_254_740_992e15; // 2^53

/// Slack allowed when checking that successive estimates do not decrease.
const COHERENCE_SLACK: f64 = 1e-9;

/// Resource ceilings for [`final_bound_capped`].
#[derive(Clone, Copy, Debug)]
pub struct BoundCaps {
    /// Largest denominator the rational-approximation scan may reach.
    pub denominator_cap: u64,
    /// Largest admissible log10 of the embezzling multiplier.
    pub multiplier_log10_cap: f64,
}

impl Default for BoundCaps {
    fn default() -> Self {
        BoundCaps {
            denominator_cap: DEFAULT_DENOMINATOR_CAP,
            multiplier_log10_cap: 1e6,
        }
    }
}

/// The three-term bound together with every parameter that produced it.
#[derive(Clone, Debug)]
pub struct BoundReport {
    /// Chain term π²/(2(2L+1)).
    pub term_chain: f64,
    /// Window term (4L+3)·ε.
    pub term_eps: f64,
    /// Logarithmic leakage term (2L+1)·ln(d_ε)/ln(1 + N·Πnᵢ).
    pub term_log: f64,
    /// Sum of the three terms; strictly below the requested budget.
    pub total: f64,
    /// Selected chain half-length L.
    pub chain_half_length: u64,
    /// Selected approximation window ε.
    pub eps: f64,
    /// Denominator d_ε of the selected rational profile.
    pub d_eps: u64,
    /// Product Πnᵢ of the profile counts.
    pub count_product: u64,
    /// The embezzling multiplier N when it is small enough to state exactly;
    /// `None` when only its magnitude is representable.
    pub multiplier: Option<f64>,
    /// log10 of the multiplier, always available.
    pub multiplier_log10: f64,
}

/// [`final_bound_capped`] with the default resource ceilings.
pub fn final_bound(c: &[f64], total_error: f64) -> Result<BoundReport> {
    final_bound_capped(c, total_error, BoundCaps::default())
}

/// Select ladder parameters so that each of the three error terms stays
/// strictly below a third of `total_error`, for Schmidt weights `c`.
pub fn final_bound_capped(c: &[f64], total_error: f64, caps: BoundCaps) -> Result<BoundReport> {
    if !total_error.is_finite() || total_error <= 0.0 {
        return Err(EmbezzleError::InvalidArgument {
            detail: format!("total error budget must be positive and finite, got {total_error}"),
        });
    }
    let target = total_error / 3.0;
    let half_pi_sq = PI * PI / 2.0;

    // Smallest L with π²/(2(2L+1)) < target.  Jump below the answer, then
    // step up so the float comparison itself decides minimality.
    let mut half_length = ((half_pi_sq / target - 1.0) / 2.0).floor().max(0.0) as u64;
    while half_pi_sq / (2 * half_length + 1) as f64 >= target {
        half_length += 1;
    }
    let rungs = (2 * half_length + 1) as f64;
    let term_chain = half_pi_sq / rungs;

    let eps = target / (4 * half_length + 4) as f64;
    let approx = rational_approximation_capped(c, eps, caps.denominator_cap)?;
    let d_eps = approx.d_eps();
    let count_product = approx.count_product()?;
    let term_eps = (4 * half_length + 3) as f64 * eps;

    let ln_d = (d_eps as f64).ln();
    let (multiplier, multiplier_log10, term_log) = if ln_d == 0.0 {
        // A single unit count: no correction register, no leakage.
        (Some(1.0), 0.0, 0.0)
    } else {
        // Smallest N with (2L+1)·ln(d_ε)/ln(1 + N·Π) < target, i.e. with
        // ln(1 + N·Π) above `threshold` (margined so rounding the minimal
        // choice cannot tip the strict inequality).
        let threshold = rungs * ln_d * (1.0 + LOG_MARGIN) / target;
        let product = count_product as f64;
        let exact = if threshold <= MAX_EXACT_EXPONENT {
            let n = (threshold.exp_m1() / product).ceil().max(1.0);
            (n <= MAX_EXACT_MULTIPLIER).then_some(n)
        } else {
            None
        };
        match exact {
            Some(n) => (Some(n), n.log10(), rungs * ln_d / (n * product).ln_1p()),
            None => {
                // Keep N in log space: N = e^threshold/Π satisfies
                // ln(1 + N·Π) ≥ threshold, so the leakage term evaluated at
                // the threshold itself is a valid (slightly loose) value.
                let log10 = (threshold - product.ln()) / LN_10;
                if log10 > caps.multiplier_log10_cap {
                    return Err(EmbezzleError::Resource {
                        what: "embezzling multiplier log10".to_string(),
                        needed: log10,
                        cap: caps.multiplier_log10_cap,
                    });
                }
                (None, log10, rungs * ln_d / threshold)
            }
        }
    };

    let total = term_chain + term_eps + term_log;
    for (name, value) in [
        ("chain", term_chain),
        ("window", term_eps),
        ("leakage", term_log),
    ] {
        if value.is_nan() || value >= target {
            return Err(EmbezzleError::Internal {
                detail: format!("{name} term {value} is not below its third {target}"),
            });
        }
    }
    if total.is_nan() || total >= total_error {
        return Err(EmbezzleError::Internal {
            detail: format!("bound total {total} is not below the budget {total_error}"),
        });
    }

    Ok(BoundReport {
        term_chain,
        term_eps,
        term_log,
        total,
        chain_half_length: half_length,
        eps,
        d_eps,
        count_product,
        multiplier,
        multiplier_log10,
    })
}

/// The six successive estimates relating one Schmidt weight's coarse
/// measurement defect to the closed three-term bound, each evaluated on the
/// constructed state.  Listed in derivation order; verified non-decreasing.
#[derive(Clone, Debug)]
pub struct CoherenceReport {
    /// Schmidt outcome the chain was evaluated for.
    pub weight: u32,
    /// Chain half-length used for the laddered line.
    pub chain_half_length: u64,
    /// |⟨coarse outcome⟩ − c²|: the defect actually being bounded.
    pub direct_defect: f64,
    /// Triangle split through the refined right-side outcomes and the
    /// counting measure n/d_ε.
    pub triangle_defect: f64,
    /// Counting-measure mismatch replaced by the approximation window ε.
    pub window_defect: f64,
    /// Refined-outcome gaps averaged over all d_ε outcomes, plus ε.
    pub averaged_gaps: f64,
    /// Each gap replaced by its telescoping ladder total, plus ε.
    pub laddered_gaps: f64,
    /// The fully absorbed closed form: chain + window + leakage terms.
    pub closed_bound: f64,
}

impl CoherenceReport {
    /// The six estimates in derivation order.
    pub fn lines(&self) -> [f64; 6] {
        [
            self.direct_defect,
            self.triangle_defect,
            self.window_defect,
            self.averaged_gaps,
            self.laddered_gaps,
            self.closed_bound,
        ]
    }
}

/// Replay the bound derivation for one Schmidt weight of `config` at chain
/// half-length `half_length`, evaluating every intermediate estimate on the
/// constructed state and insisting the chain never decreases.
pub fn bound_coherence(
    config: &EmbezzleConfig,
    weight: u32,
    half_length: u64,
) -> Result<CoherenceReport> {
    let psi_f = build_psi_f(config)?;
    let eps = config.approx().eps();
    let d_eps = config.approx().d_eps() as f64;
    let own_count = config.count(weight)?;
    let share = own_count as f64 / d_eps;
    let c_sq = {
        let c = config.weight(weight)?;
        c * c
    };

    // The coarse observable reads only the Schmidt register.
    let coarse = ProductProjector::new(vec![
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Id,
        FactorProjector::Basis(weight),
        FactorProjector::Id,
    ])?;
    let p_coarse = projector_expectation(&psi_f, &coarse)?;

    let outcomes = outcome_pairs(config);
    let mut p_right = BTreeMap::new();
    for &(i, j) in &outcomes {
        let value = projector_expectation(&psi_f, &right_projector(config, i, j)?)?;
        p_right.insert((i, j), value);
    }
    let mut own_sum = CompensatedSum::new();
    for j in 1..=own_count {
        own_sum.add(p_right[&(weight, j)]);
    }
    let own_sum = own_sum.value();

    let direct_defect = (p_coarse - c_sq).abs();
    let triangle_defect =
        (p_coarse - own_sum).abs() + (own_sum - share).abs() + (share - c_sq).abs();
    let window_defect = (own_sum - share).abs() + eps;

    let mut gaps = CompensatedSum::new();
    for j in 1..=own_count {
        for &(i_other, j_other) in &outcomes {
            gaps.add((p_right[&(weight, j)] - p_right[&(i_other, j_other)]).abs());
        }
    }
    let averaged_gaps = gaps.value() / d_eps + eps;

    let mut ladders = CompensatedSum::new();
    for j in 1..=own_count {
        for &(i_other, j_other) in &outcomes {
            if (weight, j) == (i_other, j_other) {
                continue;
            }
            let pair = RotationPair::new(config, weight, j, i_other, j_other)?;
            let report = more_chains_ladder_on(
                config,
                &psi_f,
                &pair,
                half_length,
                LadderOrientation::RightStart,
            )?;
            ladders.add(report.total);
        }
    }
    let laddered_gaps = ladders.value() / d_eps + eps;

    let rungs = (2 * half_length + 1) as f64;
    let closed_bound = PI * PI / (2.0 * rungs)
        + (4 * half_length + 3) as f64 * eps
        + rungs * d_eps.ln() / (config.pair_dim() as f64).ln_1p();

    let report = CoherenceReport {
        weight,
        chain_half_length: half_length,
        direct_defect,
        triangle_defect,
        window_defect,
        averaged_gaps,
        laddered_gaps,
        closed_bound,
    };
    let lines = report.lines();
    for step in 1..lines.len() {
        if lines[step] + COHERENCE_SLACK < lines[step - 1] {
            return Err(EmbezzleError::Internal {
                detail: format!(
                    "estimate chain decreases at step {step}: {} then {}",
                    lines[step - 1],
                    lines[step]
                ),
            });
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::rational_approximation;

    fn reference_weights() -> [f64; 2] {
        [(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()]
    }

    #[test]
    fn unit_budget_selects_the_known_parameters() {
        let report = final_bound(&reference_weights(), 1.0).expect("bound exists");
        assert_eq!(report.chain_half_length, 7);
        assert_eq!(report.d_eps, 3);
        assert_eq!(report.count_product, 2);
        assert!((report.eps - 1.0 / 96.0).abs() < 1e-15);
        let third = 1.0 / 3.0;
        assert!(report.term_chain < third);
        assert!(report.term_eps < third);
        assert!(report.term_log < third);
        assert!(report.total < 1.0);
        // The multiplier is astronomically large (≈10^21), so it is reported
        // in log space only.
        assert!(report.multiplier.is_none());
        assert!((report.multiplier_log10 - 21.2).abs() < 0.1);
    }

    #[test]
    fn half_budget_doubles_down_on_every_term() {
        let report = final_bound(&reference_weights(), 0.5).expect("bound exists");
        assert_eq!(report.chain_half_length, 15);
        assert!(report.total < 0.5);
        assert!((report.multiplier_log10 - 88.5).abs() < 0.2);
    }

    #[test]
    fn a_generous_budget_needs_no_chaining_and_a_unit_multiplier() {
        // Budget above 3π²/2 admits the bare one-link chain, and the leakage
        // term is already small at N = 1.
        let report = final_bound(&reference_weights(), 16.0).expect("bound exists");
        assert_eq!(report.chain_half_length, 0);
        assert_eq!(report.multiplier, Some(1.0));
        assert_eq!(report.multiplier_log10, 0.0);
        assert!(report.total < 16.0);
    }

    #[test]
    fn a_single_weight_has_zero_leakage() {
        let report = final_bound(&[1.0], 1.0).expect("bound exists");
        assert_eq!(report.d_eps, 1);
        assert_eq!(report.term_log, 0.0);
        assert_eq!(report.multiplier, Some(1.0));
    }

    #[test]
    fn tiny_budgets_report_the_multiplier_resource_honestly() {
        let err = final_bound(&reference_weights(), 1e-3).expect_err("multiplier explodes");
        match err {
            EmbezzleError::Resource { needed, cap, .. } => {
                assert!(needed > cap);
                assert!(needed > 1e7);
            }
            other => panic!("expected a resource error, got {other:?}"),
        }
    }

    #[test]
    fn the_total_shrinks_with_the_budget() {
        let mut previous = f64::INFINITY;
        for budget in [4.0, 2.0, 1.0, 0.5, 0.25] {
            let report = final_bound(&reference_weights(), budget).expect("bound exists");
            assert!(report.total < budget);
            assert!(report.total < previous);
            previous = report.total;
        }
    }

    #[test]
    fn invalid_weights_and_budgets_are_rejected() {
        assert!(matches!(
            final_bound(&[0.6, 0.9], 1.0),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
        assert!(matches!(
            final_bound(&reference_weights(), 0.0),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
        assert!(matches!(
            final_bound(&reference_weights(), f64::NAN),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
    }

    #[test]
    fn the_estimate_chain_is_coherent_on_the_reference_configuration() {
        let approx = rational_approximation(&reference_weights(), 0.1).expect("profile exists");
        let config = EmbezzleConfig::new(approx, 2).expect("configuration is valid");
        for weight in 1..=config.schmidt_rank() {
            for half_length in [0u64, 1, 2] {
                let report = bound_coherence(&config, weight, half_length)
                    .expect("estimate chain is non-decreasing");
                // The coarse defect is a rounding residue: the construction
                // reproduces the weight exactly.
                assert!(report.direct_defect < 1e-12);
                let lines = report.lines();
                for step in 1..lines.len() {
                    assert!(lines[step] >= lines[step - 1] - 1e-9);
                }
                // The closed form is exactly the three-term expression.
                let rungs = (2 * half_length + 1) as f64;
                let expected = PI * PI / (2.0 * rungs)
                    + (4 * half_length + 3) as f64 * config.approx().eps()
                    + rungs * 3f64.ln() / (config.pair_dim() as f64).ln_1p();
                assert!((report.closed_bound - expected).abs() < 1e-15);
            }
        }
    }
}
