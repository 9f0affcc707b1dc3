//! Telescoping rotation ladders on the embezzled state.
//!
//! A ladder connects the probability of one outcome to the probability of
//! another by stepping a pair of rotated observables across the quarter
//! circle in increments of δ = π/(2(2L+1)).  Adjacent rungs differ by a
//! cross-term whose exact value is known in closed form (and re-verified
//! against the brute-force oracle at every link), and the final rung closes
//! onto the destination outcome exactly.  Summing the links therefore bounds
//! the gap between the two endpoint probabilities.
//!
//! Two orientations exist, differing only in which side carries the even
//! multiples of δ.  The link *values* coincide (the cross-term is symmetric
//! in the two angles), but the telescoped endpoints live on opposite sides:
//! the right-started ladder bounds the right observable's gap, the
//! left-started ladder the left observable's.

use std::f64::consts::FRAC_PI_2;

use quantum_core::numeric::CompensatedSum;
use quantum_core::{policy, SparseState};

use crate::config::EmbezzleConfig;
use crate::error::{EmbezzleError, Result};
use crate::estimates::{closed_form_oracle_check_on, zero_term_check_on, ZeroTermReport};
use crate::rotation::{rotated_observables_on, RotationPair};
use crate::state::build_psi_f;

/// Which side of the bipartite state starts the ladder at angle zero.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LadderOrientation {
    /// Right observables sit at even multiples of δ, left at odd multiples.
    /// Telescopes the gap between the two *right*-side outcome probabilities.
    RightStart,
    /// Mirror image: left observables at even multiples, right at odd.
    /// Telescopes the *left*-side gap.
    LeftStart,
}

/// One link of the ladder: a pair of rotation angles, the closed-form
/// cross-term value at those angles, and the endpoint gap the link bounds.
#[derive(Clone, Copy, Debug)]
pub struct LadderLink {
    /// Rotation angle applied to the left observable.
    pub left_angle: f64,
    /// Rotation angle applied to the right observable.
    pub right_angle: f64,
    /// Oracle-verified closed-form cross-term value at these angles.
    pub value: f64,
    /// |p(source at one angle) − p(source at the other)| across the link.
    pub gap: f64,
}

/// Full record of a telescoping ladder run.
#[derive(Clone, Debug)]
pub struct LadderReport {
    /// Orientation the ladder was run in.
    pub orientation: LadderOrientation,
    /// Ladder parameter L; the ladder has 2L + 2 links in total.
    pub half_length: u64,
    /// Step size δ = π / (2(2L + 1)).
    pub step: f64,
    /// The 2L + 1 cross-term links, in telescoping order.
    pub links: Vec<LadderLink>,
    /// The closing link, exact up to rotation dust.
    pub closing: ZeroTermReport,
    /// Sum of all link values (the closing link contributes exactly zero).
    pub total: f64,
    /// |p(source) − p(destination)| for the unrotated observable on the
    /// telescoped side.
    pub endpoint_gap: f64,
}

/// Run a telescoping ladder of parameter `half_length` between the two
/// outcomes of `pair`, verifying every link against the brute-force oracle
/// and checking that the summed link values dominate the endpoint gap.
pub fn more_chains_ladder(
    config: &EmbezzleConfig,
    pair: &RotationPair,
    half_length: u64,
    orientation: LadderOrientation,
) -> Result<LadderReport> {
    let psi_f = build_psi_f(config)?;
    more_chains_ladder_on(config, &psi_f, pair, half_length, orientation)
}

/// [`more_chains_ladder`] on a caller-supplied final state.
pub fn more_chains_ladder_on(
    config: &EmbezzleConfig,
    psi_f: &SparseState,
    pair: &RotationPair,
    half_length: u64,
    orientation: LadderOrientation,
) -> Result<LadderReport> {
    let rungs = 2 * half_length + 1;
    let step = FRAC_PI_2 / rungs as f64;
    let tol = policy::current().tol_oracle;

    // Telescoping angle sequence: 0, δ, 2δ, …, (2L+1)δ = π/2.  Each adjacent
    // pair of angles is one link; the parity of the lower angle decides which
    // side moved.  In the RightStart orientation the right observable holds
    // the even multiples, so the sequence of measured probabilities starts at
    // the unrotated right source outcome and ends at the quarter-turned left
    // observable, which the closing link identifies with the unrotated right
    // destination outcome.
    let mut links = Vec::with_capacity(rungs as usize);
    let mut total = CompensatedSum::new();
    let (src_i, src_j) = pair.from_outcome();
    for lower in 0..rungs {
        let low = lower as f64 * step;
        let high = (lower + 1) as f64 * step;
        let (theta, phi) = match orientation {
            // Even multiples on the right: links pair a right angle 2lδ with
            // a left angle (2l±1)δ, so whichever of (low, high) is even goes
            // to φ and the odd one to θ.
            LadderOrientation::RightStart if lower % 2 == 0 => (high, low),
            LadderOrientation::RightStart => (low, high),
            LadderOrientation::LeftStart if lower % 2 == 0 => (low, high),
            LadderOrientation::LeftStart => (high, low),
        };
        let (value, _residual) = closed_form_oracle_check_on(config, psi_f, pair, theta, phi)?;

        let rotated = rotated_observables_on(config, psi_f, pair, theta, phi)?;
        let left = rotated.left_probability(config, src_i, src_j)?;
        let right = rotated.right_probability(config, src_i, src_j)?;
        let gap = (left - right).abs();
        if gap > value + tol {
            return Err(EmbezzleError::Internal {
                detail: format!(
                    "ladder link at (θ={theta}, φ={phi}) has gap {gap} above its value {value}"
                ),
            });
        }

        total.add(value);
        links.push(LadderLink {
            left_angle: theta,
            right_angle: phi,
            value,
            gap,
        });
    }

    let closing = zero_term_check_on(config, psi_f, pair)?;
    let closing_gap = match orientation {
        LadderOrientation::RightStart => closing.direct_gap,
        LadderOrientation::LeftStart => closing.mirrored_gap,
    };
    let total = total.value();

    // The telescoped endpoint gap on the unrotated state.
    let plain = rotated_observables_on(config, psi_f, pair, 0.0, 0.0)?;
    let (dst_i, dst_j) = pair.to_outcome();
    let endpoint_gap = match orientation {
        LadderOrientation::RightStart => (plain.right_probability(config, src_i, src_j)?
            - plain.right_probability(config, dst_i, dst_j)?)
        .abs(),
        LadderOrientation::LeftStart => (plain.left_probability(config, src_i, src_j)?
            - plain.left_probability(config, dst_i, dst_j)?)
        .abs(),
    };
    if endpoint_gap > total + closing_gap + tol {
        return Err(EmbezzleError::Internal {
            detail: format!(
                "telescoped endpoint gap {endpoint_gap} exceeds the ladder total {total}"
            ),
        });
    }

    Ok(LadderReport {
        orientation,
        half_length,
        step,
        links,
        closing,
        total,
        endpoint_gap,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::EmbezzleConfig;
    use crate::rational::rational_approximation;
    use crate::rotation::RotationPair;

    fn reference_config() -> EmbezzleConfig {
        let approx = rational_approximation(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()], 0.1)
            .expect("reference weights admit a rational profile");
        EmbezzleConfig::new(approx, 2).expect("reference configuration is valid")
    }

    fn reference_pair(config: &EmbezzleConfig) -> RotationPair {
        RotationPair::new(config, 1, 1, 2, 1).expect("outcomes exist")
    }

    #[test]
    fn ladder_has_the_expected_shape_and_bounds_its_endpoint_gap() {
        let config = reference_config();
        let pair = reference_pair(&config);
        for half_length in [0u64, 1, 3] {
            let report =
                more_chains_ladder(&config, &pair, half_length, LadderOrientation::RightStart)
                    .expect("ladder runs");
            assert_eq!(report.links.len(), (2 * half_length + 1) as usize);
            assert!(report.endpoint_gap <= report.total + 1e-9);
            assert_eq!(report.closing.correlation_sum, 0.0);
            // Every link angle is a multiple of δ, and adjacent angles differ
            // by exactly one step.
            for (idx, link) in report.links.iter().enumerate() {
                let low = link.left_angle.min(link.right_angle);
                let high = link.left_angle.max(link.right_angle);
                assert!((low - idx as f64 * report.step).abs() < 1e-12);
                assert!((high - (idx + 1) as f64 * report.step).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn the_two_orientations_agree_on_the_total_and_on_the_gap() {
        let config = reference_config();
        let pair = reference_pair(&config);
        for half_length in [0u64, 2] {
            let right =
                more_chains_ladder(&config, &pair, half_length, LadderOrientation::RightStart)
                    .expect("right-start ladder runs");
            let left =
                more_chains_ladder(&config, &pair, half_length, LadderOrientation::LeftStart)
                    .expect("left-start ladder runs");
            // The cross-term is symmetric in its two angles, so the link
            // values — and hence the totals — coincide.  The endpoint gaps
            // live on opposite sides but agree because the state treats the
            // two parties symmetrically.
            assert!((right.total - left.total).abs() < 1e-12);
            assert!((right.endpoint_gap - left.endpoint_gap).abs() < 1e-12);
            for (r, l) in right.links.iter().zip(left.links.iter()) {
                assert!((r.value - l.value).abs() < 1e-12);
                assert!((r.left_angle - l.right_angle).abs() < 1e-12);
                assert!((r.right_angle - l.left_angle).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn even_multiples_sit_on_the_starting_side() {
        let config = reference_config();
        let pair = reference_pair(&config);
        let report = more_chains_ladder(&config, &pair, 1, LadderOrientation::RightStart)
            .expect("ladder runs");
        // First link: right at 0, left at δ.  Second: right at 2δ, left at δ.
        assert_eq!(report.links[0].right_angle, 0.0);
        assert!((report.links[0].left_angle - report.step).abs() < 1e-15);
        assert!((report.links[1].right_angle - 2.0 * report.step).abs() < 1e-15);
        assert!((report.links[1].left_angle - report.step).abs() < 1e-15);
        // Last link reaches the quarter turn on the moving side.
        let last = report.links.last().expect("ladder is non-empty");
        assert!((last.left_angle - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn the_single_link_ladder_total_matches_the_harmonic_closed_form() {
        // At L = 0 the one cross-term link sits at (π/2, 0), where the
        // angle-difference factor is one and the double-angle factor
        // vanishes, so the total reduces to C²(c_i²·H_i + c_ĩ²·H_ĩ) with
        // each H the harmonic sum over that outcome's ladder rungs.
        let config = reference_config();
        let pair = reference_pair(&config);
        let report = more_chains_ladder(&config, &pair, 0, LadderOrientation::RightStart)
            .expect("ladder runs");
        assert_eq!(report.links.len(), 1);

        let index = config.index();
        let mut expected = 0.0;
        for &(weight, slot) in &[pair.from_outcome(), pair.to_outcome()] {
            let mut harmonic = 0.0;
            for block in 1..=config.block_count(weight).expect("weight exists") {
                harmonic +=
                    1.0 / index.k_of(block, weight, slot).expect("rung exists") as f64;
            }
            let c = config.weight(weight).expect("weight exists");
            expected += config.normalizer().powi(2) * c * c * harmonic;
        }
        assert!((report.total - expected).abs() < 1e-12);
    }
}
