//! Integer-weight approximation of a Schmidt spectrum.
//!
//! Every squared Schmidt weight c_i² is replaced by a rational n_i/d with a
//! common denominator d = Σ n_i, chosen so that every ratio c_i²·d/n_i lies in
//! the open window (1−ε, 1+ε). The integer profile n is what the coupled-pair
//! construction consumes: n_i counts how many equal-weight "slots" weight i
//! receives, so the approximation error ε propagates linearly into the final
//! bound while all downstream combinatorics stay exact.

use crate::error::{EmbezzleError, Result};

/// Default cap on the scanned common denominator.
pub const DEFAULT_DENOMINATOR_CAP: u64 = 1_000_000;

/// Tolerance on Σ c_i² = 1 for caller-supplied weights.
const WEIGHT_NORM_TOL: f64 = 1e-9;

/// An integer profile n with Σ n_i = d approximating the squared weights
/// c_i² by n_i/d, each within a relative factor in (1−ε, 1+ε).
#[derive(Clone, Debug, PartialEq)]
pub struct RationalApprox {
    c: Vec<f64>,
    eps: f64,
    counts: Vec<u64>,
}

impl RationalApprox {
    /// The positive Schmidt weights (amplitudes, Σ c_i² = 1) being approximated.
    pub fn c(&self) -> &[f64] {
        &self.c
    }

    /// The approximation window half-width ε.
    pub fn eps(&self) -> f64 {
        self.eps
    }

    /// The integer slot counts n_i.
    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    /// Number of weights (the Schmidt rank d).
    pub fn rank(&self) -> usize {
        self.c.len()
    }

    /// The common denominator d = Σ n_i.
    pub fn d_eps(&self) -> u64 {
        self.counts.iter().sum()
    }

    /// The largest slot count m = max n_i.
    pub fn m_eps(&self) -> u64 {
        *self.counts.iter().max().expect("counts are non-empty")
    }

    /// The product Π n_i (the period of the slot layout).
    pub fn count_product(&self) -> Result<u64> {
        let mut product: u64 = 1;
        for &n in &self.counts {
            product = product
                .checked_mul(n)
                .ok_or_else(|| EmbezzleError::InvalidArgument {
                    detail: "slot count product overflows u64".into(),
                })?;
        }
        Ok(product)
    }

    /// The relative ratios c_i²·d/n_i, each inside (1−ε, 1+ε) by construction.
    pub fn ratios(&self) -> Vec<f64> {
        let d = self.d_eps() as f64;
        self.c
            .iter()
            .zip(&self.counts)
            .map(|(&c, &n)| c * c * d / n as f64)
            .collect()
    }
}

fn validate_weights(c: &[f64]) -> Result<()> {
    if c.is_empty() {
        return Err(EmbezzleError::InvalidArgument {
            detail: "weight vector is empty".into(),
        });
    }
    let mut norm_sqr = 0.0;
    for (position, &weight) in c.iter().enumerate() {
        if !weight.is_finite() || weight <= 0.0 {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!(
                    "weight {position} is {weight}; weights must be finite and strictly positive \
                     (drop exact zeros before calling)"
                ),
            });
        }
        norm_sqr += weight * weight;
    }
    if (norm_sqr - 1.0).abs() > WEIGHT_NORM_TOL {
        return Err(EmbezzleError::InvalidArgument {
            detail: format!("squared weights sum to {norm_sqr}, expected 1"),
        });
    }
    Ok(())
}

/// Round each c_i²·d to the nearest integer, then repair the total to exactly
/// d by bumping the entries with the largest positive residual (or shrinking
/// the ones with the smallest residual), never letting a count drop below 1.
/// Ties break on the lower index, so the profile is deterministic.
fn integer_profile(c: &[f64], d: u64) -> Option<Vec<u64>> {
    let d_f = d as f64;
    let mut counts: Vec<u64> = c
        .iter()
        .map(|&weight| (weight * weight * d_f).round().max(1.0) as u64)
        .collect();
    let residual = |counts: &[u64], i: usize| c[i] * c[i] * d_f - counts[i] as f64;
    loop {
        let total: u64 = counts.iter().sum();
        if total == d {
            return Some(counts);
        }
        if total < d {
            // Give the missing slot to the most under-rounded weight.
            let i = (0..counts.len())
                .max_by(|&a, &b| {
                    residual(&counts, a)
                        .partial_cmp(&residual(&counts, b))
                        .expect("residuals are finite")
                        .then(b.cmp(&a))
                })
                .expect("counts are non-empty");
            counts[i] += 1;
        } else {
            // Take the surplus slot from the most over-rounded weight that
            // can still afford to lose one.
            let i = (0..counts.len())
                .filter(|&i| counts[i] > 1)
                .min_by(|&a, &b| {
                    residual(&counts, a)
                        .partial_cmp(&residual(&counts, b))
                        .expect("residuals are finite")
                        .then(a.cmp(&b))
                })?;
            counts[i] -= 1;
        }
    }
}

/// Relative guard band on the window boundary.  A profile whose worst ratio
/// is mathematically *equal* to 1 ± ε must be rejected (the window is open),
/// but squaring and dividing the weights leaves float residue of a few ulps
/// that could push such a ratio a hair inside.  Shrinking the window by a
/// relative 1e-9 keeps every boundary case out without touching profiles
/// that are genuinely interior.
const WINDOW_GUARD: f64 = 1e-9;

fn window_holds(c: &[f64], counts: &[u64], d: u64, eps: f64) -> bool {
    let d_f = d as f64;
    let margin = eps * (1.0 - WINDOW_GUARD);
    c.iter().zip(counts).all(|(&weight, &n)| {
        let ratio = weight * weight * d_f / n as f64;
        (ratio - 1.0).abs() < margin
    })
}

/// Find the smallest common denominator whose rounded integer profile puts
/// every ratio c_i²·d/n_i strictly inside (1−ε, 1+ε).
///
/// The scan starts at d = rank (the smallest denominator that can give every
/// weight at least one slot) and walks upward; the first admissible profile
/// wins, so the result is deterministic and minimizes the downstream
/// dimensions.
pub fn rational_approximation(c: &[f64], eps: f64) -> Result<RationalApprox> {
    rational_approximation_capped(c, eps, DEFAULT_DENOMINATOR_CAP)
}

/// [`rational_approximation`] with an explicit denominator cap.
pub fn rational_approximation_capped(c: &[f64], eps: f64, cap: u64) -> Result<RationalApprox> {
    if !eps.is_finite() || eps <= 0.0 {
        return Err(EmbezzleError::InvalidArgument {
            detail: format!("eps must be strictly positive, got {eps}"),
        });
    }
    validate_weights(c)?;
    let rank = c.len() as u64;
    for d in rank..=cap {
        let Some(counts) = integer_profile(c, d) else {
            continue;
        };
        if window_holds(c, &counts, d, eps) {
            return Ok(RationalApprox {
                c: c.to_vec(),
                eps,
                counts,
            });
        }
    }
    Err(EmbezzleError::ApproximationFailed { eps, cap })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn amplitudes(squares: &[f64]) -> Vec<f64> {
        squares.iter().map(|&s| s.sqrt()).collect()
    }

    #[test]
    fn one_third_two_thirds_is_exact_at_denominator_three() {
        let approx = rational_approximation(&amplitudes(&[1.0 / 3.0, 2.0 / 3.0]), 0.1).unwrap();
        assert_eq!(approx.counts(), &[1, 2]);
        assert_eq!(approx.d_eps(), 3);
        assert_eq!(approx.m_eps(), 2);
        for ratio in approx.ratios() {
            assert!((ratio - 1.0).abs() < 1e-12, "ratio {ratio} should be exact");
        }
    }

    #[test]
    fn equal_weights_need_only_one_slot_each() {
        let approx = rational_approximation(&amplitudes(&[0.5, 0.5]), 0.01).unwrap();
        assert_eq!(approx.counts(), &[1, 1]);
        assert_eq!(approx.d_eps(), 2);
    }

    #[test]
    fn three_tenths_seven_tenths_lands_on_denominator_ten() {
        let approx = rational_approximation(&amplitudes(&[0.3, 0.7]), 0.05).unwrap();
        assert_eq!(approx.counts(), &[3, 7]);
        assert_eq!(approx.d_eps(), 10);
        for ratio in approx.ratios() {
            assert!((ratio - 1.0).abs() < 1e-12, "ratio {ratio} should be exact");
        }
    }

    #[test]
    fn window_is_enforced_on_every_weight() {
        // An uneven three-weight spectrum: whatever denominator the scan
        // lands on, every ratio must sit strictly inside the window.
        let c = amplitudes(&[0.15, 0.35, 0.5]);
        let approx = rational_approximation(&c, 0.07).unwrap();
        assert_eq!(approx.d_eps(), approx.counts().iter().sum::<u64>());
        for ratio in approx.ratios() {
            assert!(ratio > 0.93 && ratio < 1.07, "ratio {ratio} outside window");
        }
    }

    #[test]
    fn nonpositive_eps_is_rejected() {
        let c = amplitudes(&[0.5, 0.5]);
        assert!(matches!(
            rational_approximation(&c, 0.0),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
        assert!(matches!(
            rational_approximation(&c, -0.1),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
    }

    #[test]
    fn unnormalized_or_nonpositive_weights_are_rejected() {
        assert!(matches!(
            rational_approximation(&[0.5, 0.5], 0.1),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
        assert!(matches!(
            rational_approximation(&[1.0, 0.0], 0.1),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
        assert!(matches!(
            rational_approximation(&[], 0.1),
            Err(EmbezzleError::InvalidArgument { .. })
        ));
    }

    #[test]
    fn impossible_window_reports_the_cap() {
        // An irrational split admits no exact rational profile, so a 1e-15
        // window can never close below any finite cap.
        let c = amplitudes(&[1.0 / std::f64::consts::PI, 1.0 - 1.0 / std::f64::consts::PI]);
        let err = rational_approximation_capped(&c, 1e-15, 50).unwrap_err();
        match err {
            EmbezzleError::ApproximationFailed { eps, cap } => {
                assert_eq!(eps, 1e-15);
                assert_eq!(cap, 50);
            }
            other => panic!("expected ApproximationFailed, got {other:?}"),
        }
    }

    #[test]
    fn profile_repair_preserves_the_total_and_floors_at_one() {
        // A tiny weight rounds to zero slots at small denominators; the
        // repair pass must keep it at one slot and still hit the total.
        let c = amplitudes(&[0.02, 0.49, 0.49]);
        let approx = rational_approximation(&c, 0.9).unwrap();
        assert!(approx.counts().iter().all(|&n| n >= 1));
        assert_eq!(approx.d_eps(), approx.counts().iter().sum::<u64>());
    }
}
