//! The rotated cross-term law on maximally entangled states:
//!
//!   <psi_d| [U_theta e_i (x) U_phi e_j] |psi_d> = sin^2(phi - theta) / d
//!
//! for every dimension d in {2,3,4}, every plane i != j, and angles on an
//! 8-point grid. This closed form carries the entire chained estimate, so it
//! is pinned both against the grouped fast path and the enumeration oracle.

use num_complex::Complex64;
use quantum_core::{
    maximally_entangled, oracle, projector_expectation, FactorProjector, ProductProjector,
};

/// Components of U_theta e_i in the (i, j) rotation plane:
/// U_theta e_i = cos(theta) e_i + sin(theta) e_j.
fn rotated_first(i: u32, j: u32, theta: f64) -> FactorProjector {
    FactorProjector::vector([
        (i, Complex64::new(theta.cos(), 0.0)),
        (j, Complex64::new(theta.sin(), 0.0)),
    ])
}

/// Components of U_phi e_j in the (i, j) rotation plane:
/// U_phi e_j = cos(phi) e_j - sin(phi) e_i.
fn rotated_second(i: u32, j: u32, phi: f64) -> FactorProjector {
    FactorProjector::vector([
        (i, Complex64::new(-phi.sin(), 0.0)),
        (j, Complex64::new(phi.cos(), 0.0)),
    ])
}

#[test]
fn cross_term_law_holds_on_the_angle_grid() {
    let grid: Vec<f64> = (0..8)
        .map(|k| k as f64 * std::f64::consts::PI / 8.0)
        .collect();
    let mut checked = 0usize;
    for d in [2u32, 3, 4] {
        let psi = maximally_entangled(d).unwrap();
        for i in 1..=d {
            for j in 1..=d {
                if i == j {
                    continue;
                }
                for &theta in &grid {
                    for &phi in &grid {
                        let projector = ProductProjector::new(vec![
                            rotated_first(i, j, theta),
                            rotated_second(i, j, phi),
                        ])
                        .unwrap();
                        let value = projector_expectation(&psi, &projector).unwrap();
                        let closed_form = (phi - theta).sin().powi(2) / d as f64;
                        assert!(
                            (value - closed_form).abs() < 1e-10,
                            "d={d} i={i} j={j} theta={theta} phi={phi}: \
                             expectation {value} vs closed form {closed_form}"
                        );
                        checked += 1;
                    }
                }
            }
        }
    }
    // 8x8 grid over all ordered planes: (2 + 6 + 12) planes x 64 angle pairs
    assert_eq!(checked, 20 * 64);
}

#[test]
fn cross_term_law_agrees_with_the_enumeration_oracle() {
    // spot-check the independent quadratic-time oracle on a sparser grid
    let grid = [0.0, 0.55, 1.1, 2.2];
    for d in [2u32, 3, 4] {
        let psi = maximally_entangled(d).unwrap();
        for (i, j) in [(1u32, 2u32), (d - 1, d)] {
            if i == j {
                continue;
            }
            for &theta in &grid {
                for &phi in &grid {
                    let projector = ProductProjector::new(vec![
                        rotated_first(i, j, theta),
                        rotated_second(i, j, phi),
                    ])
                    .unwrap();
                    let enumerated = oracle::expectation_enumerated(&psi, &projector).unwrap();
                    let closed_form = (phi - theta).sin().powi(2) / d as f64;
                    assert!(
                        (enumerated - closed_form).abs() < 1e-10,
                        "d={d} i={i} j={j}: oracle {enumerated} vs closed form {closed_form}"
                    );
                }
            }
        }
    }
}

#[test]
fn perfect_correlations_suppress_mismatched_rotated_projectors_at_equal_angles() {
    // at theta = phi the cross term vanishes identically for any plane
    for d in [2u32, 3, 4] {
        let psi = maximally_entangled(d).unwrap();
        for theta in [0.0, 0.77, 1.31] {
            let projector = ProductProjector::new(vec![
                rotated_first(1, 2, theta),
                rotated_second(1, 2, theta),
            ])
            .unwrap();
            let value = projector_expectation(&psi, &projector).unwrap();
            assert!(value.abs() < 1e-12, "d={d} theta={theta}: {value}");
        }
    }
}
