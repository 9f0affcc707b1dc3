//! The rotation ladder: a family of interleaved measurement angles that walks
//! an outcome pair from one basis direction to the other in equal steps.

use quantum_core::{StructuredUnitary, UnitaryRule};

use crate::error::{ChainError, Result};

/// Givens rotation in the (i, j) coordinate plane of a single d-level
/// factor: e_i ↦ cosθ e_i + sinθ e_j, e_j ↦ cosθ e_j − sinθ e_i, identity
/// elsewhere.
pub fn rotation_unitary(d: u32, i: u32, j: u32, theta: f64) -> Result<StructuredUnitary> {
    check_pair(d, i, j)?;
    if !(0.0..=std::f64::consts::FRAC_PI_2 + 1e-15).contains(&theta) {
        return Err(ChainError::AngleOutOfRange { theta });
    }
    Ok(StructuredUnitary::new(
        vec![d],
        vec![0],
        vec![UnitaryRule::Rotation {
            a: vec![i],
            b: vec![j],
            theta,
        }],
    )?)
}

fn check_pair(d: u32, i: u32, j: u32) -> Result<()> {
    if d < 2 || i == j || i == 0 || j == 0 || i > d || j > d {
        return Err(ChainError::BadOutcomePair { d, i, j });
    }
    Ok(())
}

/// The angle ladder for one outcome pair: the quarter circle is divided into
/// 2N+1 equal steps of size δ = π/(2(2N+1)). The first-side measurements
/// A_n sit at the even multiples 2nδ (n = 0..=N), the second-side
/// measurements B_n at the odd multiples (2n+1)δ, so consecutive ladder
/// angles A_0, B_0, A_1, B_1, …, A_N, B_N differ by exactly δ, starting at 0
/// and ending at π/2.
#[derive(Clone, Debug)]
pub struct RotationLadder {
    d: u32,
    i: u32,
    j: u32,
    half_length: usize,
}

/// One inequality line of the chained estimate: either an adjacent-angle
/// rung comparing `a_side` and `b_side` measurements one step apart, or the
/// closing perfect-correlation line pairing A_0 with B_N across the full
/// quarter circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RungKind {
    /// |p_{A_n}(a_i) − p_{B_m}(b_i)| with |θ − φ| = δ.
    Adjacent,
    /// |p_{B_N}(b_i) − p_{A_0}(a_j)|, closed by perfect correlations.
    Closing,
}

/// Descriptor of one rung: which A- and B-side ladder positions it couples,
/// at which angles, and which joint response tag serves it.
#[derive(Clone, Debug)]
pub struct Rung {
    pub kind: RungKind,
    /// A-side ladder position n (angle 2nδ).
    pub a_position: usize,
    /// B-side ladder position m (angle (2m+1)δ).
    pub b_position: usize,
    pub theta: f64,
    pub phi: f64,
}

impl RotationLadder {
    pub fn new(d: u32, i: u32, j: u32, half_length: usize) -> Result<Self> {
        check_pair(d, i, j)?;
        Ok(RotationLadder {
            d,
            i,
            j,
            half_length,
        })
    }

    pub fn dimension(&self) -> u32 {
        self.d
    }

    /// 1-based index of the outcome being walked.
    pub fn outcome_i(&self) -> u32 {
        self.i
    }

    /// 1-based index of the outcome being compared against.
    pub fn outcome_j(&self) -> u32 {
        self.j
    }

    pub fn half_length(&self) -> usize {
        self.half_length
    }

    /// Number of equal angle steps: 2N+1.
    pub fn steps(&self) -> usize {
        2 * self.half_length + 1
    }

    /// The step size δ = π/(2(2N+1)).
    pub fn delta(&self) -> f64 {
        std::f64::consts::FRAC_PI_2 / self.steps() as f64
    }

    /// Angle of A_n: 2nδ.
    pub fn a_angle(&self, n: usize) -> f64 {
        2.0 * n as f64 * self.delta()
    }

    /// Angle of B_n: (2n+1)δ.
    pub fn b_angle(&self, n: usize) -> f64 {
        (2 * n + 1) as f64 * self.delta()
    }

    /// All 2N+2 ladder angles in walking order A_0, B_0, A_1, …, A_N, B_N.
    pub fn angles(&self) -> Vec<f64> {
        let mut angles = Vec::with_capacity(2 * self.half_length + 2);
        for n in 0..=self.half_length {
            angles.push(self.a_angle(n));
            angles.push(self.b_angle(n));
        }
        angles
    }

    /// The rotation at an A-side ladder position.
    pub fn a_unitary(&self, n: usize) -> Result<StructuredUnitary> {
        rotation_unitary(self.d, self.i, self.j, self.a_angle(n))
    }

    /// The rotation at a B-side ladder position.
    pub fn b_unitary(&self, n: usize) -> Result<StructuredUnitary> {
        rotation_unitary(self.d, self.i, self.j, self.b_angle(n))
    }

    /// Tag of the first-side local response at ladder position n.
    pub fn a_tag(&self, n: usize) -> String {
        format!("A[{n}]")
    }

    /// Tag of the second-side local response at ladder position n.
    pub fn b_tag(&self, n: usize) -> String {
        format!("B[{n}]")
    }

    /// Tag of the joint response coupling A-side position n with B-side
    /// position m.
    pub fn joint_tag(&self, n: usize, m: usize) -> String {
        format!("A[{n}]⊗B[{m}]")
    }

    /// First-side outcome labels a_1 … a_d.
    pub fn outcome_a(&self, k: u32) -> String {
        format!("a_{k}")
    }

    /// Second-side outcome labels b_1 … b_d.
    pub fn outcome_b(&self, k: u32) -> String {
        format!("b_{k}")
    }

    /// The 2N+2 inequality lines of the chained estimate in proof order:
    /// rungs (A_n, B_n) for n = 0..=N, rungs (A_{n+1}, B_n) for
    /// n = 0..N, and the closing line (A_0, B_N).
    pub fn rungs(&self) -> Vec<Rung> {
        let mut rungs = Vec::with_capacity(2 * self.half_length + 2);
        for n in 0..=self.half_length {
            rungs.push(Rung {
                kind: RungKind::Adjacent,
                a_position: n,
                b_position: n,
                theta: self.a_angle(n),
                phi: self.b_angle(n),
            });
        }
        for n in 0..self.half_length {
            rungs.push(Rung {
                kind: RungKind::Adjacent,
                a_position: n + 1,
                b_position: n,
                theta: self.a_angle(n + 1),
                phi: self.b_angle(n),
            });
        }
        rungs.push(Rung {
            kind: RungKind::Closing,
            a_position: 0,
            b_position: self.half_length,
            theta: self.a_angle(0),
            phi: self.b_angle(self.half_length),
        });
        rungs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ladder_angles_walk_the_quarter_circle_in_equal_steps() {
        for n in [0usize, 1, 2, 7] {
            let ladder = RotationLadder::new(3, 1, 3, n).unwrap();
            let angles = ladder.angles();
            assert_eq!(angles.len(), 2 * n + 2);
            assert_eq!(angles[0], 0.0);
            assert!((angles[angles.len() - 1] - std::f64::consts::FRAC_PI_2).abs() <= 1e-15);
            for pair in angles.windows(2) {
                assert!((pair[1] - pair[0] - ladder.delta()).abs() <= 1e-15);
            }
        }
    }

    #[test]
    fn rung_count_and_gaps() {
        let ladder = RotationLadder::new(2, 1, 2, 3).unwrap();
        let rungs = ladder.rungs();
        assert_eq!(rungs.len(), 2 * 3 + 2);
        let adjacent = rungs.iter().filter(|r| r.kind == RungKind::Adjacent);
        for rung in adjacent {
            assert!((rung.phi - rung.theta).abs() - ladder.delta() <= 1e-15);
        }
        let closing = rungs.last().unwrap();
        assert_eq!(closing.kind, RungKind::Closing);
        assert_eq!(closing.a_position, 0);
        assert_eq!(closing.b_position, 3);
    }

    #[test]
    fn degenerate_ladder_has_two_lines() {
        let ladder = RotationLadder::new(2, 1, 2, 0).unwrap();
        assert_eq!(ladder.rungs().len(), 2);
        assert!((ladder.delta() - std::f64::consts::FRAC_PI_2).abs() <= 1e-15);
    }

    #[test]
    fn bad_pairs_are_rejected() {
        assert!(matches!(
            RotationLadder::new(2, 1, 1, 1),
            Err(ChainError::BadOutcomePair { .. })
        ));
        assert!(matches!(
            RotationLadder::new(2, 0, 1, 1),
            Err(ChainError::BadOutcomePair { .. })
        ));
        assert!(matches!(
            RotationLadder::new(2, 1, 3, 1),
            Err(ChainError::BadOutcomePair { .. })
        ));
        assert!(matches!(
            rotation_unitary(3, 1, 2, -0.1),
            Err(ChainError::AngleOutOfRange { .. })
        ));
    }
}
