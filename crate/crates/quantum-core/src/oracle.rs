//! Brute-force Born-rule oracle.
//!
//! Every closed-form probability in the verification pipeline is re-derived
//! here the slow way, with no structural shortcuts: the expectation value is
//! the literal double sum over stored amplitude pairs
//!
//!   <psi| P |psi> = sum_{x,y} conj(a_x) <x|P|y> a_y
//!
//! with the matrix element <x|P|y> computed factor by factor. The fast path
//! in [`crate::projector`] groups amplitudes and collapses each group in one
//! pass; this path deliberately does not, so agreement between the two is a
//! genuine cross-check rather than the same arithmetic twice.

use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::numeric::CompensatedComplexSum;
use crate::policy;
use crate::projector::{FactorProjector, ProductProjector};
use crate::state::SparseState;

/// Matrix element <x|P_f|y> of a single-factor projector.
fn factor_matrix_element(factor: &FactorProjector, x: u32, y: u32) -> Complex64 {
    match factor {
        FactorProjector::Id => {
            if x == y {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        FactorProjector::Basis(b) => {
            if x == *b && y == *b {
                Complex64::new(1.0, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        }
        FactorProjector::Vector(components) => {
            // <x| v><v |y> = v[x] * conj(v[y])
            let vx = components.get(&x).copied().unwrap_or(Complex64::new(0.0, 0.0));
            let vy = components.get(&y).copied().unwrap_or(Complex64::new(0.0, 0.0));
            vx * vy.conj()
        }
    }
}

/// Expectation of a product projector by exhaustive enumeration over
/// amplitude pairs. Quadratic in the support size — use for cross-checks,
/// not for production evaluation.
pub fn expectation_enumerated(state: &SparseState, projector: &ProductProjector) -> Result<f64> {
    if projector.factors().len() != state.shape().len() {
        return Err(QuantumError::ArityMismatch {
            shape_len: state.shape().len(),
            index_len: projector.factors().len(),
        });
    }
    let mut acc = CompensatedComplexSum::new();
    for (x, ax) in state.amplitudes() {
        for (y, ay) in state.amplitudes() {
            let mut element = Complex64::new(1.0, 0.0);
            for (position, factor) in projector.factors().iter().enumerate() {
                element *= factor_matrix_element(factor, x.get(position), y.get(position));
                if element == Complex64::new(0.0, 0.0) {
                    break;
                }
            }
            if element != Complex64::new(0.0, 0.0) {
                acc.add(ax.conj() * element * ay);
            }
        }
    }
    let value = acc.value();
    let tolerance = policy::current().tol_exact;
    if value.im.abs() > tolerance {
        return Err(QuantumError::ImaginaryResidue {
            quantity: "enumerated expectation",
            residue: value.im.abs(),
            tolerance,
        });
    }
    Ok(value.re)
}
