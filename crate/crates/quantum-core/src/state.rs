//! Sparse tensor-product state vectors.
//!
//! States are stored as a map from multi-index basis labels to complex
//! amplitudes. Sparsity is not an optimization here but a requirement: the
//! embezzlement states have only D*d nonzero amplitudes inside a dense space
//! of D^2 * m^2 * d^2 entries, so any dense representation would cap the
//! coupling parameter at useless values.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{QuantumError, Result};
use crate::index::MultiIndex;
use crate::numeric::{CompensatedComplexSum, CompensatedSum};
use crate::policy;

/// A unit-norm state vector on a tensor-product space, stored sparsely.
///
/// Invariants enforced at construction:
/// - every stored label is within the shape's 1-based bounds;
/// - the squared moduli sum to 1 within the exact tolerance;
/// - no stored amplitude has modulus at or below the prune threshold
///   (default: only exact zeros are dropped).
#[derive(Clone, Debug, PartialEq)]
pub struct SparseState {
    shape: Vec<u32>,
    amplitudes: BTreeMap<MultiIndex, Complex64>,
}

impl SparseState {
    /// Build a state from explicit amplitudes, enforcing normalization.
    pub fn new(
        shape: Vec<u32>,
        entries: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let amplitudes = collect_amplitudes(&shape, entries)?;
        let state = SparseState { shape, amplitudes };
        let defect = (state.norm_sqr() - 1.0).abs();
        let tolerance = policy::current().tol_exact;
        if defect > tolerance {
            return Err(QuantumError::NotNormalized { defect, tolerance });
        }
        Ok(state)
    }

    /// Build a state from unnormalized amplitudes, rescaling to unit norm.
    pub fn normalized(
        shape: Vec<u32>,
        entries: impl IntoIterator<Item = (MultiIndex, Complex64)>,
    ) -> Result<Self> {
        let mut amplitudes = collect_amplitudes(&shape, entries)?;
        let mut norm_sqr = CompensatedSum::new();
        for amp in amplitudes.values() {
            norm_sqr.add(amp.norm_sqr());
        }
        let norm = norm_sqr.value().sqrt();
        if norm == 0.0 {
            return Err(QuantumError::ZeroNorm);
        }
        for amp in amplitudes.values_mut() {
            *amp /= norm;
        }
        Ok(SparseState { shape, amplitudes })
    }

    /// The basis vector labelled by `index`.
    pub fn basis_state(shape: Vec<u32>, index: MultiIndex) -> Result<Self> {
        SparseState::new(shape, [(index, Complex64::new(1.0, 0.0))])
    }

    pub fn shape(&self) -> &[u32] {
        &self.shape
    }

    /// Number of stored (nonzero) amplitudes.
    pub fn support_len(&self) -> usize {
        self.amplitudes.len()
    }

    /// Iterate stored amplitudes in deterministic (lexicographic) order.
    pub fn amplitudes(&self) -> impl Iterator<Item = (&MultiIndex, &Complex64)> {
        self.amplitudes.iter()
    }

    /// Amplitude at a basis label (zero if not stored).
    pub fn amp(&self, index: &MultiIndex) -> Complex64 {
        self.amplitudes
            .get(index)
            .copied()
            .unwrap_or(Complex64::new(0.0, 0.0))
    }

    /// Squared norm under compensated summation.
    pub fn norm_sqr(&self) -> f64 {
        let mut acc = CompensatedSum::new();
        for amp in self.amplitudes.values() {
            acc.add(amp.norm_sqr());
        }
        acc.value()
    }

    /// Inner product <self|other> (conjugate-linear in `self`).
    pub fn inner(&self, other: &SparseState) -> Result<Complex64> {
        self.check_same_shape(other)?;
        // iterate over the smaller support, look up in the larger
        let (small, large) = if self.support_len() <= other.support_len() {
            (self, other)
        } else {
            (other, self)
        };
        let mut acc = CompensatedComplexSum::new();
        for (index, amp) in small.amplitudes() {
            if let Some(other_amp) = large.amplitudes.get(index) {
                // restore argument order: <self|other> = conj(self) * other
                let term = if std::ptr::eq(small, self) {
                    amp.conj() * other_amp
                } else {
                    other_amp.conj() * amp
                };
                acc.add(term);
            }
        }
        Ok(acc.value())
    }

    pub(crate) fn check_same_shape(&self, other: &SparseState) -> Result<()> {
        if self.shape != other.shape {
            return Err(QuantumError::ShapeMismatch {
                expected: self.shape.clone(),
                got: other.shape.clone(),
            });
        }
        Ok(())
    }
}

fn collect_amplitudes(
    shape: &[u32],
    entries: impl IntoIterator<Item = (MultiIndex, Complex64)>,
) -> Result<BTreeMap<MultiIndex, Complex64>> {
    let prune = policy::current().prune_threshold;
    let mut amplitudes = BTreeMap::new();
    for (index, amp) in entries {
        index.validate_in(shape)?;
        let modulus = amp.norm();
        if modulus == 0.0 || modulus <= prune {
            continue;
        }
        if amplitudes.insert(index.clone(), amp).is_some() {
            return Err(QuantumError::DuplicateAmplitude {
                index: index.to_string(),
            });
        }
    }
    Ok(amplitudes)
}

/// The two-factor Schmidt state sum_i c_i |i,i> on shape (d, d).
///
/// The maximally entangled state is the special case c_i = 1/sqrt(d).
pub fn schmidt_state(c: &[f64], d: u32) -> Result<SparseState> {
    if c.len() != d as usize {
        return Err(QuantumError::InvalidArgument {
            detail: format!(
                "coefficient vector has length {}, expected dimension {d}",
                c.len()
            ),
        });
    }
    if let Some(bad) = c.iter().find(|&&ci| ci < 0.0 || !ci.is_finite()) {
        return Err(QuantumError::InvalidArgument {
            detail: format!("Schmidt coefficients must be finite and nonnegative, got {bad}"),
        });
    }
    let mut norm_sqr = CompensatedSum::new();
    for &ci in c {
        norm_sqr.add(ci * ci);
    }
    let defect = (norm_sqr.value() - 1.0).abs();
    let tolerance = policy::current().tol_exact;
    if defect > tolerance {
        return Err(QuantumError::NotNormalized { defect, tolerance });
    }
    SparseState::new(
        vec![d, d],
        c.iter().enumerate().map(|(i, &ci)| {
            let label = (i + 1) as u32;
            (
                MultiIndex::new(vec![label, label]),
                Complex64::new(ci, 0.0),
            )
        }),
    )
}

/// Maximally entangled two-factor state sum_i 1/sqrt(d) |i,i>.
pub fn maximally_entangled(d: u32) -> Result<SparseState> {
    let c = vec![1.0 / (d as f64).sqrt(); d as usize];
    schmidt_state(&c, d)
}

/// Overlap magnitude |<s1|s2>| (symmetric in its arguments).
pub fn fidelity(s1: &SparseState, s2: &SparseState) -> Result<f64> {
    Ok(s1.inner(s2)?.norm())
}

/// Tensor product: shapes concatenate, amplitudes multiply.
pub fn tensor_product(s1: &SparseState, s2: &SparseState) -> Result<SparseState> {
    let mut shape = s1.shape().to_vec();
    shape.extend_from_slice(s2.shape());
    let entries = s1.amplitudes().flat_map(|(i1, a1)| {
        s2.amplitudes().map(move |(i2, a2)| {
            let mut factors = i1.factors().to_vec();
            factors.extend_from_slice(i2.factors());
            (MultiIndex::new(factors), a1 * a2)
        })
    });
    // product of two unit-norm states is unit-norm; reuse the checking constructor
    SparseState::new(shape, entries.collect::<Vec<_>>())
}

/// Reorder tensor factors: output factor p takes the input factor perm[p].
///
/// `perm` must be a permutation of 0..arity. This exists because physically
/// identical states can carry their factors in different orders (a coupled
/// state built as (system x ancilla) versus a product built factor-group by
/// factor-group), and overlaps are only defined factor-by-factor.
pub fn permute_factors(state: &SparseState, perm: &[usize]) -> Result<SparseState> {
    let arity = state.shape().len();
    let mut seen = vec![false; arity];
    if perm.len() != arity || perm.iter().any(|&p| p >= arity || std::mem::replace(&mut seen[p], true)) {
        return Err(QuantumError::InvalidArgument {
            detail: format!("{perm:?} is not a permutation of 0..{arity}"),
        });
    }
    let shape: Vec<u32> = perm.iter().map(|&p| state.shape()[p]).collect();
    let entries: Vec<_> = state
        .amplitudes()
        .map(|(index, amp)| {
            let factors: Vec<u32> = perm.iter().map(|&p| index.get(p)).collect();
            (MultiIndex::new(factors), *amp)
        })
        .collect();
    SparseState::new(shape, entries)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn constructor_rejects_unnormalized_and_out_of_range() {
        let err = SparseState::new(vec![2], [(MultiIndex::new(vec![1]), c(0.5, 0.0))]);
        assert!(matches!(err, Err(QuantumError::NotNormalized { .. })));

        let err = SparseState::new(vec![2], [(MultiIndex::new(vec![3]), c(1.0, 0.0))]);
        assert!(matches!(err, Err(QuantumError::IndexOutOfRange { .. })));

        let err = SparseState::new(
            vec![2],
            [
                (MultiIndex::new(vec![1]), c(0.8, 0.0)),
                (MultiIndex::new(vec![1]), c(0.6, 0.0)),
            ],
        );
        assert!(matches!(err, Err(QuantumError::DuplicateAmplitude { .. })));
    }

    #[test]
    fn exact_zero_amplitudes_are_pruned() {
        let state = SparseState::new(
            vec![2],
            [
                (MultiIndex::new(vec![1]), c(1.0, 0.0)),
                (MultiIndex::new(vec![2]), c(0.0, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(state.support_len(), 1);
    }

    #[test]
    fn schmidt_state_places_diagonal_amplitudes() {
        // single basis vector when d = 1
        let trivial = schmidt_state(&[1.0], 1).unwrap();
        assert_eq!(trivial.amp(&MultiIndex::new(vec![1, 1])), c(1.0, 0.0));

        let s = schmidt_state(&[(1.0f64 / 3.0).sqrt(), (2.0f64 / 3.0).sqrt()], 2).unwrap();
        assert_eq!(s.support_len(), 2);
        assert!((s.amp(&MultiIndex::new(vec![2, 2])).re.powi(2) - 2.0 / 3.0).abs() < 1e-14);
        assert_eq!(s.amp(&MultiIndex::new(vec![1, 2])), c(0.0, 0.0));

        // defective coefficient vectors are named, not silently fixed
        assert!(matches!(
            schmidt_state(&[0.5, 0.5], 2),
            Err(QuantumError::NotNormalized { .. })
        ));
        assert!(schmidt_state(&[1.0], 2).is_err());
        assert!(schmidt_state(&[-1.0, 0.0], 2).is_err());
    }

    #[test]
    fn inner_product_is_conjugate_linear_in_first_argument() {
        let e1 = SparseState::basis_state(vec![2], MultiIndex::new(vec![1])).unwrap();
        let rot = SparseState::new(
            vec![2],
            [
                (MultiIndex::new(vec![1]), c(0.0, 0.6)),
                (MultiIndex::new(vec![2]), c(0.8, 0.0)),
            ],
        )
        .unwrap();
        assert_eq!(e1.inner(&rot).unwrap(), c(0.0, 0.6));
        assert_eq!(rot.inner(&e1).unwrap(), c(0.0, -0.6));
        // and the support-size fast path must not flip the conjugation
        assert_eq!(rot.inner(&rot).unwrap().im, 0.0);
    }

    #[test]
    fn fidelity_is_symmetric_and_bounded() {
        let s1 = maximally_entangled(2).unwrap();
        let s2 = schmidt_state(&[0.6, 0.8], 2).unwrap();
        let f12 = fidelity(&s1, &s2).unwrap();
        let f21 = fidelity(&s2, &s1).unwrap();
        assert!((f12 - f21).abs() < 1e-15);
        assert!((fidelity(&s1, &s1).unwrap() - 1.0).abs() < 1e-15);
        // orthogonal basis states
        let e1 = SparseState::basis_state(vec![2], MultiIndex::new(vec![1])).unwrap();
        let e2 = SparseState::basis_state(vec![2], MultiIndex::new(vec![2])).unwrap();
        assert_eq!(fidelity(&e1, &e2).unwrap(), 0.0);
    }

    #[test]
    fn tensor_product_and_permutation_agree() {
        let e1 = SparseState::basis_state(vec![2], MultiIndex::new(vec![1])).unwrap();
        let s = schmidt_state(&[0.6, 0.8], 2).unwrap();
        let prod = tensor_product(&e1, &s).unwrap();
        assert_eq!(prod.shape(), &[2, 2, 2]);
        assert_eq!(prod.amp(&MultiIndex::new(vec![1, 2, 2])), c(0.8, 0.0));

        // moving the first factor to the back relabels (1, i, i) -> (i, i, 1)
        let moved = permute_factors(&prod, &[1, 2, 0]).unwrap();
        assert_eq!(moved.amp(&MultiIndex::new(vec![2, 2, 1])), c(0.8, 0.0));
        assert!(permute_factors(&prod, &[0, 0, 1]).is_err());
    }
}
