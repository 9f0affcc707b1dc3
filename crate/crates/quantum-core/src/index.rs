//! Multi-index basis labels for tensor-product spaces.
//!
//! A basis vector of a product space with shape (d_1, ..., d_n) is labelled
//! by one 1-based index per factor. Six-factor labels like (k, k~, j, j~, i, i~)
//! are the working currency of the embezzlement construction, so the type is
//! kept cheap to clone, ordered (for deterministic iteration) and hashable.

use std::fmt;

use crate::error::{QuantumError, Result};

/// Ordered sequence of 1-based basis indices, one per tensor factor.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(factors: Vec<u32>) -> Self {
        MultiIndex(factors)
    }

    pub fn factors(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Index at a 0-based factor position.
    pub fn get(&self, position: usize) -> u32 {
        self.0[position]
    }

    /// The sub-tuple at the given 0-based factor positions.
    pub fn sub(&self, positions: &[usize]) -> Vec<u32> {
        positions.iter().map(|&p| self.0[p]).collect()
    }

    /// Copy of this index with the entries at `positions` replaced by `values`.
    pub fn with_sub(&self, positions: &[usize], values: &[u32]) -> MultiIndex {
        debug_assert_eq!(positions.len(), values.len());
        let mut out = self.0.clone();
        for (&p, &v) in positions.iter().zip(values) {
            out[p] = v;
        }
        MultiIndex(out)
    }

    /// Check 1-based bounds against a shape.
    pub fn validate_in(&self, shape: &[u32]) -> Result<()> {
        if self.0.len() != shape.len() {
            return Err(QuantumError::ArityMismatch {
                shape_len: shape.len(),
                index_len: self.0.len(),
            });
        }
        for (position, (&index, &dimension)) in self.0.iter().zip(shape).enumerate() {
            if index == 0 || index > dimension {
                return Err(QuantumError::IndexOutOfRange {
                    position,
                    index,
                    dimension,
                });
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{v}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(factors: Vec<u32>) -> Self {
        MultiIndex(factors)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(factors: &[u32]) -> Self {
        MultiIndex(factors.to_vec())
    }
}

/// Total dimension of a shape, in u128 to survive large products.
pub fn total_dimension(shape: &[u32]) -> u128 {
    shape.iter().map(|&d| d as u128).product()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounds_are_one_based() {
        let shape = [2, 3];
        assert!(MultiIndex::new(vec![1, 3]).validate_in(&shape).is_ok());
        assert!(MultiIndex::new(vec![0, 1]).validate_in(&shape).is_err());
        assert!(MultiIndex::new(vec![1, 4]).validate_in(&shape).is_err());
        assert!(MultiIndex::new(vec![1]).validate_in(&shape).is_err());
    }

    #[test]
    fn sub_and_with_sub_round_trip() {
        let idx = MultiIndex::new(vec![4, 1, 7, 2]);
        let positions = [0usize, 2];
        assert_eq!(idx.sub(&positions), vec![4, 7]);
        let replaced = idx.with_sub(&positions, &[9, 9]);
        assert_eq!(replaced.factors(), &[9, 1, 9, 2]);
        // untouched positions survive
        assert_eq!(replaced.get(1), 1);
        assert_eq!(replaced.get(3), 2);
    }

    #[test]
    fn display_is_compact_tuple() {
        assert_eq!(MultiIndex::new(vec![1, 2, 3]).to_string(), "(1,2,3)");
    }
}
