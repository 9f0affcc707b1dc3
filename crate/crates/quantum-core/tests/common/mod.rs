//! Dense reference implementations for cross-checking the sparse fast paths.
//!
//! Everything here is deliberately naive: states become full vectors indexed
//! by row-major offsets, unitaries become explicit matrices (one column per
//! basis vector), projectors become Kronecker products. Small spaces only.

// Each integration test binary includes this module but uses its own subset
// of the helpers.
#![allow(dead_code)]

use num_complex::Complex64;
use quantum_core::{FactorProjector, MultiIndex, ProductProjector, SparseState, StructuredUnitary};

pub fn zero() -> Complex64 {
    Complex64::new(0.0, 0.0)
}

pub fn one() -> Complex64 {
    Complex64::new(1.0, 0.0)
}

/// Row-major offset of a 1-based multi-index.
pub fn offset_of(shape: &[u32], index: &MultiIndex) -> usize {
    let mut offset = 0usize;
    for (position, &dim) in shape.iter().enumerate() {
        offset = offset * dim as usize + (index.get(position) as usize - 1);
    }
    offset
}

/// All multi-indices of a shape in row-major order.
pub fn enumerate_indices(shape: &[u32]) -> Vec<MultiIndex> {
    let mut out: Vec<Vec<u32>> = vec![Vec::new()];
    for &dim in shape {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (1..=dim).map(move |i| {
                    let mut next = prefix.clone();
                    next.push(i);
                    next
                })
            })
            .collect();
    }
    out.into_iter().map(MultiIndex::new).collect()
}

pub fn total_dim(shape: &[u32]) -> usize {
    shape.iter().map(|&d| d as usize).product()
}

/// Dense vector of a sparse state.
pub fn dense_of(state: &SparseState) -> Vec<Complex64> {
    let mut v = vec![zero(); total_dim(state.shape())];
    for (index, amp) in state.amplitudes() {
        v[offset_of(state.shape(), index)] = *amp;
    }
    v
}

/// Dense matrix of a structured unitary, one column per basis vector.
pub fn dense_unitary_matrix(u: &StructuredUnitary) -> Vec<Vec<Complex64>> {
    let shape = u.shape().to_vec();
    let n = total_dim(&shape);
    let mut matrix = vec![vec![zero(); n]; n];
    for index in enumerate_indices(&shape) {
        let col = offset_of(&shape, &index);
        let basis = SparseState::basis_state(shape.clone(), index).unwrap();
        let image = u.apply(&basis).unwrap();
        for (row_index, amp) in image.amplitudes() {
            matrix[offset_of(&shape, row_index)][col] = *amp;
        }
    }
    matrix
}

pub fn matrix_vector(m: &[Vec<Complex64>], v: &[Complex64]) -> Vec<Complex64> {
    let n = m.len();
    let mut out = vec![zero(); n];
    for (row, out_row) in out.iter_mut().enumerate() {
        for (col, &vc) in v.iter().enumerate() {
            *out_row += m[row][col] * vc;
        }
    }
    out
}

/// conj(A)^T * A, for checking unitarity of dense matrices.
pub fn gram(m: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let n = m.len();
    let mut out = vec![vec![zero(); n]; n];
    for i in 0..n {
        for j in 0..n {
            let mut acc = zero();
            for row in m {
                acc += row[i].conj() * row[j];
            }
            out[i][j] = acc;
        }
    }
    out
}

/// Dense d x d matrix of a single-factor projector.
pub fn dense_factor_matrix(factor: &FactorProjector, d: u32) -> Vec<Vec<Complex64>> {
    let d = d as usize;
    let mut m = vec![vec![zero(); d]; d];
    match factor {
        FactorProjector::Id => {
            for (i, row) in m.iter_mut().enumerate() {
                row[i] = one();
            }
        }
        FactorProjector::Basis(b) => {
            m[*b as usize - 1][*b as usize - 1] = one();
        }
        FactorProjector::Vector(components) => {
            for (&i, &vi) in components {
                for (&j, &vj) in components {
                    m[i as usize - 1][j as usize - 1] = vi * vj.conj();
                }
            }
        }
    }
    m
}

pub fn kron(a: &[Vec<Complex64>], b: &[Vec<Complex64>]) -> Vec<Vec<Complex64>> {
    let (na, nb) = (a.len(), b.len());
    let n = na * nb;
    let mut out = vec![vec![zero(); n]; n];
    for ia in 0..na {
        for ja in 0..na {
            for ib in 0..nb {
                for jb in 0..nb {
                    out[ia * nb + ib][ja * nb + jb] = a[ia][ja] * b[ib][jb];
                }
            }
        }
    }
    out
}

/// Dense matrix of a product projector on a shape.
pub fn dense_projector_matrix(projector: &ProductProjector, shape: &[u32]) -> Vec<Vec<Complex64>> {
    let mut m = vec![vec![one()]];
    for (factor, &d) in projector.factors().iter().zip(shape) {
        m = kron(&m, &dense_factor_matrix(factor, d));
    }
    m
}

/// <v| M |v> for dense data.
pub fn quadratic_form(v: &[Complex64], m: &[Vec<Complex64>]) -> Complex64 {
    let mv = matrix_vector(m, v);
    v.iter().zip(&mv).map(|(a, b)| a.conj() * b).sum()
}
