//! Exact-as-possible finite-dimensional quantum mechanics on sparse
//! tensor-product states.
//!
//! This crate is the numerical substrate for verifying the equiprobability
//! and extended-equiprobability constructions: states with a handful of
//! nonzero amplitudes inside astronomically large product spaces, unitaries
//! given by their action on basis vectors, and projector expectations that
//! every hand-derived closed form is checked against.
//!
//! # Layout
//!
//! - [`index`] / [`state`]: multi-index basis labels and sparse state vectors
//!   (Schmidt states, tensor products, factor permutations, fidelity).
//! - [`projector`]: product projectors, observable branches, Born distributions.
//! - [`unitary`]: structured unitaries (basis permutations + two-level rotations).
//! - [`oracle`]: brute-force enumerated expectations, the independent check
//!   against which the fast paths and all closed forms are validated.
//! - [`policy`]: the global numeric-tolerance record.
//! - [`numeric`]: compensated summation.
//!
//! All types are immutable after construction and all operations are pure,
//! so everything here is safe to evaluate in parallel across inputs.

pub mod error;
pub mod index;
pub mod numeric;
pub mod oracle;
pub mod policy;
pub mod projector;
pub mod state;
pub mod unitary;

pub use error::{QuantumError, Result};
pub use index::{total_dimension, MultiIndex};
pub use num_complex::Complex64;
pub use policy::NumericPolicy;
pub use projector::{
    born_distribution, projector_expectation, BasisSlice, Branch, BranchProjector,
    FactorProjector, ProductProjector, ProjectorObservable,
};
pub use state::{
    fidelity, maximally_entangled, permute_factors, schmidt_state, tensor_product, SparseState,
};
pub use unitary::{apply_unitary, StructuredUnitary, UnitaryRule};
