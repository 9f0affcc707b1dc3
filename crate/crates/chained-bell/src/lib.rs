//! The chained rotated-basis estimate: near-uniform outcome statistics
//! forced on any ontic model that reproduces the cross-correlations of a
//! maximally entangled state.
//!
//! A ladder of 2N+2 bases interpolates between the computational basis and
//! its quarter-turn in one coordinate plane, in equal angle steps
//! δ = π/(2(2N+1)). Walking the ladder telescopes the gap between two
//! outcome probabilities into 2N+1 adjacent rungs plus one closing line
//! recovered by perfect correlations; each rung is bounded by joint
//! cross-term rates whose quantum value is (2/d)sin²δ. Summing gives
//!
//! > ∫ |p(a_i|λ) − p(a_j|λ)| dμ(λ)  ≤  π²/(2d(2N+1))  →  0,
//!
//! so a model matching the quantum cross-terms for arbitrarily long chains
//! must assign the two outcomes equal probability almost everywhere.
//!
//! The crate provides:
//!
//! - the ladder geometry ([`RotationLadder`], [`rotation_unitary`]) with its
//!   tagging scheme for responses (`A[n]`, `B[n]`, `A[n]⊗B[m]`) and
//!   outcomes (`a_k`, `b_k`);
//! - closed-form quantum values ([`cross_expectation`],
//!   [`rung_expectation`], [`closing_expectation`], [`chained_bound`]),
//!   every call cross-checked against the brute-force Born oracle;
//! - the verifier ([`verify_equiprobability`]) that walks a concrete model
//!   through the chain, certifies the theorem-level inequalities, and
//!   reports which quantum correlation a failing model misses;
//! - the Born-exact reference fixture ([`born_exact_ladder_model`]);
//! - the coarse-measurement reduction ([`nonmaximal_reduction`]) that pins
//!   degenerate outcome rates to their multiplicity-weighted targets.

pub mod error;
pub mod expectation;
pub mod ladder;
pub mod nonmaximal;
pub mod verify;

pub use error::{ChainError, Result};

pub use ladder::{rotation_unitary, RotationLadder, Rung, RungKind};

pub use expectation::{
    chained_bound, closing_expectation, cross_expectation, cross_expectation_oracle,
    marginal_expectation_oracle, rung_expectation, ChainedBound,
};

pub use verify::{
    born_exact_ladder_model, equiprobability_gap, pairwise_outcome_gap, verify_equiprobability,
    ChainReport, RungReport, MAXIMALLY_ENTANGLED_TAG,
};

pub use nonmaximal::{nonmaximal_reduction, CoarseOutcomeReport, NonmaximalReport};
