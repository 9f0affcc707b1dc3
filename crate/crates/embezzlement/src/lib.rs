//! Embezzlement-based equalisation of Schmidt weights, verified numerically.
//!
//! Starting from a target state with unequal Schmidt weights, the
//! construction borrows a large "embezzling" resource state so that local
//! basis rearrangements turn the joint state into something indistinguishable
//! from a uniform-weight state of higher rank — up to errors that this crate
//! quantifies at every step:
//!
//! - [`rational`]: approximate the squared weights by a rational profile
//!   `nᵢ/d_ε` within a multiplicative window ε.
//! - [`config`]: derive the embezzling dimensions, normaliser, and the
//!   1-based index maps between ladder rungs and (block, slot) coordinates.
//! - [`state`]: build the initial product state, the local rearrangement
//!   unitaries, the final state (verified term by term), and its fidelity
//!   with the ideal uniform target.
//! - [`observables`]: the coarse and refined local measurements, and the
//!   perfect-correlation check between the two sides.
//! - [`rotation`]: two-outcome rotations of the refined measurements, used to
//!   interpolate between outcomes.
//! - [`estimates`]: the closed-form cross-term value at a pair of rotation
//!   angles, checked against a brute-force Born-rule oracle, plus the closing
//!   zero-term identity and the harmonic-sum estimates behind the bound.
//! - [`ladder`]: telescoping rotation ladders bounding the gap between two
//!   outcome probabilities by a sum of oracle-verified cross-terms.
//! - [`bound`]: the final three-term error bound with parameter selection,
//!   and a coherence check replaying the full estimate chain on a concrete
//!   configuration.
//!
//! All states live in a fixed six-factor layout (documented in [`state`]):
//! even factor positions belong to the left party, odd to the right, with the
//! embezzling ladder, correction slot, and Schmidt registers in that order.

pub mod bound;
pub mod config;
pub mod error;
pub mod estimates;
pub mod ladder;
pub mod observables;
pub mod rational;
pub mod rotation;
pub mod state;

pub use bound::{bound_coherence, final_bound, final_bound_capped, BoundCaps, BoundReport};
pub use config::{EmbezzleConfig, IndexMap};
pub use error::{EmbezzleError, Result};
pub use estimates::{
    closed_form_oracle_check, closed_form_oracle_check_on, harmonic_estimates, mismatch_rate,
    tedious_closed_form, zero_term_check, zero_term_check_on, HarmonicReport, ZeroTermReport,
};
pub use ladder::{
    more_chains_ladder, more_chains_ladder_on, LadderLink, LadderOrientation, LadderReport,
};
pub use observables::{
    joint_projector, left_projector, outcome_pairs, perfect_correlation_check,
    perfect_correlation_check_on, right_projector, CorrelationReport,
};
pub use rational::{
    rational_approximation, rational_approximation_capped, RationalApprox,
    DEFAULT_DENOMINATOR_CAP,
};
pub use rotation::{
    rotated_observables, rotated_observables_on, theta_unitaries, RotatedObservables, RotationPair,
};
pub use state::{
    build_embezzle_unitaries, build_psi_f, build_psi_i, build_target, embezzlement_fidelity,
    support_cap, SUPPORT_CAP_ENV,
};
