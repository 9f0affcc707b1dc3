//! Global numeric policy: every floating-point tolerance used by the
//! verification pipeline lives in one record, so a run can be tightened or
//! loosened in a single place (the CLI maps `--tol-exact` / `--tol-oracle`
//! onto this record at startup).

use std::sync::RwLock;

/// Absolute tolerances for the different classes of floating-point checks.
///
/// The three classes are deliberately distinct: a quantity that is a direct
/// arithmetic identity (a norm, a single projection) is held to a tighter
/// bound than one reached through a long composed pipeline of rotations and
/// kernel products, which in turn is tighter than the slack allowed when
/// comparing a hand-derived closed form against the enumeration oracle.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NumericPolicy {
    /// Direct identities: norms, single projector applications, exact zeros.
    pub tol_exact: f64,
    /// Composed pipelines: chained rotations, kernel compositions, Born sums.
    pub tol_composed: f64,
    /// Closed form vs brute-force oracle comparisons.
    pub tol_oracle: f64,
    /// Stored amplitudes with modulus at or below this are dropped
    /// (default 0.0: only exact zeros are pruned).
    pub prune_threshold: f64,
}

impl Default for NumericPolicy {
    fn default() -> Self {
        NumericPolicy {
            tol_exact: 1e-12,
            tol_composed: 1e-10,
            tol_oracle: 1e-9,
            prune_threshold: 0.0,
        }
    }
}

static POLICY: RwLock<NumericPolicy> = RwLock::new(NumericPolicy {
    tol_exact: 1e-12,
    tol_composed: 1e-10,
    tol_oracle: 1e-9,
    prune_threshold: 0.0,
});

/// Snapshot of the current global policy.
pub fn current() -> NumericPolicy {
    *POLICY.read().expect("numeric policy lock poisoned")
}

/// Replace the global policy (normally done once, before any checks run).
pub fn set(policy: NumericPolicy) {
    *POLICY.write().expect("numeric policy lock poisoned") = policy;
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_policy_matches_global_initializer() {
        assert_eq!(current(), NumericPolicy::default());
    }
}
