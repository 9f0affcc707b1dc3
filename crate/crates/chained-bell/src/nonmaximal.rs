//! Reduction from a degenerate (coarse) measurement to a maximal (fine)
//! refinement: each coarse rate is pinned to its multiplicity-weighted
//! uniform target through a perfect-correlation term plus an equibasic term.

use ontic_models::OnticModel;
use quantum_core::numeric::CompensatedSum;

use crate::error::{ChainError, Result};

/// The split for one coarse outcome.
#[derive(Clone, Debug)]
pub struct CoarseOutcomeReport {
    pub outcome: String,
    /// n_k: how many fine outcomes this coarse outcome collects.
    pub multiplicity: usize,
    /// n_k/d: the rate forced by equiprobability of the fine outcomes.
    pub target: f64,
    /// ∫ |p_coarse(a_k) − n_k/d| dμ.
    pub defect: f64,
    /// ∫ |p_coarse(a_k) − Σ_{fine ∈ block} p_fine| dμ: how far the coarse
    /// response is from aggregating its own refinement.
    pub coarse_term: f64,
    /// ∫ |Σ_{fine ∈ block} (p_fine − 1/d)| dμ: how far the block's fine
    /// rates are from uniform, in aggregate.
    pub equibasic_term: f64,
}

/// Account of a full coarse-to-fine reduction.
#[derive(Clone, Debug)]
pub struct NonmaximalReport {
    /// d: the number of fine outcomes.
    pub fine_count: usize,
    pub outcomes: Vec<CoarseOutcomeReport>,
}

impl NonmaximalReport {
    /// The largest per-outcome defect.
    pub fn max_defect(&self) -> f64 {
        self.outcomes.iter().fold(0.0, |acc, o| acc.max(o.defect))
    }
}

/// Split each coarse outcome's distance from its n_k/d target into the
/// perfect-correlation term and the equibasic term, and assert the split
/// bounds the distance. `partition[k]` lists the 0-based fine-outcome
/// indices that coarse outcome k collects; it must cover every fine outcome
/// exactly once or the fine response does not refine the coarse one.
pub fn nonmaximal_reduction(
    model: &OnticModel,
    prep_tag: &str,
    coarse_tag: &str,
    fine_tag: &str,
    partition: &[Vec<usize>],
) -> Result<NonmaximalReport> {
    let prep = model.preparation(prep_tag)?;
    let coarse = model.response(coarse_tag)?;
    let fine = model.response(fine_tag)?;
    let d = fine.outcomes().len();

    if partition.len() != coarse.outcomes().len() {
        return Err(ChainError::InvalidArgument {
            detail: format!(
                "partition has {} blocks but the coarse response `{coarse_tag}` has {} outcomes",
                partition.len(),
                coarse.outcomes().len()
            ),
        });
    }
    let mut seen = vec![false; d];
    for (block_index, block) in partition.iter().enumerate() {
        if block.is_empty() {
            return Err(ChainError::InvalidArgument {
                detail: format!("partition block {block_index} is empty"),
            });
        }
        for &fine_index in block {
            if fine_index >= d || seen[fine_index] {
                return Err(ChainError::InvalidArgument {
                    detail: format!(
                        "`{fine_tag}` does not refine `{coarse_tag}`: fine outcome index \
                         {fine_index} is out of range or assigned twice"
                    ),
                });
            }
            seen[fine_index] = true;
        }
    }
    if seen.iter().any(|&s| !s) {
        return Err(ChainError::InvalidArgument {
            detail: format!(
                "`{fine_tag}` does not refine `{coarse_tag}`: the partition misses fine outcomes"
            ),
        });
    }

    let uniform = 1.0 / d as f64;
    let mut outcomes = Vec::with_capacity(partition.len());
    for (k, block) in partition.iter().enumerate() {
        let target = block.len() as f64 / d as f64;
        let mut defect = CompensatedSum::new();
        let mut coarse_term = CompensatedSum::new();
        let mut equibasic_term = CompensatedSum::new();
        for (index, &weight) in prep.weights().iter().enumerate() {
            let coarse_rate = coarse.prob(index, k);
            let mut block_rate = CompensatedSum::new();
            let mut block_excess = CompensatedSum::new();
            for &fine_index in block {
                let fine_rate = fine.prob(index, fine_index);
                block_rate.add(fine_rate);
                block_excess.add(fine_rate - uniform);
            }
            defect.add(weight * (coarse_rate - target).abs());
            coarse_term.add(weight * (coarse_rate - block_rate.value()).abs());
            equibasic_term.add(weight * block_excess.value().abs());
        }
        let report = CoarseOutcomeReport {
            outcome: coarse.outcomes()[k].clone(),
            multiplicity: block.len(),
            target,
            defect: defect.value(),
            coarse_term: coarse_term.value(),
            equibasic_term: equibasic_term.value(),
        };
        if report.defect > report.coarse_term + report.equibasic_term + 1e-9 {
            return Err(ChainError::Internal {
                detail: format!(
                    "coarse outcome `{}`: defect {} exceeds split {} + {}",
                    report.outcome, report.defect, report.coarse_term, report.equibasic_term
                ),
            });
        }
        outcomes.push(report);
    }

    Ok(NonmaximalReport {
        fine_count: d,
        outcomes,
    })
}
