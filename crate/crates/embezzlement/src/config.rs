//! Configuration for one coupled-pair construction: the integer weight
//! profile, the ladder size D = N·Π n_i, the harmonic normalizer, and the
//! slot-index arithmetic that the six-factor states are built on.

use quantum_core::numeric::harmonic_number;

use crate::error::{EmbezzleError, Result};
use crate::rational::RationalApprox;

/// Slot-index arithmetic for an integer weight profile.
///
/// The ladder index k ∈ {1..D} is viewed, for each weight i, as m-th block of
/// n_i consecutive slots: k = j + (m−1)·n_i with block m = ⌈k/n_i⌉ and
/// within-block slot j ∈ {1..n_i}. All three maps are total on their stated
/// domains and invert each other.
#[derive(Clone, Debug, PartialEq)]
pub struct IndexMap {
    counts: Vec<u64>,
}

impl IndexMap {
    pub fn new(counts: Vec<u64>) -> Result<Self> {
        if counts.is_empty() || counts.contains(&0) {
            return Err(EmbezzleError::InvalidArgument {
                detail: "slot counts must be non-empty and at least 1".into(),
            });
        }
        Ok(IndexMap { counts })
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    fn count_checked(&self, i: u32) -> Result<u64> {
        if i == 0 || i as usize > self.counts.len() {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!(
                    "weight index {i} out of range 1..={}",
                    self.counts.len()
                ),
            });
        }
        Ok(self.counts[i as usize - 1])
    }

    /// The block ⌈k/n_i⌉ that ladder index k falls into for weight i.
    pub fn block_of(&self, i: u32, k: u64) -> Result<u64> {
        let n = self.count_checked(i)?;
        if k == 0 {
            return Err(EmbezzleError::InvalidArgument {
                detail: "ladder index k must be at least 1".into(),
            });
        }
        Ok(k.div_ceil(n))
    }

    /// The within-block slot j_{i,k} = k − n_i·(⌈k/n_i⌉ − 1) ∈ {1..n_i}.
    pub fn j_of(&self, i: u32, k: u64) -> Result<u64> {
        let n = self.count_checked(i)?;
        let block = self.block_of(i, k)?;
        Ok(k - n * (block - 1))
    }

    /// The ladder index k_{m,i,j} = j + (m−1)·n_i of slot j in block m.
    pub fn k_of(&self, m: u64, i: u32, j: u64) -> Result<u64> {
        let n = self.count_checked(i)?;
        if m == 0 {
            return Err(EmbezzleError::InvalidArgument {
                detail: "block index m must be at least 1".into(),
            });
        }
        if j == 0 || j > n {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!("slot index {j} out of range 1..={n} for weight {i}"),
            });
        }
        Ok(j + (m - 1) * n)
    }
}

/// A fully determined coupled-pair construction: weight profile, ladder
/// length D, and the harmonic normalizer C with C²·Σ_{k=1}^D 1/k = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct EmbezzleConfig {
    approx: RationalApprox,
    big_n: u64,
    pair_dim: u64,
    harmonic_sum: f64,
    normalizer: f64,
    index: IndexMap,
}

impl EmbezzleConfig {
    /// Build a configuration from an integer weight profile and the ladder
    /// multiplier N ≥ 1 (the pair dimension is D = N·Π n_i, so every weight's
    /// slot count divides D evenly).
    pub fn new(approx: RationalApprox, big_n: u64) -> Result<Self> {
        if big_n == 0 {
            return Err(EmbezzleError::InvalidArgument {
                detail: "ladder multiplier N must be at least 1".into(),
            });
        }
        let product = approx.count_product()?;
        let pair_dim = big_n
            .checked_mul(product)
            .ok_or_else(|| EmbezzleError::InvalidArgument {
                detail: format!("pair dimension N·Π n_i overflows u64 (N = {big_n})"),
            })?;
        let harmonic_sum = harmonic_number(pair_dim);
        let normalizer = 1.0 / harmonic_sum.sqrt();
        let defect = (normalizer * normalizer * harmonic_sum - 1.0).abs();
        if defect > 1e-12 {
            return Err(EmbezzleError::Internal {
                detail: format!("harmonic normalizer defect {defect} exceeds 1e-12"),
            });
        }
        let index = IndexMap::new(approx.counts().to_vec())?;
        Ok(EmbezzleConfig {
            approx,
            big_n,
            pair_dim,
            harmonic_sum,
            normalizer,
            index,
        })
    }

    pub fn approx(&self) -> &RationalApprox {
        &self.approx
    }

    /// The ladder multiplier N.
    pub fn big_n(&self) -> u64 {
        self.big_n
    }

    /// The coupled pair dimension D = N·Π n_i.
    pub fn pair_dim(&self) -> u64 {
        self.pair_dim
    }

    /// Σ_{k=1}^D 1/k, accumulated with compensated summation.
    pub fn harmonic_sum(&self) -> f64 {
        self.harmonic_sum
    }

    /// The normalizer C = (Σ_{k=1}^D 1/k)^{−1/2}.
    pub fn normalizer(&self) -> f64 {
        self.normalizer
    }

    pub fn index(&self) -> &IndexMap {
        &self.index
    }

    /// Number of Schmidt weights d.
    pub fn schmidt_rank(&self) -> u32 {
        self.approx.rank() as u32
    }

    /// The slot count n_i for 1-based weight index i.
    pub fn count(&self, i: u32) -> Result<u64> {
        if i == 0 || i as usize > self.approx.rank() {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!("weight index {i} out of range 1..={}", self.approx.rank()),
            });
        }
        Ok(self.approx.counts()[i as usize - 1])
    }

    /// The Schmidt weight c_i for 1-based weight index i.
    pub fn weight(&self, i: u32) -> Result<f64> {
        if i == 0 || i as usize > self.approx.rank() {
            return Err(EmbezzleError::InvalidArgument {
                detail: format!("weight index {i} out of range 1..={}", self.approx.rank()),
            });
        }
        Ok(self.approx.c()[i as usize - 1])
    }

    /// How many complete blocks of weight i fit into the ladder: D/n_i
    /// (always exact because n_i divides D).
    pub fn block_count(&self, i: u32) -> Result<u64> {
        let n = self.count(i)?;
        debug_assert_eq!(self.pair_dim % n, 0);
        Ok(self.pair_dim / n)
    }

    /// The six-factor shape (D, D, m, m, d, d): ladder pair, slot pair,
    /// Schmidt pair. Fails if D does not fit a u32 factor index.
    pub fn shape(&self) -> Result<Vec<u32>> {
        let d_u32 = u32::try_from(self.pair_dim).map_err(|_| EmbezzleError::Resource {
            what: "factor dimension D".into(),
            needed: self.pair_dim as f64,
            cap: u32::MAX as f64,
        })?;
        let m_u32 =
            u32::try_from(self.approx.m_eps()).map_err(|_| EmbezzleError::Resource {
                what: "factor dimension m".into(),
                needed: self.approx.m_eps() as f64,
                cap: u32::MAX as f64,
            })?;
        Ok(vec![
            d_u32,
            d_u32,
            m_u32,
            m_u32,
            self.schmidt_rank(),
            self.schmidt_rank(),
        ])
    }
}
