//! Observation processes, exact durations for realized paths, the
//! exhaustive enumeration oracle and the Monte Carlo oracle.

mod duration;
mod enumerate;
mod pmf;
mod ranks;
mod simulate;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use duration::{duration_full_info, duration_no_info, full_info_outcome, Outcome};
use duration::value_outcome;
pub use enumerate::{
    enumerate_policy_value, exhaustive_optimum, permutations, MAX_ENUMERATION_N,
};
pub use pmf::maturity_pmf_best2;
pub use ranks::{relative_ranks, running_rank};
pub use simulate::{simulate_policy, simulate_policy_with_cap, SimulationReport, DEFAULT_HORIZON_CAP};

pub(crate) use simulate::noinfo_policy_payoff;

/// Absolute ranks X_1..X_N of a permutation; rank 1 is the best item.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PermutationSample {
    ranks: Vec<usize>,
}

impl PermutationSample {
    pub fn new(ranks: Vec<usize>) -> Result<Self> {
        let n = ranks.len();
        let mut seen = vec![false; n + 1];
        for &r in &ranks {
            if r == 0 || r > n || seen[r] {
                return Err(Error::InvalidArgument(format!(
                    "{ranks:?} is not a permutation of 1..={n}"
                )));
            }
            seen[r] = true;
        }
        Ok(Self { ranks })
    }

    /// Uniformly random permutation of `n` items.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let mut ranks: Vec<usize> = (1..=n).collect();
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            ranks.swap(i, j);
        }
        Self { ranks }
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.ranks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranks.is_empty()
    }
}

/// Observed values in [0, 1]; a larger value is better.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UniformSample {
    values: Vec<f64>,
}

impl UniformSample {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some(v) = values.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidArgument(format!("value {v} outside [0, 1]")));
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// Law of the number of observations in the full-information models.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HorizonDistribution {
    Fixed(usize),
    /// P(N = k) = p q^{k-1}, k >= 1.
    Geometric(f64),
    /// `prior[k - 1]` = P(N = k).
    General(Vec<f64>),
}

impl HorizonDistribution {
    pub fn validate(&self) -> Result<()> {
        match self {
            HorizonDistribution::Fixed(n) if *n == 0 => {
                Err(Error::InvalidArgument("horizon must be at least 1".into()))
            }
            HorizonDistribution::Fixed(_) => Ok(()),
            HorizonDistribution::Geometric(p) => {
                if *p > 0.0 && *p < 1.0 {
                    Ok(())
                } else {
                    Err(Error::InvalidArgument(format!("p must lie in (0,1), got {p}")))
                }
            }
            HorizonDistribution::General(prior) => {
                if prior.is_empty() || prior.iter().any(|x| !(*x >= 0.0) || !x.is_finite()) {
                    return Err(Error::InvalidArgument("prior must be a non-empty probability vector".into()));
                }
                let total: f64 = prior.iter().sum();
                if (total - 1.0).abs() > 1e-9 {
                    return Err(Error::InvalidArgument(format!("prior sums to {total}, not 1")));
                }
                if prior[prior.len() - 1] <= 0.0 {
                    return Err(Error::InvalidArgument("last prior mass must be positive".into()));
                }
                Ok(())
            }
        }
    }

    /// Largest possible horizon, `None` when unbounded.
    pub fn bound(&self) -> Option<usize> {
        match self {
            HorizonDistribution::Fixed(n) => Some(*n),
            HorizonDistribution::Geometric(_) => None,
            HorizonDistribution::General(prior) => Some(prior.len()),
        }
    }

    /// Draws a horizon; unbounded draws above `cap` are an error.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R, cap: usize) -> Result<usize> {
        match self {
            HorizonDistribution::Fixed(n) => Ok(*n),
            HorizonDistribution::Geometric(p) => {
                // N - 1 = floor(ln U / ln q) with U in (0, 1]
                let u = 1.0 - rng.random::<f64>();
                let k = (u.ln() / (-p).ln_1p()).floor();
                if k >= cap as f64 {
                    return Err(Error::HorizonCap { cap });
                }
                Ok(k as usize + 1)
            }
            HorizonDistribution::General(prior) => {
                let u = rng.random::<f64>();
                let mut acc = 0.0;
                for (i, &pk) in prior.iter().enumerate() {
                    acc += pk;
                    if u < acc {
                        return Ok(i + 1);
                    }
                }
                Ok(prior.len())
            }
        }
    }
}

/// Which items count as candidates and when the selected item loses status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum MaturityModel {
    /// Stop on a relatively best item; duration until the next relatively best.
    BestNoRecall,
    /// Stop at any stage and take the best item seen so far.
    BestRecall,
    /// As `BestNoRecall`, but only an overall best selection pays.
    BestRequireOverallBest,
    /// As `BestRecall`, but only an overall best selection pays.
    BestRecallRequireOverallBest,
    /// Stop on a relatively best or second best item; status lasts while it
    /// stays among the two best.
    BestOrSecondNoRecall,
    /// Stop only on a relatively best item; status lasts while it stays among
    /// the two best.
    BestOrSecondStopAtBestOnly,
}

impl MaturityModel {
    pub const ALL: [MaturityModel; 6] = [
        MaturityModel::BestNoRecall,
        MaturityModel::BestRecall,
        MaturityModel::BestRequireOverallBest,
        MaturityModel::BestRecallRequireOverallBest,
        MaturityModel::BestOrSecondNoRecall,
        MaturityModel::BestOrSecondStopAtBestOnly,
    ];

    pub fn recall(self) -> bool {
        matches!(
            self,
            MaturityModel::BestRecall | MaturityModel::BestRecallRequireOverallBest
        )
    }

    pub fn requires_overall_best(self) -> bool {
        matches!(
            self,
            MaturityModel::BestRequireOverallBest | MaturityModel::BestRecallRequireOverallBest
        )
    }

    /// Status is kept while the running rank is at most this.
    pub fn status_ranks(self) -> usize {
        match self {
            MaturityModel::BestOrSecondNoRecall | MaturityModel::BestOrSecondStopAtBestOnly => 2,
            _ => 1,
        }
    }

    /// Largest relative rank at which stopping is allowed (no-recall models).
    pub fn stop_ranks(self) -> usize {
        match self {
            MaturityModel::BestOrSecondNoRecall => 2,
            _ => 1,
        }
    }
}
