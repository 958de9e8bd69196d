//! Problem descriptions and stopping policies shared by the solvers and the
//! simulation oracle.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::process::{HorizonDistribution, MaturityModel};

/// What happens to the duration count when the horizon ends while the
/// selected item still holds its status.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum Maturity {
    /// Maturity is horizon + 1: the final step is counted.
    #[default]
    Standard,
    /// Maturity closes at the last observation: the final step is not counted.
    ExcludeHorizonStep,
}

/// A duration model together with its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ProblemSpec {
    /// Rank-only observation of a uniformly random permutation of `n` items.
    NoInfo { model: MaturityModel, n: usize },
    /// Infinite rank-only sequence, unit holding reward discounted by `beta` per step.
    Discounted { beta: f64 },
    /// Observed iid uniform values with a fixed or random horizon.
    FullInfo {
        model: MaturityModel,
        horizon: HorizonDistribution,
        maturity: Maturity,
    },
}

impl ProblemSpec {
    pub fn no_info(model: MaturityModel, n: usize) -> Self {
        ProblemSpec::NoInfo { model, n }
    }

    pub fn full_info(model: MaturityModel, n: usize) -> Self {
        ProblemSpec::FullInfo {
            model,
            horizon: HorizonDistribution::Fixed(n),
            maturity: Maturity::Standard,
        }
    }

    pub fn geometric(model: MaturityModel, p: f64, maturity: Maturity) -> Self {
        ProblemSpec::FullInfo {
            model,
            horizon: HorizonDistribution::Geometric(p),
            maturity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            ProblemSpec::NoInfo { n, .. } => {
                if *n == 0 {
                    return Err(Error::InvalidArgument("n must be at least 1".into()));
                }
                Ok(())
            }
            ProblemSpec::Discounted { beta } => {
                if !(*beta > 0.0 && *beta < 1.0) {
                    return Err(Error::InvalidArgument(format!("beta must lie in (0,1), got {beta}")));
                }
                Ok(())
            }
            ProblemSpec::FullInfo { horizon, .. } => horizon.validate(),
        }
    }

    /// Divisor turning a raw duration into the reported payoff: the (maximal)
    /// horizon for bounded models, 1 for the geometric and discounted models.
    pub fn normalizer(&self) -> f64 {
        match self {
            ProblemSpec::NoInfo { n, .. } => *n as f64,
            ProblemSpec::Discounted { .. } => 1.0,
            ProblemSpec::FullInfo { horizon, .. } => horizon.bound().map_or(1.0, |b| b as f64),
        }
    }
}

/// A stopping rule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ThresholdPolicy {
    /// Stop at the first candidate at stage `k` or later. Under a recall
    /// model this selects the best-so-far at exactly stage `k`.
    FirstCandidateFrom(usize),
    /// Best-or-second: stop on a relatively best item from stage `best`, on a
    /// relatively second item from stage `second`.
    TwoThresholds { best: usize, second: usize },
    /// Full information, fixed horizon: `cutoffs[s - 1]` applies when `s`
    /// observations remain including the current one.
    StagesToGo(Vec<f64>),
    /// Full information, bounded random horizon: `cutoffs[k - 1]` applies at stage `k`.
    PerStage(Vec<f64>),
    /// Stationary cutoff (geometric horizon).
    Constant(f64),
    /// Geometric best-or-second problem: stop when the one-step comparison of
    /// the current (largest, second largest) pair favours stopping.
    Best2OneStep,
}

impl ThresholdPolicy {
    /// Checks that the policy is meaningful for `spec`.
    pub fn validate_for(&self, spec: &ProblemSpec) -> Result<()> {
        let bad = |msg: &str| Err(Error::InvalidPolicy(msg.to_string()));
        match (spec, self) {
            (ProblemSpec::NoInfo { model, n }, ThresholdPolicy::FirstCandidateFrom(k)) => {
                if *k == 0 || *k > *n {
                    return bad("stage threshold must lie in 1..=n");
                }
                if *model == MaturityModel::BestOrSecondNoRecall {
                    return bad("best-or-second model needs two thresholds");
                }
                Ok(())
            }
            (ProblemSpec::NoInfo { model, n }, ThresholdPolicy::TwoThresholds { best, second }) => {
                if *model != MaturityModel::BestOrSecondNoRecall {
                    return bad("two thresholds only apply to the best-or-second model");
                }
                if *best == 0 || *second == 0 || *best > *n + 1 || *second > *n + 1 {
                    return bad("thresholds must lie in 1..=n+1");
                }
                Ok(())
            }
            (ProblemSpec::Discounted { .. }, ThresholdPolicy::FirstCandidateFrom(k)) => {
                if *k == 0 {
                    return bad("stage threshold must be at least 1");
                }
                Ok(())
            }
            (ProblemSpec::FullInfo { horizon, .. }, ThresholdPolicy::StagesToGo(c))
            | (ProblemSpec::FullInfo { horizon, .. }, ThresholdPolicy::PerStage(c)) => {
                match horizon.bound() {
                    Some(b) if c.len() >= b => {}
                    Some(_) => return bad("need one cutoff per stage"),
                    None => return bad("stage-indexed cutoffs need a bounded horizon"),
                }
                if matches!(self, ThresholdPolicy::StagesToGo(_))
                    && !matches!(horizon, HorizonDistribution::Fixed(_))
                {
                    return bad("stages-to-go cutoffs need a fixed horizon");
                }
                if c.iter().any(|x| !x.is_finite()) {
                    return bad("cutoffs must be finite");
                }
                Ok(())
            }
            (ProblemSpec::FullInfo { .. }, ThresholdPolicy::Constant(x)) => {
                if !x.is_finite() {
                    return bad("cutoff must be finite");
                }
                Ok(())
            }
            (
                ProblemSpec::FullInfo {
                    model, horizon, ..
                },
                ThresholdPolicy::Best2OneStep,
            ) => {
                if *model != MaturityModel::BestOrSecondNoRecall
                    || !matches!(horizon, HorizonDistribution::Geometric(_))
                {
                    return bad("one-step sets apply to the geometric best-or-second model");
                }
                Ok(())
            }
            _ => bad("policy kind does not match the problem"),
        }
    }
}
