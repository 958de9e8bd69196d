use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{duration_no_info, relative_ranks, value_outcome, HorizonDistribution, MaturityModel, PermutationSample};
use crate::error::{Error, Result};
use crate::horizon::best2_full_rule_stops;
use crate::problem::{Maturity, ProblemSpec, ThresholdPolicy};

/// Default cap on a sampled unbounded horizon.
pub const DEFAULT_HORIZON_CAP: usize = 10_000_000;

const BLOCK: usize = 4096;

/// Monte Carlo estimate of a policy's expected payoff.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SimulationReport {
    pub mean: f64,
    pub std_error: f64,
    pub samples: usize,
    pub seed: u64,
}

impl SimulationReport {
    /// Sample variance of a single replication's payoff.
    pub fn variance(&self) -> f64 {
        self.std_error * self.std_error * self.samples as f64
    }

    /// Normal-approximation confidence interval `mean -/+ z * std_error`.
    pub fn confidence_interval(&self, z: f64) -> (f64, f64) {
        (self.mean - z * self.std_error, self.mean + z * self.std_error)
    }

    /// Distance from `value` in units of the standard error.
    pub fn z_score(&self, value: f64) -> f64 {
        let d = self.mean - value;
        if self.std_error == 0.0 {
            if d == 0.0 {
                0.0
            } else {
                f64::INFINITY
            }
        } else {
            d.abs() / self.std_error
        }
    }
}

#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: usize,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let d = x - self.mean;
        self.mean += d / self.n as f64;
        self.m2 += d * (x - self.mean);
    }

    fn merge(self, o: Moments) -> Moments {
        if self.n == 0 {
            return o;
        }
        let n = self.n + o.n;
        let d = o.mean - self.mean;
        Moments {
            n,
            mean: self.mean + d * o.n as f64 / n as f64,
            m2: self.m2 + o.m2 + d * d * (self.n as f64 * o.n as f64) / n as f64,
        }
    }
}

/// Payoff (duration / n) of a no-information policy on one permutation.
pub(crate) fn noinfo_policy_payoff(
    model: MaturityModel,
    policy: &ThresholdPolicy,
    perm: &PermutationSample,
) -> Result<f64> {
    let n = perm.len();
    let stop = match policy {
        ThresholdPolicy::FirstCandidateFrom(k) if model.recall() => Some(*k),
        ThresholdPolicy::FirstCandidateFrom(k) => {
            let y = relative_ranks(perm);
            (*k..=n).find(|&t| y[t - 1] <= model.stop_ranks())
        }
        ThresholdPolicy::TwoThresholds { best, second } => {
            let y = relative_ranks(perm);
            (1..=n).find(|&t| (y[t - 1] == 1 && t >= *best) || (y[t - 1] == 2 && t >= *second))
        }
        _ => return Err(Error::InvalidPolicy("not a no-information policy".into())),
    };
    Ok(match stop {
        Some(t) => duration_no_info(perm, t, model)? as f64 / n as f64,
        None => 0.0,
    })
}

/// Payoff of the discounted rank-only problem: beta^k - beta^T when the
/// first relative best at or after stage `r` is selected at k and the next
/// relative best arrives at T.
fn discounted_payoff<R: Rng>(beta: f64, r: usize, rng: &mut R) -> f64 {
    // beyond this many steps beta^j < 1e-17
    let horizon = ((1e-17f64).ln() / beta.ln()).ceil() as usize;
    let mut best = -1.0;
    let mut stop: Option<usize> = None;
    for j in 1..=horizon.max(r) {
        let x: f64 = rng.random();
        if x > best {
            best = x;
            match stop {
                Some(k) => return beta.powi(k as i32) - beta.powi(j as i32),
                None if j >= r => stop = Some(j),
                None => {}
            }
        }
    }
    stop.map_or(0.0, |k| beta.powi(k as i32))
}

fn full_info_payoff<R: Rng>(
    model: MaturityModel,
    horizon: &HorizonDistribution,
    maturity: Maturity,
    policy: &ThresholdPolicy,
    normalizer: f64,
    cap: usize,
    rng: &mut R,
    values: &mut Vec<f64>,
) -> Result<f64> {
    let n = horizon.sample(rng, cap)?;
    values.clear();
    values.extend((0..n).map(|_| rng.random::<f64>()));
    let cutoff = |j: usize| match policy {
        ThresholdPolicy::StagesToGo(c) => c[n - j],
        ThresholdPolicy::PerStage(c) => c[j - 1],
        ThresholdPolicy::Constant(c) => *c,
        _ => f64::INFINITY,
    };
    let p = match horizon {
        HorizonDistribution::Geometric(p) => *p,
        _ => 0.0,
    };
    let (mut top, mut second) = (-1.0f64, -1.0f64);
    let mut stop = None;
    for j in 1..=n {
        let x = values[j - 1];
        let rank = if x > top {
            second = top;
            top = x;
            1
        } else if x > second {
            second = x;
            2
        } else {
            3
        };
        let go = if model.recall() {
            top >= cutoff(j)
        } else if rank > model.stop_ranks() {
            false
        } else if matches!(policy, ThresholdPolicy::Best2OneStep) {
            best2_full_rule_stops(p, top, second.max(0.0), rank == 1)?
        } else {
            x >= cutoff(j)
        };
        if go {
            stop = Some(j);
            break;
        }
    }
    let Some(stop) = stop else {
        return Ok(0.0);
    };
    let o = value_outcome(values, stop, model, n)?;
    if model.requires_overall_best() && !o.overall_best {
        return Ok(0.0);
    }
    let mut d = o.duration;
    if maturity == Maturity::ExcludeHorizonStep && o.survived {
        d -= 1;
    }
    Ok(d as f64 / normalizer)
}

fn replicate<R: Rng>(
    spec: &ProblemSpec,
    policy: &ThresholdPolicy,
    cap: usize,
    rng: &mut R,
    scratch: &mut Vec<f64>,
) -> Result<f64> {
    match spec {
        ProblemSpec::NoInfo { model, n } => {
            let perm = PermutationSample::random(*n, rng);
            noinfo_policy_payoff(*model, policy, &perm)
        }
        ProblemSpec::Discounted { beta } => match policy {
            ThresholdPolicy::FirstCandidateFrom(r) => Ok(discounted_payoff(*beta, *r, rng)),
            _ => Err(Error::InvalidPolicy("discounted problem takes a stage threshold".into())),
        },
        ProblemSpec::FullInfo {
            model,
            horizon,
            maturity,
        } => full_info_payoff(
            *model,
            horizon,
            *maturity,
            policy,
            spec.normalizer(),
            cap,
            rng,
            scratch,
        ),
    }
}

/// Mean payoff of `policy` over `samples` independent replications.
///
/// Replication `i` draws from a ChaCha8 stream selected by `i` under `seed`,
/// and partial results are merged in index order, so the report does not
/// depend on the number of worker threads.
pub fn simulate_policy(
    spec: &ProblemSpec,
    policy: &ThresholdPolicy,
    samples: usize,
    seed: u64,
) -> Result<SimulationReport> {
    simulate_policy_with_cap(spec, policy, samples, seed, DEFAULT_HORIZON_CAP)
}

/// [`simulate_policy`] with an explicit cap on sampled unbounded horizons.
pub fn simulate_policy_with_cap(
    spec: &ProblemSpec,
    policy: &ThresholdPolicy,
    samples: usize,
    seed: u64,
    cap: usize,
) -> Result<SimulationReport> {
    if samples == 0 {
        return Err(Error::InvalidArgument("samples must be at least 1".into()));
    }
    spec.validate()?;
    policy.validate_for(spec)?;
    let blocks = samples.div_ceil(BLOCK);
    let parts: Vec<Result<Moments>> = (0..blocks)
        .into_par_iter()
        .map(|b| {
            let mut m = Moments::default();
            let mut scratch = Vec::new();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for i in b * BLOCK..((b + 1) * BLOCK).min(samples) {
                rng.set_stream(i as u64);
                rng.set_word_pos(0);
                m.push(replicate(spec, policy, cap, &mut rng, &mut scratch)?);
            }
            Ok(m)
        })
        .collect();
    let mut total = Moments::default();
    for part in parts {
        total = total.merge(part?);
    }
    let var = if total.n > 1 {
        total.m2 / (total.n - 1) as f64
    } else {
        0.0
    };
    Ok(SimulationReport {
        mean: total.mean,
        std_error: (var / total.n as f64).sqrt(),
        samples: total.n,
        seed,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn two_items_stop_first() {
        let spec = ProblemSpec::no_info(MaturityModel::BestNoRecall, 2);
        let r = simulate_policy(&spec, &ThresholdPolicy::FirstCandidateFrom(1), 200_000, 11).unwrap();
        assert!(r.z_score(0.75) < 4.0, "{r:?}");
        assert!((r.std_error - 0.25 / (200_000f64).sqrt()).abs() < 1e-4);
    }

    #[test]
    fn deterministic_single_sample() {
        let spec = ProblemSpec::full_info(MaturityModel::BestNoRecall, 5);
        let pol = ThresholdPolicy::StagesToGo(vec![0.0, 0.0, 0.3, 0.5, 0.6]);
        let a = simulate_policy(&spec, &pol, 1, 42).unwrap();
        let b = simulate_policy(&spec, &pol, 1, 42).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.samples, 1);
        assert_eq!(a.std_error, 0.0);
    }

    #[test]
    fn independent_of_thread_count() {
        let spec = ProblemSpec::no_info(MaturityModel::BestOrSecondNoRecall, 12);
        let pol = ThresholdPolicy::TwoThresholds { best: 3, second: 7 };
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| simulate_policy(&spec, &pol, 20_000, 5).unwrap());
        let b = four.install(|| simulate_policy(&spec, &pol, 20_000, 5).unwrap());
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.std_error.to_bits(), b.std_error.to_bits());
    }

    #[test]
    fn invalid_inputs() {
        let spec = ProblemSpec::no_info(MaturityModel::BestNoRecall, 5);
        assert!(simulate_policy(&spec, &ThresholdPolicy::FirstCandidateFrom(2), 0, 1).is_err());
        assert!(matches!(
            simulate_policy(&spec, &ThresholdPolicy::Constant(0.3), 10, 1),
            Err(Error::InvalidPolicy(_))
        ));
    }

    #[test]
    fn horizon_cap_is_enforced() {
        let spec = ProblemSpec::geometric(MaturityModel::BestNoRecall, 1e-6, Maturity::Standard);
        let r = simulate_policy_with_cap(&spec, &ThresholdPolicy::Constant(0.5), 100, 1, 10);
        assert!(matches!(r, Err(Error::HorizonCap { cap: 10 })));
    }

    #[test]
    fn geometric_tail_frequencies() {
        let p: f64 = 0.15;
        let h = HorizonDistribution::Geometric(p);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = 200_000;
        let draws: Vec<usize> = (0..m).map(|_| h.sample(&mut rng, DEFAULT_HORIZON_CAP).unwrap()).collect();
        for k in 1..=20 {
            let expect = (1.0 - p).powi(k as i32 - 1);
            let freq = draws.iter().filter(|&&d| d >= k).count() as f64 / m as f64;
            let se = (expect * (1.0 - expect) / m as f64).sqrt().max(1e-12);
            assert!((freq - expect).abs() <= 4.0 * se, "k={k}: {freq} vs {expect}");
        }
    }

    #[test]
    fn moments_merge_matches_direct() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
        let mut all = Moments::default();
        xs.iter().for_each(|&x| all.push(x));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..313].iter().for_each(|&x| a.push(x));
        xs[313..].iter().for_each(|&x| b.push(x));
        let m = a.merge(b);
        assert!((m.mean - all.mean).abs() < 1e-12);
        assert!((m.m2 - all.m2).abs() < 1e-8 * all.m2);
    }
}
