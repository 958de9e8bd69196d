//! Full-information duration with a bounded random horizon N.
//!
//! The state (k, x) means the k-th observation is the running maximum with
//! value x. Payoffs are proportional durations: the number of periods the
//! candidate stays best, up to and including stage N, divided by the bound n.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fullinfo::grid::{self, Form};
use crate::fullinfo::{StageValueGrid, ThresholdSequence};
use crate::numerics::threshold_root;
use crate::process::HorizonDistribution;

const THRESHOLD_TOL: f64 = 1e-14;

/// Tail probabilities pi_k = P(N >= k), k = 1..=n.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PriorTail {
    pi: Vec<f64>,
}

impl PriorTail {
    /// From tail probabilities; needs pi_1 = 1, pi non-increasing and pi_n > 0.
    pub fn new(pi: Vec<f64>) -> Result<Self> {
        if pi.is_empty() {
            return Err(Error::InvalidArgument("empty prior".into()));
        }
        if (pi[0] - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidArgument(format!("pi_1 must be 1, got {}", pi[0])));
        }
        if pi.windows(2).any(|w| !(w[1] <= w[0])) || pi.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidArgument("tail probabilities must be non-increasing".into()));
        }
        if !(pi[pi.len() - 1] > 0.0) {
            return Err(Error::InvalidArgument("pi_n must be positive".into()));
        }
        Ok(Self { pi })
    }

    /// From the prior p_k = P(N = k), k = 1..=n.
    pub fn from_prior(p: &[f64]) -> Result<Self> {
        HorizonDistribution::General(p.to_vec()).validate()?;
        let mut pi = vec![0.0; p.len()];
        let mut acc = 0.0;
        for k in (0..p.len()).rev() {
            acc += p[k];
            pi[k] = acc;
        }
        pi[0] = 1.0;
        for k in 1..pi.len() {
            pi[k] = pi[k].min(pi[k - 1]);
        }
        Self::new(pi)
    }

    /// N = n surely.
    pub fn degenerate(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        Ok(Self { pi: vec![1.0; n] })
    }

    /// p_k proportional to p q^{k-1} on 1..=n, so pi_k = (q^{k-1} - q^n)/(1 - q^n).
    pub fn truncated_geometric(p: f64, n: usize) -> Result<Self> {
        if !(p > 0.0 && p < 1.0) {
            return Err(Error::InvalidArgument(format!("p must lie in (0,1), got {p}")));
        }
        if n == 0 {
            return Err(Error::InvalidArgument("n must be at least 1".into()));
        }
        let lq = (-p).ln_1p();
        let qn = (n as f64 * lq).exp();
        let pi = (1..=n)
            .map(|k| ((k - 1) as f64 * lq).exp() - qn)
            .map(|v| v / (1.0 - qn))
            .collect();
        Self::new(pi)
    }

    pub fn bound(&self) -> usize {
        self.pi.len()
    }

    /// pi_k for k in 1..=n.
    pub fn tail(&self, k: usize) -> Result<f64> {
        self.check_stage(k)?;
        Ok(self.pi[k - 1])
    }

    /// The prior P(N = k) as a horizon for simulation.
    pub fn to_horizon(&self) -> HorizonDistribution {
        let n = self.pi.len();
        let p = (0..n)
            .map(|i| self.pi[i] - if i + 1 < n { self.pi[i + 1] } else { 0.0 })
            .collect();
        HorizonDistribution::General(p)
    }

    fn check_stage(&self, k: usize) -> Result<()> {
        if k == 0 || k > self.pi.len() {
            return Err(Error::Index {
                index: k,
                len: self.pi.len(),
            });
        }
        Ok(())
    }

    /// sum_{i=k}^{n} (pi_i / pi_k) x^{i-k}
    fn stop_unnormalized(&self, k: usize, x: f64) -> f64 {
        let n = self.pi.len();
        let mut acc = 0.0;
        for i in (k..=n).rev() {
            acc = acc * x + self.pi[i - 1];
        }
        acc / self.pi[k - 1]
    }

    /// n int_x^1 s_i(y) dy = sum_{j=i}^{n} (pi_j / pi_i)(1 - x^{j-i+1})/(j-i+1)
    fn stop_integral_unnormalized(&self, i: usize, x: f64) -> f64 {
        let n = self.pi.len();
        let mut xp = 1.0;
        let mut acc = 0.0;
        for j in i..=n {
            xp *= x;
            acc += self.pi[j - 1] * (1.0 - xp) / (j - i + 1) as f64;
        }
        acc / self.pi[i - 1]
    }

    fn continue_unnormalized(&self, k: usize, x: f64) -> f64 {
        let n = self.pi.len();
        let mut acc = 0.0;
        for i in (k + 1..=n).rev() {
            acc = acc * x + self.pi[i - 1] * self.stop_integral_unnormalized(i, x);
        }
        acc / self.pi[k - 1]
    }
}

fn check_x(x: f64) -> Result<()> {
    if !(x > 0.0 && x <= 1.0) {
        return Err(Error::Domain(format!("x must lie in (0, 1], got {x}")));
    }
    Ok(())
}

/// Expected proportional duration of stopping in state (k, x):
/// s_k(x) = (1/n) (1/(pi_k x^k)) sum_{i=k}^{n} pi_i x^i.
pub fn rh_stop_payoff(prior: &PriorTail, k: usize, x: f64) -> Result<f64> {
    prior.check_stage(k)?;
    check_x(x)?;
    Ok(prior.stop_unnormalized(k, x) / prior.bound() as f64)
}

/// n s_k(x), the expected duration without the 1/n scaling.
pub fn rh_stop_payoff_unnormalized(prior: &PriorTail, k: usize, x: f64) -> Result<f64> {
    prior.check_stage(k)?;
    check_x(x)?;
    Ok(prior.stop_unnormalized(k, x))
}

/// c_k(x) = sum_{i=k+1}^{n} (pi_i/pi_k) x^{i-k-1} int_x^1 s_i(y) dy: the payoff
/// of continuing and stopping on the next candidate; c_n = 0. Not monotone in
/// x in general (it rises below the cutoff), but s_k - c_k changes sign once.
pub fn rh_continue_payoff(prior: &PriorTail, k: usize, x: f64) -> Result<f64> {
    prior.check_stage(k)?;
    check_x(x)?;
    Ok(prior.continue_unnormalized(k, x) / prior.bound() as f64)
}

/// Thresholds a*_k, returned indexed by observations to go: entry s is
/// a*_{n-s+1}, so the first entry is a*_n = 0.
pub fn rh_thresholds(prior: &PriorTail) -> Result<ThresholdSequence> {
    let n = prior.bound();
    let mut x = Vec::with_capacity(n);
    for s in 1..=n {
        let k = n - s + 1;
        let a = threshold_root(
            |x| prior.stop_unnormalized(k, x) - prior.continue_unnormalized(k, x),
            0.0,
            1.0,
            THRESHOLD_TOL,
        )?;
        x.push(a);
    }
    ThresholdSequence::new(x)
}

/// Backward induction for the optimal rule; `value()` is the optimal
/// proportional duration and `crossing(s)` the threshold a*_{n-s+1}.
pub fn rh_value(prior: &PriorTail, grid_size: usize) -> Result<StageValueGrid> {
    let n = prior.bound();
    grid::check_grid(n, grid_size)?;
    let nf = n as f64;
    let rho = |t: usize| {
        let k = n - t;
        if k == 0 {
            1.0
        } else {
            prior.pi[k] / prior.pi[k - 1]
        }
    };
    grid::solve(n, grid_size, Form::NoRecall, rho, |t, u| {
        prior.stop_unnormalized(n - t + 1, 1.0 - u) / nf
    })
}
