//! Backward induction over stages for rank-only problems.

use serde::Serialize;

use super::kernel::{transition_prob, Stage};
use super::payoff::noinfo_payoff;
use crate::error::{Error, Result};
use crate::process::MaturityModel;

/// Value table of a rank-only stopping problem with candidate ranks `A`.
///
/// `w(k, r)` is the optimal expected payoff after observing relative rank r
/// at stage k; `w_tilde(k)` the optimal payoff before observing stage k, with
/// `w_tilde(N + 1) = 0`. The problem value is `w_tilde(1)`.
#[derive(Debug, Clone, Serialize)]
pub struct NoInfoValueTable {
    n: usize,
    ranks: Vec<usize>,
    // phi[k - 1][i] and w[k - 1][i] for the i-th rank of A (NaN when ranks[i] > k)
    phi: Vec<Vec<f64>>,
    w: Vec<Vec<f64>>,
    w_tilde: Vec<f64>,
}

/// Backward induction: w(k, r) = max(phi(k, r), w_tilde(k + 1)) for r in A,
/// w_tilde(k) = mean over the k equally likely relative ranks.
///
/// Ties between stopping and continuing count as stopping.
pub fn backward_induction_noinfo<F>(n: usize, ranks: &[usize], phi: F) -> Result<NoInfoValueTable>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut ranks = ranks.to_vec();
    ranks.sort_unstable();
    ranks.dedup();
    if ranks.is_empty() || ranks[0] == 0 {
        return Err(Error::InvalidArgument("candidate ranks must be a non-empty subset of 1..".into()));
    }
    let mut phi_tab = vec![vec![f64::NAN; ranks.len()]; n];
    let mut w = vec![vec![f64::NAN; ranks.len()]; n];
    let mut w_tilde = vec![0.0; n + 2];
    for k in (1..=n).rev() {
        let cont = w_tilde[k + 1];
        let mut sum = 0.0;
        let mut active = 0usize;
        for (i, &r) in ranks.iter().enumerate() {
            if r > k {
                continue;
            }
            let p = phi(k, r)?;
            phi_tab[k - 1][i] = p;
            let v = if p >= cont { p } else { cont };
            w[k - 1][i] = v;
            sum += v;
            active += 1;
        }
        w_tilde[k] = (sum + (k - active) as f64 * cont) / k as f64;
    }
    Ok(NoInfoValueTable {
        n,
        ranks,
        phi: phi_tab,
        w,
        w_tilde,
    })
}

impl NoInfoValueTable {
    /// Table for a no-recall model with its natural payoff.
    pub fn for_model(model: MaturityModel, n: usize) -> Result<Self> {
        if model.recall() {
            return Err(Error::InvalidArgument(
                "recall models are fixed-stage problems; see classical_bc_duration".into(),
            ));
        }
        let ranks: Vec<usize> = (1..=model.stop_ranks()).collect();
        backward_induction_noinfo(n, &ranks, |k, r| {
            Ok(noinfo_payoff(model, n, k, r)?.unwrap_or(0.0))
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn value(&self) -> f64 {
        self.w_tilde[1]
    }

    /// Optimal payoff before observing stage k, for k in 1..=N+1.
    pub fn w_tilde(&self, k: usize) -> Result<f64> {
        if k == 0 || k > self.n + 1 {
            return Err(Error::Index {
                index: k,
                len: self.n + 1,
            });
        }
        Ok(self.w_tilde[k])
    }

    fn slot(&self, k: usize, r: usize) -> Result<Option<usize>> {
        if k == 0 || k > self.n {
            return Err(Error::Index { index: k, len: self.n });
        }
        if r == 0 || r > k {
            return Err(Error::InvalidArgument(format!("rank {r} impossible at stage {k}")));
        }
        Ok(self.ranks.iter().position(|&x| x == r))
    }

    /// Optimal payoff after observing relative rank r at stage k.
    pub fn w(&self, k: usize, r: usize) -> Result<f64> {
        Ok(match self.slot(k, r)? {
            Some(i) => self.w[k - 1][i],
            None => self.w_tilde[k + 1],
        })
    }

    /// Stopping payoff phi(k, r) used to build the table (0 outside A).
    pub fn phi(&self, k: usize, r: usize) -> Result<f64> {
        Ok(match self.slot(k, r)? {
            Some(i) => self.phi[k - 1][i],
            None => 0.0,
        })
    }

    /// Whether stopping at (k, r) is optimal.
    pub fn stops(&self, k: usize, r: usize) -> Result<bool> {
        Ok(match self.slot(k, r)? {
            Some(i) => self.phi[k - 1][i] >= self.w_tilde[k + 1],
            None => false,
        })
    }

    /// First stage at which stopping on relative rank r is optimal.
    pub fn first_stop_stage(&self, r: usize) -> Option<usize> {
        (r.max(1)..=self.n).find(|&k| self.stops(k, r).unwrap_or(false))
    }

    /// True when the stopping set for rank r is {k : k >= first_stop_stage(r)}.
    pub fn stopping_set_is_tail(&self, r: usize) -> bool {
        match self.first_stop_stage(r) {
            Some(k0) => (k0..=self.n).all(|k| self.stops(k, r).unwrap_or(false)),
            None => true,
        }
    }
}

/// Problem value computed on the candidate chain with ranks {1..a}:
/// U(k) = sum_{s > k} sum_{l <= min(a, s)} p(k, s) max(phi(s, l), U(s)),
/// value = max(phi(1, 1), U(1)).
pub fn chain_value<F>(n: usize, a: usize, phi: F) -> Result<f64>
where
    F: Fn(usize, usize) -> Result<f64>,
{
    if n == 0 || a == 0 {
        return Err(Error::InvalidArgument("n and a must be positive".into()));
    }
    let mut u = vec![0.0; n + 1];
    for k in (1..n).rev() {
        let mut acc = 0.0;
        for s in k + 1..=n {
            let p = transition_prob(a, n, Stage::At(k), Stage::At(s))?;
            if p == 0.0 {
                continue;
            }
            for l in 1..=a.min(s) {
                acc += p * phi(s, l)?.max(u[s]);
            }
        }
        u[k] = acc;
    }
    Ok(phi(1, 1)?.max(u[1]))
}
