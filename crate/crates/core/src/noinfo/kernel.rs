//! Transition kernel of the chain of candidate arrivals.
//!
//! With candidate ranks A = {1..a}, the chain visits (k, r) whenever item k
//! has relative rank r <= a. From stage k the next candidate arrives at stage
//! s with each of its min(a, s) ranks equally likely, or never (absorption).

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Stage coordinate of the chain: a finite stage or the absorbing marker.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Stage {
    At(usize),
    Absorbed,
}

/// A state (k, r) of the candidate chain, or the absorbing state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum EmbeddedState {
    Candidate { k: usize, r: usize },
    Absorbed,
}

impl EmbeddedState {
    /// Validated candidate state for rank set {1..a} and horizon `n`.
    pub fn new(k: usize, r: usize, a: usize, n: usize) -> Result<Self> {
        if k == 0 || k > n {
            return Err(Error::Index { index: k, len: n });
        }
        if r == 0 || r > a.min(k) {
            return Err(Error::InvalidArgument(format!(
                "rank {r} is not a candidate rank at stage {k} (a = {a})"
            )));
        }
        Ok(EmbeddedState::Candidate { k, r })
    }

    pub fn is_absorbing(&self) -> bool {
        matches!(self, EmbeddedState::Absorbed)
    }
}

/// (x)_m = x (x-1) ... (x-m+1)
fn falling(x: usize, m: usize) -> f64 {
    (0..m).map(|i| (x - i) as f64).product()
}

/// Probability that, from a candidate at stage `r`, the next candidate is a
/// given one of the ranks at stage `s`; `Stage::Absorbed` gives the
/// probability that no further candidate appears.
///
/// Row sums satisfy a * sum_{s > r} p(r, s) + p(r, absorbed) = 1.
pub fn transition_prob(a: usize, n: usize, r: Stage, s: Stage) -> Result<f64> {
    if a == 0 {
        return Err(Error::InvalidArgument("candidate rank set must be non-empty".into()));
    }
    let r = match r {
        Stage::Absorbed => return Ok(if s == Stage::Absorbed { 1.0 } else { 0.0 }),
        Stage::At(r) => r,
    };
    if r == 0 || r > n {
        return Err(Error::Index { index: r, len: n });
    }
    match s {
        Stage::Absorbed => {
            let mut out = 0.0;
            for s in r + 1..=n {
                out += transition_prob(a, n, Stage::At(r), Stage::At(s))?;
            }
            Ok((1.0 - a as f64 * out).max(0.0))
        }
        Stage::At(s) => {
            if s == 0 || s > n {
                return Err(Error::Index { index: s, len: n });
            }
            if s <= r {
                return Err(Error::InvalidArgument(format!(
                    "transition needs s > r, got r = {r}, s = {s}"
                )));
            }
            if r < a {
                Ok(if s == r + 1 { 1.0 / s as f64 } else { 0.0 })
            } else {
                Ok(falling(r, a) / falling(s, a + 1))
            }
        }
    }
}

/// Kernel mean sum_{s > k} sum_{l <= min(a, s)} p(k, s) f(s, l).
pub fn kernel_mean<F: Fn(usize, usize) -> f64>(a: usize, n: usize, k: usize, f: F) -> Result<f64> {
    let mut out = 0.0;
    for s in k + 1..=n {
        let p = transition_prob(a, n, Stage::At(k), Stage::At(s))?;
        if p == 0.0 {
            continue;
        }
        for l in 1..=a.min(s) {
            out += p * f(s, l);
        }
    }
    Ok(out)
}
