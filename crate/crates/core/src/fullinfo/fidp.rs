//! Full-information duration of owning the relatively best observation.
//!
//! Observations are iid uniform on [0, 1]. Holding the current maximum x with
//! s observations to go (counting the present one) keeps it best for
//! w(x, s) = 1 + x + ... + x^{s-1} periods in expectation.

use serde::Serialize;

use super::grid::{self, Form, StageValueGrid};
use crate::error::{Error, Result};
use crate::numerics::{geometric_sum_u, threshold_root};
use crate::problem::ThresholdPolicy;

const THRESHOLD_TOL: f64 = 1e-15;

/// Expected duration w(x, s) = sum_{m=0}^{s-1} x^m of stopping on the
/// current maximum x with s observations to go.
pub fn w_fidp(x: f64, s: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    Ok(geometric_sum_u(1.0 - x, stages_u32(s)?))
}

pub(crate) fn stages_u32(s: usize) -> Result<u32> {
    u32::try_from(s).map_err(|_| Error::InvalidArgument(format!("too many stages: {s}")))
}

/// Backward induction for the no-recall problem with N observations.
///
/// `value()` is the optimal expected duration v(0, N); `crossing(s)` the
/// computed threshold with s observations to go.
pub fn fidp_value(n: usize, grid_size: usize) -> Result<StageValueGrid> {
    grid::check_grid(n, grid_size)?;
    stages_u32(n)?;
    grid::solve(n, grid_size, Form::NoRecall, |_| 1.0, |s, u| geometric_sum_u(u, s as u32))
}

/// Backward induction for the problem with recall (decisions on the running
/// maximum).
pub fn fidp_recall_value(n: usize, grid_size: usize) -> Result<StageValueGrid> {
    grid::check_grid(n, grid_size)?;
    stages_u32(n)?;
    grid::solve(n, grid_size, Form::Recall, |_| 1.0, |s, u| geometric_sum_u(u, s as u32))
}

/// Threshold gap g(x) = sum_{i=1}^{s} x^{i-1} -
///   sum_{i=1}^{s-1} x^{i-1} sum_{j=1}^{s-i} (1 - x^j)/j,
/// i.e. stop payoff minus one-step look-ahead continuation.
pub fn fidp_threshold_gap(x: f64, s: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    Ok(gap(x, s))
}

fn one_minus_pow(x: f64, j: usize) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -f64::exp_m1(j as f64 * x.ln())
    }
}

fn gap(x: f64, s: usize) -> f64 {
    let stop = geometric_sum_u(1.0 - x, s as u32);
    if s == 1 {
        return stop;
    }
    // Horner over i with F(m) = sum_{j<=m} (1 - x^j)/j
    let mut f = 0.0;
    let mut acc = 0.0;
    for m in 1..s {
        f += one_minus_pow(x, m) / m as f64;
        acc = acc * x + f;
    }
    stop - acc
}

/// Optimal threshold with s observations to go: select a relatively best
/// observation iff its value is at least x_s. x_1 = 0, and x_s = 0 whenever
/// the gap is already non-negative at 0.
pub fn fidp_threshold(s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    stages_u32(s)?;
    if s == 1 {
        return Ok(0.0);
    }
    threshold_root(|x| gap(x, s), 0.0, 1.0, THRESHOLD_TOL)
}

/// Threshold with recall: root of sum_{j=1}^{s-1} (1 - x^j)/j = 1, or 0 when
/// the sum is at most 1 at x = 0 (s <= 2).
pub fn fidp_recall_threshold(s: usize) -> Result<f64> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    let g = |x: f64| 1.0 - (1..s).map(|j| one_minus_pow(x, j) / j as f64).sum::<f64>();
    threshold_root(g, 0.0, 1.0, THRESHOLD_TOL)
}

/// Thresholds x_s indexed by observations to go.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ThresholdSequence {
    x: Vec<f64>,
}

impl ThresholdSequence {
    /// Builds a sequence from x_1, x_2, ...; requires x_1 = 0 and every value in [0, 1].
    pub fn new(x: Vec<f64>) -> Result<Self> {
        match x.first() {
            None => return Err(Error::InvalidArgument("empty threshold sequence".into())),
            Some(&x1) if x1 != 0.0 => {
                return Err(Error::InvalidArgument(format!("x(1) must be 0, got {x1}")))
            }
            _ => {}
        }
        if let Some(bad) = x.iter().find(|v| !(0.0..=1.0).contains(*v)) {
            return Err(Error::Domain(format!("threshold {bad} outside [0, 1]")));
        }
        Ok(Self { x })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// x_s for s in 1..=len.
    pub fn get(&self, s: usize) -> Result<f64> {
        if s == 0 || s > self.x.len() {
            return Err(Error::Index {
                index: s,
                len: self.x.len(),
            });
        }
        Ok(self.x[s - 1])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.x
    }

    /// Policy for a fixed horizon of `len` observations.
    pub fn to_policy(&self) -> ThresholdPolicy {
        ThresholdPolicy::StagesToGo(self.x.clone())
    }
}

/// x_1..=x_n of the no-recall problem.
pub fn fidp_thresholds(n: usize) -> Result<ThresholdSequence> {
    ThresholdSequence::new((1..=n).map(fidp_threshold).collect::<Result<_>>()?)
}

/// x_1..=x_n of the problem with recall.
pub fn fidp_recall_thresholds(n: usize) -> Result<ThresholdSequence> {
    ThresholdSequence::new((1..=n).map(fidp_recall_threshold).collect::<Result<_>>()?)
}
