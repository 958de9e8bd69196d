//! Stopping on a relatively best or second best item (rank-only).

use serde::Serialize;

use super::induction::NoInfoValueTable;
use super::payoff::phi_best2;
use crate::error::{Error, Result};
use crate::numerics::{digamma, trigamma};
use crate::process::MaturityModel;

/// Optimal rule: stop on a relatively best item from stage `k1`, on a
/// relatively second item from stage `k2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TwoThresholds {
    pub k1: usize,
    pub k2: usize,
    pub value: f64,
}

/// Thresholds and value of the best-or-second problem by backward induction.
pub fn solve_best2(n: usize) -> Result<TwoThresholds> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    let t = NoInfoValueTable::for_model(MaturityModel::BestOrSecondNoRecall, n)?;
    let k1 = t.first_stop_stage(1).expect("stopping at the last stage is optimal");
    let k2 = t.first_stop_stage(2).expect("stopping at the last stage is optimal");
    Ok(TwoThresholds {
        k1,
        k2,
        value: t.value(),
    })
}

/// Comparison of the optimal value with its closed-form expressions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Best2ClosedFormCheck {
    pub n: usize,
    pub k1: usize,
    pub k2: usize,
    /// Backward-induction value (the reference).
    pub recursion: f64,
    /// sum_{j=k+1}^{s} k/(j(j-1)) phi(j,1) + (k/s) w_tilde(s+1) with k = k1-1, s = k2-1.
    pub sum_form: Option<f64>,
    /// The digamma/trigamma expression for the same quantity.
    pub digamma_form: Option<f64>,
}

impl Best2ClosedFormCheck {
    pub fn sum_form_agrees(&self, tol: f64) -> bool {
        self.sum_form.is_some_and(|v| (v - self.recursion).abs() <= tol)
    }

    pub fn digamma_form_agrees(&self, tol: f64) -> bool {
        self.digamma_form.is_some_and(|v| (v - self.recursion).abs() <= tol)
    }
}

/// The digamma/trigamma expression for the value of waiting until stage
/// k+1, stopping on a relative best in (k, s] and continuing optimally after s.
pub fn best2_value_digamma_form(n: usize, k: usize, s: usize) -> Result<f64> {
    if k == 0 || s == 0 {
        return Err(Error::InvalidArgument("k and s must be positive".into()));
    }
    let (nf, kf, sf) = (n as f64, k as f64, s as f64);
    let d = (nf - 1.0) * nf;
    let t1 = (nf * (3.0 * nf - 4.0) - 3.0 + kf * (nf - 3.0) * digamma(kf)?) / d;
    let t2 = kf * (2.0 * (nf - 1.0) * digamma(nf)? + (5.0 - 3.0 * nf) * digamma(sf)?) / d;
    let t3 = kf * 2.0 * (nf * nf - 1.0) * (trigamma(sf + 1.0)? - trigamma(kf + 1.0)?) / d;
    let poly = 3.0 * nf.powi(3) + (2.0 * sf - 3.0) * nf * nf - 2.0 * (sf * sf + sf + 2.0) * nf + sf * sf + sf;
    let t4 = kf * poly / ((nf - 1.0) * nf * nf * sf);
    Ok(t1 + t2 + t3 - t4)
}

/// Evaluates both closed forms at the optimal thresholds and compares them
/// with backward induction.
pub fn best2_closed_form_check(n: usize) -> Result<Best2ClosedFormCheck> {
    let sol = solve_best2(n)?;
    let table = NoInfoValueTable::for_model(MaturityModel::BestOrSecondNoRecall, n)?;
    let (k, s) = (sol.k1 - 1, sol.k2 - 1);
    let (sum_form, digamma_form) = if k >= 1 && s >= k {
        let mut acc = 0.0;
        for j in k + 1..=s {
            acc += k as f64 / (j * (j - 1)) as f64 * phi_best2(n, j, 1)?;
        }
        acc += k as f64 / s as f64 * table.w_tilde(s + 1)?;
        (Some(acc), Some(best2_value_digamma_form(n, k, s)?))
    } else {
        (None, None)
    };
    Ok(Best2ClosedFormCheck {
        n,
        k1: sol.k1,
        k2: sol.k2,
        recursion: sol.value,
        sum_form,
        digamma_form,
    })
}
