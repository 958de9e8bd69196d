//! Infinite rank-only sequence with discounted holding reward.
//!
//! Holding the relatively best item from stage k until the next relative best
//! arrives at T earns (1 - beta) sum_{j=k}^{T-1} beta^j = beta^k - beta^T, with
//! expectation f(k) = (1 - beta) k sum_{m >= k} beta^m / m.

use serde::Serialize;

use crate::error::{Error, Result};

/// Remainder bound for truncated series.
const SERIES_TOL: f64 = 1e-13;

fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::InvalidArgument(format!("beta must lie in (0,1), got {beta}")));
    }
    Ok(())
}

/// Smallest J >= from with H_J beta^J / ((1 - beta) J) < SERIES_TOL. Bounds
/// the tails of every series below, whose terms are at most H_{j-1} beta^j / j
/// with H_{j-1}/j non-increasing.
fn truncation_point(beta: f64, from: usize) -> usize {
    let mut j = from.max(1);
    let mut h: f64 = (1..=j).map(|i| 1.0 / i as f64).sum();
    let mut bj = beta.powi(j as i32);
    while h.max(1.0) * bj / ((1.0 - beta) * j as f64) >= SERIES_TOL {
        j += 1;
        h += 1.0 / j as f64;
        bj *= beta;
    }
    j
}

/// (left, right) sides of the threshold inequality at r:
/// sum_{j>r} (beta^j/j) sum_{k=r+1}^{j} 1/(k-1)  and  sum_{j>=r} beta^j/j.
pub fn discounted_threshold_sides(beta: f64, r: usize) -> Result<(f64, f64)> {
    check_beta(beta)?;
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    let jmax = truncation_point(beta, r + 1);
    let mut left = 0.0;
    let mut inner = 0.0;
    let mut bj = beta.powi(r as i32);
    let mut right = bj / r as f64;
    for j in r + 1..=jmax {
        bj *= beta;
        inner += 1.0 / (j - 1) as f64;
        left += bj / j as f64 * inner;
        right += bj / j as f64;
    }
    Ok((left, right))
}

/// Optimal threshold r*(beta): the first r at which the left side does not
/// exceed the right side.
pub fn discounted_threshold(beta: f64) -> Result<usize> {
    check_beta(beta)?;
    let mut r = 1;
    loop {
        let (l, rr) = discounted_threshold_sides(beta, r)?;
        if l <= rr {
            return Ok(r);
        }
        r += 1;
    }
}

/// Expected discounted holding reward f(k) of stopping on a relative best at k.
pub fn discounted_stop_payoff(beta: f64, k: usize) -> Result<f64> {
    check_beta(beta)?;
    if k == 0 {
        return Err(Error::InvalidArgument("k must be at least 1".into()));
    }
    let jmax = truncation_point(beta, k);
    let mut s = 0.0;
    let mut bm = beta.powi(jmax as i32);
    for m in (k..=jmax).rev() {
        s += bm / m as f64;
        bm /= beta;
    }
    Ok((1.0 - beta) * k as f64 * s)
}

/// Value of the rule "stop on the first relative best from stage r":
/// f(1) at r = 1, otherwise sum_{k>=r} (r-1)/(k(k-1)) f(k).
pub fn discounted_value(beta: f64, r: usize) -> Result<f64> {
    check_beta(beta)?;
    if r == 0 {
        return Err(Error::InvalidArgument("r must be at least 1".into()));
    }
    if r == 1 {
        return discounted_stop_payoff(beta, 1);
    }
    let jmax = truncation_point(beta, r);
    // S(k) = sum_{m=k}^{jmax} beta^m / m, accumulated from the far end
    let mut s = 0.0;
    let mut acc = 0.0;
    let mut bm = beta.powi(jmax as i32);
    for k in (r..=jmax).rev() {
        s += bm / k as f64;
        bm /= beta;
        acc += s / (k - 1) as f64;
    }
    Ok((1.0 - beta) * (r - 1) as f64 * acc)
}

/// Optimal threshold and value of the discounted problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiscountedSolution {
    pub beta: f64,
    pub threshold: usize,
    pub value: f64,
}

pub fn solve_discounted(beta: f64) -> Result<DiscountedSolution> {
    let threshold = discounted_threshold(beta)?;
    Ok(DiscountedSolution {
        beta,
        threshold,
        value: discounted_value(beta, threshold)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_beta_stops_at_once() {
        for beta in [1e-6, 1e-3, 0.05, 0.2] {
            assert_eq!(discounted_threshold(beta).unwrap(), 1);
        }
    }

    #[test]
    fn threshold_monotone_in_beta() {
        let mut prev = 1;
        for i in 1..=99 {
            let beta = i as f64 / 100.0;
            let r = discounted_threshold(beta).unwrap();
            assert!(r >= prev, "beta={beta}");
            prev = r;
        }
        assert!(prev > 1);
    }

    #[test]
    fn threshold_maximizes_rule_value() {
        for beta in [0.5, 0.9, 0.95, 0.99] {
            let sol = solve_discounted(beta).unwrap();
            for r in 1..=3 * sol.threshold + 5 {
                assert!(discounted_value(beta, r).unwrap() <= sol.value + 1e-13, "beta={beta} r={r}");
            }
        }
    }

    #[test]
    fn stop_payoff_against_direct_series() {
        let beta: f64 = 0.9;
        for k in [1usize, 3, 10] {
            let direct: f64 = (k..5000).map(|m| beta.powi(m as i32) / m as f64).sum::<f64>() * (1.0 - beta) * k as f64;
            assert!((discounted_stop_payoff(beta, k).unwrap() - direct).abs() < 1e-13);
        }
        // r = 1 gives f(1) = -(1 - beta) ln(1 - beta)
        let f1 = discounted_value(beta, 1).unwrap();
        assert!((f1 + (1.0 - beta) * (1.0 - beta).ln()).abs() < 1e-12);
    }

    #[test]
    fn rejects_bad_beta() {
        assert!(discounted_threshold(0.0).is_err());
        assert!(discounted_threshold(1.0).is_err());
        assert!(discounted_value(0.5, 0).is_err());
    }
}
