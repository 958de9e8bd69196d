//! Digamma and trigamma on the positive real axis.
//!
//! Both use upward recurrence until the argument is at least [`SHIFT`] and
//! then the Stirling-type asymptotic series. With seven Bernoulli terms the
//! truncation error at the shifted argument is below 1e-16.

use crate::error::{Error, Result};

const SHIFT: f64 = 10.0;

/// Euler-Mascheroni constant.
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// The digamma function psi(x) = d/dx ln Gamma(x) for x > 0.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    // B_2k / (2k) coefficients for k = 1..7
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2
                                * (1.0 / 240.0
                                    - inv2
                                        * (1.0 / 132.0
                                            - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 * inv - series)
}

/// The trigamma function psi_1(x) = d/dx psi(x) for x > 0.
pub fn trigamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(Error::Domain(format!("trigamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < SHIFT {
        acc += 1.0 / (x * x);
        x += 1.0;
    }
    let inv = 1.0 / x;
    let inv2 = inv * inv;
    let series = inv2
        * inv
        * (1.0 / 6.0
            - inv2
                * (1.0 / 30.0
                    - inv2
                        * (1.0 / 42.0
                            - inv2
                                * (1.0 / 30.0
                                    - inv2
                                        * (5.0 / 66.0
                                            - inv2 * (691.0 / 2730.0 - inv2 * 7.0 / 6.0))))));
    Ok(acc + inv + 0.5 * inv2 + series)
}

/// psi(m) - psi(k) for positive integers, i.e. the harmonic segment
/// 1/k + ... + 1/(m-1). Exact summation for short ranges.
pub(crate) fn digamma_diff(m: usize, k: usize) -> f64 {
    debug_assert!(k >= 1 && m >= 1);
    if m == k {
        return 0.0;
    }
    if m > k && m - k <= 64 {
        return (k..m).rev().map(|j| 1.0 / j as f64).sum();
    }
    if k > m && k - m <= 64 {
        return -(m..k).rev().map(|j| 1.0 / j as f64).sum::<f64>();
    }
    digamma(m as f64).unwrap() - digamma(k as f64).unwrap()
}
