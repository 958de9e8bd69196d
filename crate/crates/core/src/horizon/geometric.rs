//! Full-information duration with an unbounded geometric horizon,
//! P(N = k) = p q^{k-1}. Payoffs do not depend on the stage, so the optimal
//! rule is a single cutoff on the value of a relatively best observation.

use serde::Serialize;

use crate::error::{Error, Result};

pub(crate) fn check_p(p: f64) -> Result<()> {
    if !(p > 0.0 && p < 1.0) {
        return Err(Error::InvalidArgument(format!("p must lie in (0,1), got {p}")));
    }
    Ok(())
}

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(())
}

/// ln((1 - qx)/(1 - q)) = ln(1 + q(1 - x)/p), accurate for x near 1.
pub(crate) fn log_ratio(p: f64, x: f64) -> f64 {
    f64::ln_1p((1.0 - p) * (1.0 - x) / p)
}

/// Expected duration 1/(1 - qx) of stopping on a relatively best value x,
/// the horizon step counted.
pub fn geometric_stop_payoff(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_x(x)?;
    Ok(1.0 / (1.0 - (1.0 - p) * x))
}

/// Expected duration q/(1 - qx) when the holding ends at the last
/// observation instead of one step after it.
pub fn geometric_alt_maturity_payoff(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_x(x)?;
    let q = 1.0 - p;
    Ok(q / (1.0 - q * x))
}

/// Optimal cutoff and value of the geometric-horizon problem.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeometricSolution {
    pub p: f64,
    /// Stop on the first relatively best observation with value >= x0.
    pub x0: f64,
    pub value: f64,
    /// p > 1/e: every observation is worth stopping on.
    pub stop_everywhere: bool,
}

impl GeometricSolution {
    /// Value function v(x) at a candidate with value x: 1/(1 - qx) on
    /// [x0, 1] and constant 1/(1 - q x0) below.
    pub fn value_function(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        geometric_stop_payoff(self.p, x.max(self.x0))
    }

    /// Continuation payoff c(x) = q/(1 - qx) int_x^1 v(y) dy.
    pub fn continuation(&self, x: f64) -> Result<f64> {
        check_x(x)?;
        let q = 1.0 - self.p;
        let lo = x.max(self.x0);
        let below = (self.x0 - x).max(0.0) * self.value_function(self.x0)?;
        let above = log_ratio(self.p, lo) / q;
        Ok(q / (1.0 - q * x) * (below + above))
    }
}

/// Solves the geometric-horizon problem: x0 = (1 - e p)/q when p <= 1/e,
/// value x0/(1 - q x0) - (1/q) ln((1 - q)/(1 - q x0)); otherwise stop at
/// once for -(1/q) ln(1 - q).
pub fn geometric_unbounded(p: f64) -> Result<GeometricSolution> {
    check_p(p)?;
    let q = 1.0 - p;
    let e = std::f64::consts::E;
    if e * p > 1.0 {
        return Ok(GeometricSolution {
            p,
            x0: 0.0,
            value: -(-q).ln_1p() / q,
            stop_everywhere: true,
        });
    }
    let x0 = (1.0 - e * p) / q;
    let value = x0 / (1.0 - q * x0) + log_ratio(p, x0) / q;
    Ok(GeometricSolution {
        p,
        x0,
        value,
        stop_everywhere: false,
    })
}

/// Same problem with payoff q/(1 - qx): the cutoff is unchanged and the
/// value scales by q.
pub fn geometric_alt_maturity(p: f64) -> Result<GeometricSolution> {
    let s = geometric_unbounded(p)?;
    Ok(GeometricSolution {
        value: s.value * (1.0 - p),
        ..s
    })
}
