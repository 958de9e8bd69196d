//! Best-or-second duration under a geometric horizon.
//!
//! Stopping on a relatively best value x earns
//! w(x) = 2q/(1 - qx) - q(1 - q)/(1 - qx)^2, the expected number of later
//! observations (horizon step excluded) before x drops out of the top two.
//! The one-step comparison reduces to 3 - 2/mu - 2 ln mu >= 0 with
//! mu = (1 - qx)/p, giving the cutoff x* = (1 - mu* p)/q.
//!
//! When the second largest value is also a legal stop, states carry
//! (x, y) = (largest, second largest) and the transformed coordinates
//! s = p/(1 - qx), t = p/(1 - qy), alpha = q/p.

use serde::Serialize;

use super::geometric::{check_p, log_ratio};
use crate::error::{Error, Result};
use crate::numerics::{find_root, RootBracket};

fn check_x(x: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(())
}

/// mu* > 1 solving mu^2 e^{2/mu} = e^3.
pub fn mu_star() -> Result<f64> {
    find_root(
        |m: f64| 2.0 * m.ln() + 2.0 / m - 3.0,
        &RootBracket::new(1.5, 10.0, 1e-14)?,
    )
}

/// Stop payoff w(x) for a relatively best value x.
pub fn ka_geometric_payoff(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_x(x)?;
    let q = 1.0 - p;
    let d = 1.0 - q * x;
    Ok(2.0 * q / d - q * p / (d * d))
}

/// Payoff of continuing and stopping on the next relatively best value:
/// Tw(x) = q/(1 - qx) (2 ln((1 - qx)/(1 - q)) + (1 - q)/(1 - qx) - 1).
pub fn ka_geometric_continuation(p: f64, x: f64) -> Result<f64> {
    check_p(p)?;
    check_x(x)?;
    let q = 1.0 - p;
    let d = 1.0 - q * x;
    Ok(q / d * (2.0 * log_ratio(p, x) + p / d - 1.0))
}

/// Cutoff, mu* and value of the geometric best-or-second problem with stops
/// on relatively best observations only.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KaGeometric {
    pub p: f64,
    pub mu_star: f64,
    /// (mu* p - 1)/(p - 1), clamped to 0 when p >= 1/mu*.
    pub threshold: f64,
    pub value: f64,
}

/// Solves the problem. Below the cutoff the value function is constant, so
/// value = x* c + K with K = int_{x*}^1 w = 2 ln mu - 1 + 1/mu,
/// mu = (1 - q x*)/p and c = q K/(1 - q x*).
pub fn ka_geometric(p: f64) -> Result<KaGeometric> {
    check_p(p)?;
    let m = mu_star()?;
    let q = 1.0 - p;
    let threshold = ((1.0 - m * p) / q).max(0.0);
    let mu = (1.0 - q * threshold) / p;
    let k = 2.0 * mu.ln() - 1.0 + 1.0 / mu;
    let c = q * k / (1.0 - q * threshold);
    Ok(KaGeometric {
        p,
        mu_star: m,
        threshold,
        value: threshold * c + k,
    })
}

/// A point of the transformed state space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TransformedState {
    pub s: f64,
    pub t: f64,
    pub alpha: f64,
}

impl TransformedState {
    /// Requires 1/(1 + alpha) <= t <= s <= 1 and alpha >= 0.
    pub fn new(s: f64, t: f64, alpha: f64) -> Result<Self> {
        if !(alpha >= 0.0) || !alpha.is_finite() {
            return Err(Error::Domain(format!("alpha must be non-negative, got {alpha}")));
        }
        let lo = 1.0 / (1.0 + alpha);
        let slack = 1e-12;
        if !(t >= lo - slack && t <= s + slack && s <= 1.0 + slack) {
            return Err(Error::Domain(format!(
                "need {lo} <= t <= s <= 1, got s = {s}, t = {t}"
            )));
        }
        Ok(Self { s, t, alpha })
    }

    /// From the largest value x and second largest y (0 when absent).
    pub fn from_values(p: f64, x: f64, y: f64) -> Result<Self> {
        check_p(p)?;
        check_x(x)?;
        check_x(y)?;
        if y > x {
            return Err(Error::Domain(format!("second largest {y} exceeds largest {x}")));
        }
        let q = 1.0 - p;
        Self::new(p / (1.0 - q * x), p / (1.0 - q * y), q / p)
    }
}

/// Stop payoffs on the largest (W1) and second largest (W2) value and the
/// one-step continuation TW, in transformed coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Best2Payoffs {
    pub w1: f64,
    pub w2: f64,
    pub tw: f64,
}

impl Best2Payoffs {
    /// F = W1 - TW.
    pub fn f(&self) -> f64 {
        self.w1 - self.tw
    }

    /// G = W2 - TW.
    pub fn g(&self) -> f64 {
        self.w2 - self.tw
    }
}

/// W1 = alpha s(2 - s), W2 = alpha t, TW = alpha t(-ln(st) + s - 1).
pub fn best2_payoffs(state: &TransformedState) -> Result<Best2Payoffs> {
    let TransformedState { s, t, alpha } = *state;
    if !(s * t > 0.0) {
        return Err(Error::Domain(format!("s t must be positive, got s = {s}, t = {t}")));
    }
    Ok(Best2Payoffs {
        w1: alpha * s * (2.0 - s),
        w2: alpha * t,
        tw: alpha * t * (-(s * t).ln() + s - 1.0),
    })
}

/// One-step rule on the pair (largest x, second largest y): on a new
/// largest value stop iff F >= 0, on a new second largest iff G >= 0.
pub fn best2_full_rule_stops(p: f64, x: f64, y: f64, on_largest: bool) -> Result<bool> {
    let pay = best2_payoffs(&TransformedState::from_values(p, x, y)?)?;
    Ok(if on_largest { pay.f() >= 0.0 } else { pay.g() >= 0.0 })
}

/// Numerical check of the claim that the one-step sets induce a rule that
/// depends only on the largest value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Best2Reduction {
    pub p: f64,
    /// Cutoff where F changes sign on the diagonal t = s.
    pub threshold: f64,
    /// The same cutoff from [`ka_geometric`].
    pub ka_threshold: f64,
    /// Sign patterns of F and G agree for alpha in {0.1, 1, 10}.
    pub alpha_invariant: bool,
    /// Grid rows (fixed x) on which F >= 0 for some y and F < 0 for another.
    pub rows_depending_on_y: usize,
    /// Grid points with y < x where G >= 0.
    pub second_stop_points: usize,
    pub grid_points: usize,
}

impl Best2Reduction {
    /// True when stopping never depends on the second largest value.
    pub fn depends_only_on_largest(&self) -> bool {
        self.rows_depending_on_y == 0 && self.second_stop_points == 0
    }
}

/// Computes the diagonal cutoff and scans a `grid` x `grid` lattice of
/// (x, y), y <= x, for the sign structure of F and G.
pub fn best2_reduction(p: f64, grid: usize) -> Result<Best2Reduction> {
    check_p(p)?;
    if grid < 2 {
        return Err(Error::InvalidArgument("grid must have at least 2 points".into()));
    }
    let ka = ka_geometric(p)?;
    let diag = |x: f64| {
        best2_payoffs(&TransformedState::from_values(p, x, x).expect("valid state"))
            .expect("positive state")
            .f()
    };
    let threshold = if diag(0.0) >= 0.0 {
        0.0
    } else {
        find_root(diag, &RootBracket::new(0.0, 1.0, 1e-15)?)?
    };

    let mut rows = 0;
    let mut second = 0;
    let mut points = 0;
    for i in 0..grid {
        let x = (i as f64 + 0.5) / grid as f64;
        let (mut any_stop, mut any_go) = (false, false);
        for j in 0..grid {
            let y = x * j as f64 / grid as f64;
            let pay = best2_payoffs(&TransformedState::from_values(p, x, y)?)?;
            points += 1;
            if pay.f() >= 0.0 {
                any_stop = true;
            } else {
                any_go = true;
            }
            if pay.g() >= 0.0 {
                second += 1;
            }
        }
        if any_stop && any_go {
            rows += 1;
        }
    }

    Ok(Best2Reduction {
        p,
        threshold,
        ka_threshold: ka.threshold,
        alpha_invariant: alpha_invariant(grid)?,
        rows_depending_on_y: rows,
        second_stop_points: second,
        grid_points: points,
    })
}

/// Compares the signs of F and G over (s, t) in [1/1.1, 1]^2, t <= s, for
/// alpha in {0.1, 1, 10}.
pub fn alpha_invariant(grid: usize) -> Result<bool> {
    let lo = 1.0 / 1.1;
    for i in 0..=grid {
        let s = lo + (1.0 - lo) * i as f64 / grid as f64;
        for j in 0..=i {
            let t = lo + (1.0 - lo) * j as f64 / grid as f64;
            let signs = [0.1, 1.0, 10.0]
                .iter()
                .map(|&a| {
                    let pay = best2_payoffs(&TransformedState::new(s, t, a)?)?;
                    Ok((pay.f() >= 0.0, pay.g() >= 0.0))
                })
                .collect::<Result<Vec<_>>>()?;
            if signs.windows(2).any(|w| w[0] != w[1]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
