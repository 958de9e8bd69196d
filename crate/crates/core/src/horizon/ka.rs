//! Duration of owning the relatively best or second best observation, with
//! stops allowed only on relatively best observations and a fixed horizon.
//!
//! n is the time to go counting the present observation. Holding a running
//! maximum x, the item keeps its status until the second later exceedance of
//! x; its expected duration is U_n(x) = 2 sum_{k=1}^{n-1} x^{k-1} - (n-2) x^{n-1}.
//! The functions `ka_u`, `ka_g` and `ka_threshold` evaluate
//! variants with the coefficient n in place of n - 2; those give
//! U_1 = -1 and are kept for comparison only.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::fullinfo::grid::{self, Form};
use crate::fullinfo::{StageValueGrid, ThresholdSequence};
use crate::numerics::threshold_root;

const THRESHOLD_TOL: f64 = 1e-15;

fn check(n: usize, x: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    Ok(())
}

/// Coefficient of x^{n-1} subtracted in U_n.
#[derive(Clone, Copy)]
enum Form2 {
    CoefN,
    Duration,
}

impl Form2 {
    fn coef(self, n: usize) -> f64 {
        match self {
            Form2::CoefN => n as f64,
            Form2::Duration => n as f64 - 2.0,
        }
    }
}

fn u_form(n: usize, x: f64, f: Form2) -> f64 {
    let s = (1..n).fold(0.0, |acc, _| acc * x + 1.0);
    2.0 * s - f.coef(n) * x.powi(n as i32 - 1)
}

fn one_minus_pow(x: f64, j: usize) -> f64 {
    if x == 0.0 {
        1.0
    } else {
        -f64::exp_m1(j as f64 * x.ln())
    }
}

/// U_n(x) - sum_{k=1}^{n-1} x^{k-1} int_x^1 U_{n-k}(y) dy, with
/// int_x^1 U_m = 2 sum_{j=1}^{m-1} (1 - x^j)/j - a_m (1 - x^m)/m.
fn g_form(n: usize, x: f64, f: Form2) -> f64 {
    let mut h = 0.0; // sum_{j=1}^{m-1} (1 - x^j)/j
    let mut acc = 0.0;
    for m in 1..n {
        let om = one_minus_pow(x, m);
        let integral = 2.0 * h - f.coef(m) * om / m as f64;
        acc = acc * x + integral;
        h += om / m as f64;
    }
    u_form(n, x, f) - acc
}

/// Coefficient-n variant U_n(x) = 2 sum_{k=1}^{n-1} x^{k-1} - n x^{n-1}.
pub fn ka_u(n: usize, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(u_form(n, x, Form2::CoefN))
}

/// Coefficient-n variant G_n(x) = U_n(x) - sum_{k=1}^{n-1} x^{k-1} int_x^1 U_{n-k}(y) dy.
pub fn ka_g(n: usize, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(g_form(n, x, Form2::CoefN))
}

/// Left side of the threshold equation
/// 3 sum_{k=1}^{n} x^{k-1} - 2n x^{n-1} - 2 sum_{k=1}^{n-1} x^{k-1} H_{n-k-1}
///   + 2 sum_{k=1}^{n-1} x^k H_k.
pub fn ka_conjecture_lhs(n: usize, x: f64) -> Result<f64> {
    check(n, x)?;
    let h: Vec<f64> = std::iter::once(0.0)
        .chain((1..=n).scan(0.0, |acc, j| {
            *acc += 1.0 / j as f64;
            Some(*acc)
        }))
        .collect();
    let mut total = 0.0;
    let mut xp = 1.0; // x^{k-1}
    for k in 1..=n {
        total += 3.0 * xp;
        if k < n {
            total -= 2.0 * xp * h[n - k - 1];
            total += 2.0 * xp * x * h[k];
        }
        if k == n {
            total -= 2.0 * n as f64 * xp;
        }
        xp *= x;
    }
    Ok(total)
}

/// Threshold s_n from the conjectured equation: s_1 = 1, otherwise the point in
/// [0, 1] from which the left side stays non-negative (0 when it already is
/// at x = 0).
pub fn ka_threshold(n: usize) -> Result<f64> {
    check(n, 0.0)?;
    if n == 1 {
        return Ok(1.0);
    }
    threshold_root(|x| ka_conjecture_lhs(n, x).unwrap(), 0.0, 1.0, THRESHOLD_TOL)
}

/// Zero of the coefficient-n G_n, 0 when G_n(0) >= 0 and 1 when G_n(1) < 0.
pub fn ka_g_root(n: usize) -> Result<f64> {
    check(n, 0.0)?;
    if g_form(n, 1.0, Form2::CoefN) < 0.0 {
        return Ok(1.0);
    }
    threshold_root(|x| g_form(n, x, Form2::CoefN), 0.0, 1.0, THRESHOLD_TOL)
}

/// Expected duration U_n(x) = 2 sum_{k=1}^{n-1} x^{k-1} - (n-2) x^{n-1}.
pub fn ka_duration(n: usize, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(u_form(n, x, Form2::Duration))
}

/// One-step look-ahead gap for [`ka_duration`]: stop payoff minus the payoff
/// of stopping on the next relatively best observation.
pub fn ka_duration_gap(n: usize, x: f64) -> Result<f64> {
    check(n, x)?;
    Ok(g_form(n, x, Form2::Duration))
}

/// One-step look-ahead threshold with n to go (conjectured optimal).
pub fn ka_duration_threshold(n: usize) -> Result<f64> {
    check(n, 0.0)?;
    threshold_root(|x| g_form(n, x, Form2::Duration), 0.0, 1.0, THRESHOLD_TOL)
}

pub fn ka_duration_thresholds(n: usize) -> Result<ThresholdSequence> {
    ThresholdSequence::new((1..=n).map(ka_duration_threshold).collect::<Result<_>>()?)
}

/// Backward induction over rules that stop only on relatively best
/// observations; `value()` is the optimal expected duration.
pub fn ka_finite(n: usize, grid_size: usize) -> Result<StageValueGrid> {
    grid::check_grid(n, grid_size)?;
    grid::solve(n, grid_size, Form::NoRecall, |_| 1.0, |s, u| u_form(s, 1.0 - u, Form2::Duration))
}

/// Thresholds from the conjectured equation, the coefficient-n G_n, the duration
/// one-step rule and the dynamic program, side by side.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KaComparison {
    pub n: usize,
    pub conjecture_root: f64,
    pub g_root_coef_n: f64,
    pub one_step_root: f64,
    pub dp_crossing: f64,
}

impl KaComparison {
    pub fn conjecture_matches_g(&self, tol: f64) -> bool {
        (self.conjecture_root - self.g_root_coef_n).abs() <= tol
    }

    pub fn one_step_is_optimal(&self, tol: f64) -> bool {
        (self.one_step_root - self.dp_crossing).abs() <= tol
    }
}

/// Compares the threshold candidates for every time to go 1..=n.
pub fn ka_report(n: usize, grid_size: usize) -> Result<Vec<KaComparison>> {
    let g = ka_finite(n, grid_size)?;
    (1..=n)
        .map(|s| {
            Ok(KaComparison {
                n: s,
                conjecture_root: ka_threshold(s)?,
                g_root_coef_n: ka_g_root(s)?,
                one_step_root: ka_duration_threshold(s)?,
                dp_crossing: g.crossing(s)?,
            })
        })
        .collect()
}
