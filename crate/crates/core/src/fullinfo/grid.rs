//! Backward induction on a value grid for full-information problems.
//!
//! Values are stored at nodes u_i = (i/G)^3 of u = 1 - x, which packs nodes
//! near x = 1 where thresholds accumulate. Between nodes the previous stage is
//! interpolated by the local four-point Lagrange cubic. Each cell integral of
//! max{stop, continuation} is split at the crossing (Brent) and both pieces
//! use five-point Gauss-Legendre.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::numerics::{find_root, gauss_legendre5, RootBracket};

/// Smallest accepted grid size.
pub const MIN_GRID: usize = 64;

/// Default grid size used by the convenience solvers.
pub const DEFAULT_GRID: usize = 1024;

const ROOT_TOL: f64 = 1e-15;

/// Result of a grid backward induction.
///
/// `stage_values[t]` is the value with `t` observations to go at x = 0
/// (t = 0..=stages); `crossings[s - 1]` is the computed stopping threshold
/// with `s` observations to go, counting the current one.
#[derive(Debug, Clone, Serialize)]
pub struct StageValueGrid {
    stages: usize,
    u: Vec<f64>,
    values: Vec<f64>,
    stage_values: Vec<f64>,
    crossings: Vec<f64>,
    value: f64,
}

impl StageValueGrid {
    pub fn stages(&self) -> usize {
        self.stages
    }

    pub fn grid_size(&self) -> usize {
        self.u.len() - 1
    }

    /// Grid breakpoints in x, increasing from 0 to 1.
    pub fn breakpoints(&self) -> Vec<f64> {
        self.u.iter().rev().map(|u| 1.0 - u).collect()
    }

    /// Problem value (unnormalized expected duration).
    pub fn value(&self) -> f64 {
        self.value
    }

    /// Final-stage value function at x, interpolated.
    pub fn value_at(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
        }
        Ok(interpolate(&self.u, &self.values, 1.0 - x))
    }

    /// Value at x = 0 with `t` observations to go.
    pub fn stage_value(&self, t: usize) -> Result<f64> {
        self.stage_values.get(t).copied().ok_or(Error::Index {
            index: t,
            len: self.stages,
        })
    }

    /// Computed threshold with `s` observations to go (s = 1..=stages).
    pub fn crossing(&self, s: usize) -> Result<f64> {
        if s == 0 || s > self.crossings.len() {
            return Err(Error::Index {
                index: s,
                len: self.crossings.len(),
            });
        }
        Ok(self.crossings[s - 1])
    }

    pub fn crossings(&self) -> &[f64] {
        &self.crossings
    }

    /// Width (in x) of the grid cell containing x.
    pub fn cell_width_at(&self, x: f64) -> f64 {
        let u = 1.0 - x;
        let j = cell_index(&self.u, u);
        self.u[j + 1] - self.u[j]
    }
}

pub(crate) fn nodes(grid: usize) -> Vec<f64> {
    (0..=grid)
        .map(|i| {
            let t = i as f64 / grid as f64;
            t * t * t
        })
        .collect()
}

fn cell_index(u: &[f64], v: f64) -> usize {
    let g = u.len() - 1;
    match u.binary_search_by(|p| p.total_cmp(&v)) {
        Ok(i) => i.min(g - 1),
        Err(i) => i.saturating_sub(1).min(g - 1),
    }
}

/// Cubic through the four nodes around cell j (shifted at the ends).
fn lagrange(u: &[f64], f: &[f64], j: usize, v: f64) -> f64 {
    let g = u.len() - 1;
    let start = j.saturating_sub(1).min(g.saturating_sub(3));
    let idx = start..(start + 4).min(g + 1);
    let mut out = 0.0;
    for a in idx.clone() {
        let mut w = 1.0;
        for b in idx.clone() {
            if a != b {
                w *= (v - u[b]) / (u[a] - u[b]);
            }
        }
        out += w * f[a];
    }
    out
}

pub(crate) fn interpolate(u: &[f64], f: &[f64], v: f64) -> f64 {
    lagrange(u, f, cell_index(u, v), v)
}

/// Integral over cell j of max{stop(u), prev(u)}, and the u at which the
/// maximum switches from `stop` to `prev` inside the cell, if it does.
fn cell<S: Fn(f64) -> f64>(u: &[f64], prev: &[f64], j: usize, stop: &S) -> Result<(f64, Option<f64>)> {
    let (a, b) = (u[j], u[j + 1]);
    let cont = |v: f64| lagrange(u, prev, j, v);
    let h = |v: f64| stop(v) - cont(v);
    let (ha, hb) = (h(a), h(b));
    if ha >= 0.0 && hb >= 0.0 {
        return Ok((gauss_legendre5(stop, a, b), None));
    }
    if ha < 0.0 && hb < 0.0 {
        return Ok((gauss_legendre5(cont, a, b), None));
    }
    let c = find_root(h, &RootBracket::new(a, b, ROOT_TOL)?)?;
    if ha >= 0.0 {
        Ok((gauss_legendre5(stop, a, c) + gauss_legendre5(cont, c, b), Some(c)))
    } else {
        Ok((gauss_legendre5(cont, a, c) + gauss_legendre5(stop, c, b), None))
    }
}

/// Cell integrals for one stage plus the first stop-to-continue switch.
fn sweep<S>(u: &[f64], prev: &[f64], stop: &S) -> Result<(Vec<f64>, f64)>
where
    S: Fn(f64) -> f64 + Sync,
{
    let g = u.len() - 1;
    let cells: Vec<Result<(f64, Option<f64>)>> = (0..g)
        .into_par_iter()
        .with_min_len(64)
        .map(|j| cell(u, prev, j, stop))
        .collect();
    let mut ints = Vec::with_capacity(g);
    let mut switch = None;
    for c in cells {
        let (v, s) = c?;
        ints.push(v);
        if switch.is_none() {
            switch = s;
        }
    }
    // stop dominating at u = 0 but never giving way means stop everywhere
    let threshold_u = match switch {
        Some(c) => c,
        None if stop(0.0) >= prev[0] => 1.0,
        None => 0.0,
    };
    Ok((ints, 1.0 - threshold_u))
}

/// Which recursion the grid engine runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum Form {
    /// C_t(x) = rho_t [x C_{t-1}(x) + int_x^1 max{stop_t(y), C_{t-1}(y)} dy],
    /// C_0 = 0, value C_T(0). `stop_t` is the payoff of a new candidate with
    /// t observations to go counting itself.
    NoRecall,
    /// K_t(x) = x M_{t-1}(x) + int_x^1 M_{t-1}(y) dy with
    /// M_t = max{stop_{t+1}, K_t}, K_0 = 0, value int_0^1 M_{T-1}. The
    /// decision is taken on the running maximum.
    Recall,
}

pub(crate) fn check_grid(stages: usize, grid: usize) -> Result<()> {
    if stages == 0 {
        return Err(Error::InvalidArgument("need at least one stage".into()));
    }
    if grid < MIN_GRID {
        return Err(Error::InvalidArgument(format!("grid size must be at least {MIN_GRID}, got {grid}")));
    }
    Ok(())
}

/// Runs the recursion for `stages` observations. `stop(s, u)` is the stopping
/// payoff with s observations to go (counting the current one) at x = 1 - u;
/// `rho(t)` scales stage t of the no-recall form.
pub(crate) fn solve<S, R>(stages: usize, grid: usize, form: Form, rho: R, stop: S) -> Result<StageValueGrid>
where
    S: Fn(usize, f64) -> f64 + Sync,
    R: Fn(usize) -> f64,
{
    check_grid(stages, grid)?;
    let u = nodes(grid);
    let mut prev = vec![0.0; grid + 1];
    let mut stage_values = vec![0.0; stages + 1];
    let mut crossings = vec![0.0; stages];
    match form {
        Form::NoRecall => {
            for t in 1..=stages {
                let st = |v: f64| stop(t, v);
                let (ints, x_t) = sweep(&u, &prev, &st)?;
                crossings[t - 1] = x_t;
                let r = rho(t);
                let mut acc = 0.0;
                let mut next = vec![0.0; grid + 1];
                for i in 0..=grid {
                    if i > 0 {
                        acc += ints[i - 1];
                    }
                    next[i] = r * ((1.0 - u[i]) * prev[i] + acc);
                }
                prev = next;
                stage_values[t] = prev[grid];
            }
            let value = prev[grid];
            Ok(StageValueGrid {
                stages,
                u,
                values: prev,
                stage_values,
                crossings,
                value,
            })
        }
        Form::Recall => {
            // stage t holds K_t; the decision with s = t + 1 to go compares stop(s) with K_t
            let mut value = 0.0;
            for t in 0..stages {
                let s = t + 1;
                let st = |v: f64| stop(s, v);
                let (ints, x_s) = sweep(&u, &prev, &st)?;
                crossings[s - 1] = x_s;
                let total: f64 = ints.iter().sum();
                stage_values[s] = total;
                if s == stages {
                    value = total;
                    break;
                }
                let mut acc = 0.0;
                let mut next = vec![0.0; grid + 1];
                for i in 0..=grid {
                    if i > 0 {
                        acc += ints[i - 1];
                    }
                    let m = st(u[i]).max(prev[i]);
                    next[i] = (1.0 - u[i]) * m + acc;
                }
                prev = next;
            }
            Ok(StageValueGrid {
                stages,
                u,
                values: prev,
                stage_values,
                crossings,
                value,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_interpolation_is_exact_for_cubics() {
        let u = nodes(64);
        let f: Vec<f64> = u.iter().map(|v| 1.0 - 2.0 * v + 3.0 * v * v * v).collect();
        for &v in &[0.0, 1e-6, 0.3, 0.77, 1.0] {
            let got = interpolate(&u, &f, v);
            assert!((got - (1.0 - 2.0 * v + 3.0 * v * v * v)).abs() < 1e-13);
        }
    }

    #[test]
    fn one_stage_no_recall() {
        // C_1(x) = int_x^1 max{1, 0} = 1 - x
        let g = solve(1, 64, Form::NoRecall, |_| 1.0, |_, _| 1.0).unwrap();
        assert!((g.value() - 1.0).abs() < 1e-14);
        assert!((g.value_at(0.25).unwrap() - 0.75).abs() < 1e-13);
        assert_eq!(g.crossing(1).unwrap(), 0.0);
    }

    #[test]
    fn rejects_small_grid() {
        assert!(solve(3, 10, Form::NoRecall, |_| 1.0, |_, _| 1.0).is_err());
        assert!(solve(0, 64, Form::NoRecall, |_| 1.0, |_, _| 1.0).is_err());
    }
}
