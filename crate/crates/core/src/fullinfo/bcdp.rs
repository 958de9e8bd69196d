//! Full-information duration problem paid only on the overall best.
//!
//! Stopping on the current maximum x with s observations to go (counting the
//! present one) pays w(x, s) = s x^{s-1}.

use super::fidp::{stages_u32, ThresholdSequence};
use super::grid::{self, Form, StageValueGrid};
use crate::error::{Error, Result};
use crate::numerics::{pow_u, threshold_root};

const THRESHOLD_TOL: f64 = 1e-15;

/// Stop payoff s x^{s-1}.
pub fn bcdp_stop_payoff(x: f64, s: usize) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("x = {x} outside [0, 1]")));
    }
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    Ok(s as f64 * pow_u(1.0 - x, (s - 1) as f64))
}

fn check_s(s: usize) -> Result<()> {
    if s == 0 {
        return Err(Error::InvalidArgument("s must be at least 1".into()));
    }
    stages_u32(s).map(|_| ())
}

/// sum_{j=1}^{m} x^{j-1}
fn partial_geometric(x: f64, m: usize) -> f64 {
    (0..m).fold(0.0, |acc, _| acc * x + 1.0)
}

/// Optimal threshold with s observations to go: the root of
/// (2s - 1) x^{s-1} = sum_{j=1}^{s-1} x^{j-1}, and x_1 = 0.
pub fn bcdp_threshold(s: usize) -> Result<f64> {
    check_s(s)?;
    if s == 1 {
        return Ok(0.0);
    }
    let k = (2 * s - 1) as f64;
    threshold_root(
        |x| k * x.powi(s as i32 - 1) - partial_geometric(x, s - 1),
        0.0,
        1.0,
        THRESHOLD_TOL,
    )
}

/// Root of sum_{j=1}^{s-1} x^{j-1} = s x^{s-1}, kept for comparison with
/// [`bcdp_threshold`]; it does not match the dynamic program (s = 2 gives
/// 1/2 where the optimum is 1/3).
pub fn bcdp_threshold_variant(s: usize) -> Result<f64> {
    check_s(s)?;
    if s == 1 {
        return Ok(0.0);
    }
    threshold_root(
        |x| s as f64 * x.powi(s as i32 - 1) - partial_geometric(x, s - 1),
        0.0,
        1.0,
        THRESHOLD_TOL,
    )
}

/// Threshold with recall: 2 x^{s-1} = 1, i.e. x_s = 2^{-1/(s-1)}.
pub fn bcdp_recall_threshold(s: usize) -> Result<f64> {
    check_s(s)?;
    if s == 1 {
        return Ok(0.0);
    }
    Ok((-std::f64::consts::LN_2 / (s - 1) as f64).exp())
}

pub fn bcdp_thresholds(n: usize) -> Result<ThresholdSequence> {
    ThresholdSequence::new((1..=n).map(bcdp_threshold).collect::<Result<_>>()?)
}

pub fn bcdp_recall_thresholds(n: usize) -> Result<ThresholdSequence> {
    ThresholdSequence::new((1..=n).map(bcdp_recall_threshold).collect::<Result<_>>()?)
}

fn stop(s: usize, u: f64) -> f64 {
    s as f64 * pow_u(u, (s - 1) as f64)
}

/// Backward induction without recall; `value()` is the expected payoff with N observations.
pub fn bcdp_value(n: usize, grid_size: usize) -> Result<StageValueGrid> {
    grid::check_grid(n, grid_size)?;
    grid::solve(n, grid_size, Form::NoRecall, |_| 1.0, stop)
}

/// Backward induction with recall.
pub fn bcdp_recall_value(n: usize, grid_size: usize) -> Result<StageValueGrid> {
    grid::check_grid(n, grid_size)?;
    grid::solve(n, grid_size, Form::Recall, |_| 1.0, stop)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_thresholds() {
        assert_eq!(bcdp_threshold(1).unwrap(), 0.0);
        assert!((bcdp_threshold(2).unwrap() - 1.0 / 3.0).abs() < 1e-14);
        // 5x^2 = 1 + x
        assert!((bcdp_threshold(3).unwrap() - (1.0 + 21f64.sqrt()) / 10.0).abs() < 1e-14);
        assert!((bcdp_threshold_variant(2).unwrap() - 0.5).abs() < 1e-14);
        assert!((bcdp_threshold_variant(3).unwrap() - (1.0 + 13f64.sqrt()) / 6.0).abs() < 1e-14);
        assert!((bcdp_recall_threshold(2).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn strictly_increasing() {
        let mut prev = bcdp_threshold(2).unwrap();
        for s in 3..=100 {
            let x = bcdp_threshold(s).unwrap();
            assert!(x > prev, "s={s}");
            prev = x;
        }
        assert!(prev > 0.98);
    }

    #[test]
    fn crossing_matches_threshold() {
        let n = 50;
        let g = bcdp_value(n, 512).unwrap();
        let r = bcdp_recall_value(n, 512).unwrap();
        for s in 1..=n {
            let x = bcdp_threshold(s).unwrap();
            assert!((g.crossing(s).unwrap() - x).abs() <= g.cell_width_at(x) + 1e-12, "s={s}");
            let x = bcdp_recall_threshold(s).unwrap();
            assert!((r.crossing(s).unwrap() - x).abs() <= r.cell_width_at(x) + 1e-12, "recall s={s}");
        }
    }

    #[test]
    fn two_stage_values() {
        // no recall: int_0^{1/3} (1 - y) dy + int_{1/3}^1 2y dy
        let g = bcdp_value(2, 128).unwrap();
        let expect = (1.0 / 3.0 - 1.0 / 18.0) + (1.0 - 1.0 / 9.0);
        assert!((g.value() - expect).abs() < 1e-12);
        // recall: int max{2y, 1} = 1/2 + 3/4
        let r = bcdp_recall_value(2, 128).unwrap();
        assert!((r.value() - 1.25).abs() < 1e-12);
    }
}
