//! Single-threshold duration problems: owning the relatively best item, with
//! and without recall, and with or without the overall-best requirement.

use serde::Serialize;

use super::induction::NoInfoValueTable;
use super::payoff::recall_payoff;
use crate::error::{Error, Result};
use crate::numerics::{find_root, RootBracket};
use crate::process::MaturityModel;

/// An optimal single-threshold rule and its value.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SingleThreshold {
    pub threshold: usize,
    pub value: f64,
}

fn check_n(n: usize) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!("need n >= 2, got {n}")));
    }
    Ok(())
}

fn solve_no_recall(model: MaturityModel, n: usize) -> Result<SingleThreshold> {
    let t = NoInfoValueTable::for_model(model, n)?;
    Ok(SingleThreshold {
        threshold: t.first_stop_stage(1).expect("stopping at the last stage is optimal"),
        value: t.value(),
    })
}

/// First stage maximizing a fixed-stage payoff (earliest on ties).
fn solve_fixed_stage(model: MaturityModel, n: usize) -> Result<SingleThreshold> {
    let mut best = SingleThreshold {
        threshold: 1,
        value: recall_payoff(model, n, 1)?,
    };
    for k in 2..=n {
        let v = recall_payoff(model, n, k)?;
        if v > best.value {
            best = SingleThreshold {
                threshold: k,
                value: v,
            };
        }
    }
    Ok(best)
}

/// Duration of owning the relatively best item.
///
/// Without recall: stop on the first relatively best item from the returned
/// stage. With recall: take the best item so far at the returned stage.
pub fn classical_bc_duration(n: usize, recall: bool) -> Result<SingleThreshold> {
    check_n(n)?;
    if recall {
        solve_fixed_stage(MaturityModel::BestRecall, n)
    } else {
        solve_no_recall(MaturityModel::BestNoRecall, n)
    }
}

/// Threshold of the classical best-choice problem:
/// min{r >= 1 : sum_{j=r}^{N-1} 1/j <= 1}.
pub fn bcp_threshold(n: usize) -> Result<usize> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let mut tail = 0.0;
    let mut r = n;
    // walk down while the tail sum stays within 1
    while r > 1 {
        let next = tail + 1.0 / (r - 1) as f64;
        if next > 1.0 {
            break;
        }
        tail = next;
        r -= 1;
    }
    Ok(r)
}

/// Duration of owning the relatively best item, paid only when it is the
/// overall best.
///
/// Without recall the threshold comes from backward induction; with recall
/// the best rule takes the best item so far at stage floor((N+1)/2).
pub fn bc_duration_choice_of_best(n: usize, recall: bool) -> Result<SingleThreshold> {
    check_n(n)?;
    if recall {
        solve_fixed_stage(MaturityModel::BestRecallRequireOverallBest, n)
    } else {
        solve_no_recall(MaturityModel::BestRequireOverallBest, n)
    }
}

/// Values of the threshold rules "stop on the first relative best from
/// stage r" in the overall-best duration problem, for r = 1..=N:
/// V(1) = 1/N and V(r) = ((r-1)/N^2) sum_{k=r}^N (N+1-k)/(k-1).
pub fn choice_of_best_threshold_values(n: usize) -> Vec<f64> {
    let nf = n as f64;
    let mut out = vec![0.0; n];
    let mut tail = 0.0;
    for r in (2..=n).rev() {
        tail += (nf + 1.0 - r as f64) / (r - 1) as f64;
        out[r - 1] = (r - 1) as f64 / (nf * nf) * tail;
    }
    if n >= 1 {
        out[0] = 1.0 / nf;
    }
    out
}

/// Value of "stop on the first relative best from stage r" in the classical
/// duration problem: sum_{k>=r} (r-1)/(k(k-1)) phi(k), or phi(1) at r = 1.
pub fn classical_threshold_value(n: usize, r: usize) -> Result<f64> {
    if r == 0 || r > n {
        return Err(Error::Index { index: r, len: n });
    }
    let phi = |k: usize| recall_payoff(MaturityModel::BestRecall, n, k);
    if r == 1 {
        return phi(1);
    }
    let mut acc = 0.0;
    for k in r..=n {
        acc += (r - 1) as f64 / (k * (k - 1)) as f64 * phi(k)?;
    }
    Ok(acc)
}

/// Limiting threshold fraction of the overall-best duration problem: the
/// root of -ln x - 2 + 2x = 0 in (0, 1/2).
pub fn choice_of_best_limit_fraction() -> Result<f64> {
    find_root(
        |x: f64| -x.ln() - 2.0 + 2.0 * x,
        &RootBracket::with_default_tol(1e-3, 0.5)?,
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::exhaustive_optimum;

    #[test]
    fn bcp_thresholds() {
        // classical values: N=1..10 -> 1,1,2,2,3,3,3,4,4,4
        let expect = [1, 1, 2, 2, 3, 3, 3, 4, 4, 4];
        for (i, &e) in expect.iter().enumerate() {
            assert_eq!(bcp_threshold(i + 1).unwrap(), e, "n={}", i + 1);
        }
        assert_eq!(bcp_threshold(100).unwrap(), 38);
    }

    #[test]
    fn no_recall_matches_enumeration() {
        for n in 2..=7 {
            let s = classical_bc_duration(n, false).unwrap();
            let e = exhaustive_optimum(MaturityModel::BestNoRecall, n).unwrap();
            assert!((s.value - e).abs() < 1e-12);
            let v = classical_threshold_value(n, s.threshold).unwrap();
            assert!((v - s.value).abs() < 1e-12);
        }
    }

    #[test]
    fn recall_matches_enumeration() {
        for n in 2..=7 {
            let s = classical_bc_duration(n, true).unwrap();
            let e = exhaustive_optimum(MaturityModel::BestRecall, n).unwrap();
            assert!((s.value - e).abs() < 1e-12);
            let c = bc_duration_choice_of_best(n, true).unwrap();
            let e = exhaustive_optimum(MaturityModel::BestRecallRequireOverallBest, n).unwrap();
            assert!((c.value - e).abs() < 1e-12);
        }
    }

    #[test]
    fn recall_threshold_near_bcp_threshold() {
        for n in 2..=400 {
            let k = classical_bc_duration(n, true).unwrap().threshold;
            let r = bcp_threshold(n).unwrap();
            assert!(k + 1 == r || k == r, "n={n}: K={k}, r*={r}");
        }
    }

    #[test]
    fn choice_of_best_recall_mode() {
        for n in 2..=60 {
            let c = bc_duration_choice_of_best(n, true).unwrap();
            assert_eq!(c.threshold, (n + 1) / 2);
        }
        let c = bc_duration_choice_of_best(9, true).unwrap();
        assert!((c.value - 25.0 / 81.0).abs() < 1e-15);
    }

    #[test]
    fn choice_of_best_threshold_sweep() {
        for n in 2..=80 {
            let s = bc_duration_choice_of_best(n, false).unwrap();
            let v = choice_of_best_threshold_values(n);
            let (arg, max) = v
                .iter()
                .enumerate()
                .fold((0, f64::MIN), |acc, (i, &x)| if x > acc.1 + 1e-15 { (i, x) } else { acc });
            assert!((max - s.value).abs() < 1e-12, "n={n}");
            assert!((v[s.threshold - 1] - s.value).abs() < 1e-12, "n={n} arg={}", arg + 1);
            assert!(s.threshold <= (n + 1) / 2);
        }
    }

    #[test]
    fn limit_fraction() {
        let x = choice_of_best_limit_fraction().unwrap();
        assert!((-x.ln() - 2.0 + 2.0 * x).abs() < 1e-12);
        assert!((x - 0.203_187_87).abs() < 1e-8);
        // limit value x(1 - x) against the exact sweep at large N
        let n = 10_000;
        let v = choice_of_best_threshold_values(n);
        let best = v.iter().cloned().fold(f64::MIN, f64::max);
        assert!((best - x * (1.0 - x)).abs() < 1e-4);
    }
}
