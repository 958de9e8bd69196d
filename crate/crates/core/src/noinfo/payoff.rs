//! Stopping payoffs phi(k, r) = E[(T(k) - k) / N | Y_k = r] for the rank-only models.

use super::kernel::kernel_mean;
use crate::error::{Error, Result};
use crate::numerics::{digamma, digamma_diff};
use crate::process::MaturityModel;

fn check_stage(n: usize, k: usize) -> Result<()> {
    if k == 0 || k > n {
        return Err(Error::Index { index: k, len: n });
    }
    Ok(())
}

/// Best-or-second payoff: (k/N^2)(1 + k - N + 2N(psi(N) - psi(k))) at r = 1,
/// k(N - k + 1)/N^2 at r = 2, zero otherwise.
pub fn phi_best2(n: usize, k: usize, r: usize) -> Result<f64> {
    check_stage(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    Ok(match r {
        1 => kf / (nf * nf) * (1.0 + kf - nf + 2.0 * nf * digamma_diff(n, k)),
        2 => kf * (nf - kf + 1.0) / (nf * nf),
        _ => 0.0,
    })
}

/// Kernel mean of [`phi_best2`] from stage k < N (the same for r = 1 and r = 2
/// once k >= 2): (2k/N^2)(k - N + N(psi(N) - psi(k))).
pub fn t_phi_best2(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Index { index: k, len: n });
    }
    let (nf, kf) = (n as f64, k as f64);
    Ok(2.0 * kf / (nf * nf) * (kf - nf + nf * digamma_diff(n, k)))
}

/// The alternative closed form (N-k)((2N-1)k+N-1)/(N^2(N-1)) + 2(k/N^2)(psi(N)-psi(k)).
///
/// Kept for comparison only: it does not agree with the kernel sum (see
/// [`t_phi_best2_kernel`]).
pub fn t_phi_best2_variant(n: usize, k: usize) -> Result<f64> {
    if k == 0 || k >= n {
        return Err(Error::Index { index: k, len: n });
    }
    let (nf, kf) = (n as f64, k as f64);
    let first = (nf - kf) * ((2.0 * nf - 1.0) * kf + nf - 1.0) / (nf * nf * (nf - 1.0));
    Ok(first + 2.0 * kf / (nf * nf) * (digamma(nf)? - digamma(kf)?))
}

/// Direct kernel sum of [`phi_best2`] from stage k.
pub fn t_phi_best2_kernel(n: usize, k: usize) -> Result<f64> {
    check_stage(n, k)?;
    kernel_mean(2, n, k, |s, l| phi_best2(n, s, l).unwrap_or(0.0))
}

/// Payoff of stopping at stage k with relative rank r under a no-recall
/// model, or `None` when (k, r) is not a stopping state of the model.
pub fn noinfo_payoff(model: MaturityModel, n: usize, k: usize, r: usize) -> Result<Option<f64>> {
    check_stage(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    Ok(match (model, r) {
        (MaturityModel::BestNoRecall, 1) => Some(kf / nf * digamma_diff(n + 1, k)),
        (MaturityModel::BestRequireOverallBest, 1) => Some(kf * (nf + 1.0 - kf) / (nf * nf)),
        (MaturityModel::BestOrSecondNoRecall, 1 | 2) => Some(phi_best2(n, k, r)?),
        (MaturityModel::BestOrSecondStopAtBestOnly, 1) => Some(phi_best2(n, k, 1)?),
        (MaturityModel::BestRecall | MaturityModel::BestRecallRequireOverallBest, _) => {
            return Err(Error::InvalidArgument(
                "recall models are solved as fixed-stage rules; use recall_payoff".into(),
            ))
        }
        _ => None,
    })
}

/// Payoff of selecting the best item so far at stage k under a recall model.
pub fn recall_payoff(model: MaturityModel, n: usize, k: usize) -> Result<f64> {
    check_stage(n, k)?;
    let (nf, kf) = (n as f64, k as f64);
    match model {
        MaturityModel::BestRecall => Ok(kf / nf * digamma_diff(n + 1, k)),
        MaturityModel::BestRecallRequireOverallBest => Ok(kf * (nf + 1.0 - kf) / (nf * nf)),
        _ => Err(Error::InvalidArgument(format!("{model:?} is not a recall model"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::maturity_pmf_best2;

    #[test]
    fn boundary_values() {
        for n in [2usize, 7, 40] {
            let inv = 1.0 / n as f64;
            assert!((phi_best2(n, n, 1).unwrap() - inv).abs() < 1e-15);
            assert!((phi_best2(n, n, 2).unwrap() - inv).abs() < 1e-15);
            assert_eq!(phi_best2(n, n, 3).unwrap(), 0.0);
        }
    }

    #[test]
    fn phi_is_pmf_expectation() {
        for (n, k) in [(5usize, 3usize), (9, 1), (9, 4), (30, 12)] {
            for r in 1..=2 {
                if k == 1 && r == 2 {
                    continue;
                }
                let pmf = maturity_pmf_best2(n, k, r).unwrap();
                let mean: f64 = pmf.iter().enumerate().map(|(j, p)| (j + 1) as f64 * p).sum();
                let phi = phi_best2(n, k, r).unwrap();
                assert!((mean / n as f64 - phi).abs() < 1e-13, "n={n} k={k} r={r}");
            }
        }
    }

    #[test]
    fn t_phi_matches_kernel_sum() {
        for n in [3usize, 10, 57, 300] {
            for k in 1..n {
                let closed = t_phi_best2(n, k).unwrap();
                let direct = t_phi_best2_kernel(n, k).unwrap();
                assert!((closed - direct).abs() < 1e-12, "n={n} k={k}: {closed} vs {direct}");
            }
        }
        let n = 10;
        let last = t_phi_best2_kernel(n, n - 1).unwrap();
        assert!((last - 2.0 / (n * n) as f64).abs() < 1e-15);
        assert!(t_phi_best2(n, n - 1).unwrap() > 0.0);
    }

    #[test]
    fn alternative_form_disagrees() {
        let variant = t_phi_best2_variant(10, 5).unwrap();
        let direct = t_phi_best2_kernel(10, 5).unwrap();
        assert!((variant - direct).abs() > 0.1);
    }

    #[test]
    fn dominance_and_unimodality() {
        for n in 1..=500usize {
            for k in 1..=n {
                assert!(phi_best2(n, k, 1).unwrap() >= phi_best2(n, k, 2).unwrap() - 1e-15);
            }
            for k in 1..n.saturating_sub(1) {
                let d0 = phi_best2(n, k + 1, 1).unwrap() - phi_best2(n, k, 1).unwrap();
                let d1 = phi_best2(n, k + 2, 1).unwrap() - phi_best2(n, k + 1, 1).unwrap();
                assert!(d1 < d0 + 1e-15, "n={n} k={k}");
            }
        }
    }

    #[test]
    fn model_payoffs() {
        let n = 6;
        let best = noinfo_payoff(MaturityModel::BestNoRecall, n, 2, 1).unwrap().unwrap();
        let direct: f64 = (2..=n).map(|j| 2.0 / j as f64).sum::<f64>() / n as f64;
        assert!((best - direct).abs() < 1e-15);
        assert_eq!(noinfo_payoff(MaturityModel::BestNoRecall, n, 2, 2).unwrap(), None);
        assert_eq!(noinfo_payoff(MaturityModel::BestOrSecondStopAtBestOnly, n, 3, 2).unwrap(), None);
        assert!(noinfo_payoff(MaturityModel::BestRecall, n, 2, 1).is_err());
        assert!(recall_payoff(MaturityModel::BestNoRecall, n, 2).is_err());
    }
}
