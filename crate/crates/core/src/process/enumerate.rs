use super::{duration_no_info, noinfo_policy_payoff, MaturityModel, PermutationSample};
use crate::error::{Error, Result};
use crate::problem::{ProblemSpec, ThresholdPolicy};

/// Largest N accepted by the exhaustive oracles.
pub const MAX_ENUMERATION_N: usize = 7;

fn check_n(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION_N {
        return Err(Error::InvalidArgument(format!(
            "enumeration supports 1 <= n <= {MAX_ENUMERATION_N}, got {n}"
        )));
    }
    Ok(())
}

/// All permutations of 1..=n in lexicographic order.
pub fn permutations(n: usize) -> impl Iterator<Item = PermutationSample> {
    let mut next: Option<Vec<usize>> = Some((1..=n).collect());
    std::iter::from_fn(move || {
        let cur = next.take()?;
        let mut p = cur.clone();
        if let Some(i) = (1..p.len()).rev().find(|&i| p[i - 1] < p[i]) {
            let j = (i..p.len()).rev().find(|&j| p[j] > p[i - 1]).unwrap();
            p.swap(i - 1, j);
            p[i..].reverse();
            next = Some(p);
        }
        Some(PermutationSample::new(cur).expect("generated permutation"))
    })
}

/// Absolute ranks from a full relative-rank sequence.
fn from_relative(y: &[usize]) -> PermutationSample {
    let n = y.len();
    let mut pool: Vec<usize> = (1..=n).collect();
    let mut x = vec![0; n];
    for k in (0..n).rev() {
        x[k] = pool.remove(y[k] - 1);
    }
    PermutationSample::new(x).expect("valid relative ranks")
}

fn can_stop(model: MaturityModel, y: usize) -> bool {
    model.recall() || y <= model.stop_ranks()
}

struct Node {
    opt: f64,
    // sum over leaves below of the payoff of stopping at stage t (index t - 1)
    stop_sums: Vec<f64>,
    leaves: usize,
}

fn explore(model: MaturityModel, n: usize, prefix: &mut Vec<usize>) -> Result<Node> {
    let k = prefix.len();
    let (cont, stop_sums, leaves) = if k == n {
        let perm = from_relative(prefix);
        let mut sums = vec![0.0; n];
        for t in 1..=n {
            if can_stop(model, prefix[t - 1]) {
                sums[t - 1] = duration_no_info(&perm, t, model)? as f64 / n as f64;
            }
        }
        (0.0, sums, 1)
    } else {
        let mut sums = vec![0.0; n];
        let mut leaves = 0;
        let mut cont = 0.0;
        for y in 1..=k + 1 {
            prefix.push(y);
            let child = explore(model, n, prefix)?;
            prefix.pop();
            cont += child.opt;
            leaves += child.leaves;
            for (s, c) in sums.iter_mut().zip(&child.stop_sums) {
                *s += c;
            }
        }
        (cont / (k + 1) as f64, sums, leaves)
    };
    let opt = if k >= 1 && can_stop(model, prefix[k - 1]) {
        cont.max(stop_sums[k - 1] / leaves as f64)
    } else {
        cont
    };
    Ok(Node {
        opt,
        stop_sums,
        leaves,
    })
}

/// Optimal expected payoff (duration / n) over all stopping rules, by
/// exhaustive dynamic programming over relative-rank histories.
///
/// Payoffs of every history are taken from direct duration scans of the
/// corresponding permutations, so no transition law is assumed.
pub fn exhaustive_optimum(model: MaturityModel, n: usize) -> Result<f64> {
    check_n(n)?;
    Ok(explore(model, n, &mut Vec::with_capacity(n))?.opt)
}

/// Exact expected payoff of `policy` averaged over all n! permutations.
pub fn enumerate_policy_value(spec: &ProblemSpec, policy: &ThresholdPolicy) -> Result<f64> {
    let ProblemSpec::NoInfo { model, n } = spec else {
        return Err(Error::InvalidArgument("enumeration needs a no-information problem".into()));
    };
    check_n(*n)?;
    policy.validate_for(spec)?;
    let mut total = 0.0;
    let mut count = 0usize;
    for perm in permutations(*n) {
        total += noinfo_policy_payoff(*model, policy, &perm)?;
        count += 1;
    }
    Ok(total / count as f64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::process::relative_ranks;

    #[test]
    fn permutation_count_and_order() {
        let all: Vec<_> = permutations(3).map(|p| p.ranks().to_vec()).collect();
        assert_eq!(all.len(), 6);
        assert_eq!(all[0], vec![1, 2, 3]);
        assert_eq!(all[5], vec![3, 2, 1]);
        assert_eq!(permutations(5).count(), 120);
    }

    #[test]
    fn relative_rank_round_trip() {
        for p in permutations(5) {
            assert_eq!(from_relative(&relative_ranks(&p)), p);
        }
    }

    #[test]
    fn two_items() {
        // stop at item 1: duration 2 w.p. 1/2, else 1
        let v = exhaustive_optimum(MaturityModel::BestNoRecall, 2).unwrap();
        assert!((v - 0.75).abs() < 1e-15);
        let spec = ProblemSpec::no_info(MaturityModel::BestNoRecall, 2);
        let p = enumerate_policy_value(&spec, &ThresholdPolicy::FirstCandidateFrom(1)).unwrap();
        assert!((p - 0.75).abs() < 1e-15);
    }

    #[test]
    fn optimum_dominates_threshold_rules() {
        for model in [MaturityModel::BestNoRecall, MaturityModel::BestRequireOverallBest] {
            let n = 6;
            let opt = exhaustive_optimum(model, n).unwrap();
            let spec = ProblemSpec::no_info(model, n);
            for k in 1..=n {
                let v = enumerate_policy_value(&spec, &ThresholdPolicy::FirstCandidateFrom(k)).unwrap();
                assert!(v <= opt + 1e-12);
            }
        }
    }

    #[test]
    fn size_limit() {
        assert!(exhaustive_optimum(MaturityModel::BestNoRecall, 8).is_err());
        assert!(exhaustive_optimum(MaturityModel::BestNoRecall, 0).is_err());
    }
}
