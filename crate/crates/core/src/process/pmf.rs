use crate::error::{Error, Result};

/// P(T = k | Y_i = 2) for i < k <= n, where T is the first time the item loses
/// best-or-second status.
fn rank2_mass(i: usize, k: usize) -> f64 {
    let (i, k) = (i as f64, k as f64);
    2.0 * (i - 1.0) * i / ((k - 2.0) * (k - 1.0) * k)
}

/// Conditional law of the maturity T(i) of a best-or-second candidate.
///
/// Entry `j` of the result is P(T(i) = i + 1 + j | Y_i = r) for
/// `i + 1 + j` in `i+1..=n+1`. For r = 1 the mass at k <= n sums over the
/// stage s at which the first better item arrives (after which the item is
/// relatively second at s). At i = 1 the item is always relatively best, so
/// r = 2 is conditioned on a null event; the result then places all mass on
/// T = 2.
pub fn maturity_pmf_best2(n: usize, i: usize, r: usize) -> Result<Vec<f64>> {
    if i == 0 || i > n {
        return Err(Error::Index { index: i, len: n });
    }
    if r != 1 && r != 2 {
        return Err(Error::InvalidArgument(format!("rank must be 1 or 2, got {r}")));
    }
    let mut pmf = Vec::with_capacity(n + 1 - i);
    if r == 2 && i == 1 {
        pmf.push(1.0);
        pmf.resize(n + 1 - i, 0.0);
        return Ok(pmf);
    }
    let (nf, fi) = (n as f64, i as f64);
    for k in i + 1..=n {
        let mass = if r == 2 {
            rank2_mass(i, k)
        } else {
            (i + 1..k)
                .map(|s| {
                    let s_f = s as f64;
                    fi / ((s_f - 1.0) * s_f) * rank2_mass(s, k)
                })
                .sum()
        };
        pmf.push(mass);
    }
    let survive = if n == 1 {
        1.0
    } else if r == 2 {
        fi * (fi - 1.0) / (nf * (nf - 1.0))
    } else {
        fi * (2.0 * nf - fi - 1.0) / (nf * (nf - 1.0))
    };
    pmf.push(survive);
    Ok(pmf)
}
