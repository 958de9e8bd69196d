use super::PermutationSample;
use crate::error::{Error, Result};

/// Relative ranks Y_k = #{i <= k : X_i <= X_k}.
pub fn relative_ranks(sample: &PermutationSample) -> Vec<usize> {
    let x = sample.ranks();
    (0..x.len())
        .map(|k| x[..=k].iter().filter(|&&xi| xi <= x[k]).count())
        .collect()
}

/// Running rank Y_{kj} = #{i <= j : X_i <= X_k} (1-based indices).
pub fn running_rank(sample: &PermutationSample, k: usize, j: usize) -> Result<usize> {
    let x = sample.ranks();
    let n = x.len();
    if k == 0 || k > n {
        return Err(Error::Index { index: k, len: n });
    }
    if j < k || j > n {
        return Err(Error::Index { index: j, len: n });
    }
    let xk = x[k - 1];
    Ok(x[..j].iter().filter(|&&xi| xi <= xk).count())
}
