use super::{MaturityModel, PermutationSample, UniformSample};
use crate::error::{Error, Result};

/// What happened to a selection on a realized path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Outcome {
    /// T - stop, with T = horizon + 1 when status survives.
    pub duration: usize,
    /// Status held through the last observation.
    pub survived: bool,
    /// The selected item is the overall best (only meaningful for status-1 models).
    pub overall_best: bool,
}

fn scan<T: Copy>(
    v: &[T],
    stop: usize,
    model: MaturityModel,
    horizon: usize,
    better: impl Fn(T, T) -> bool,
) -> Result<Outcome> {
    if horizon > v.len() {
        return Err(Error::Index {
            index: horizon,
            len: v.len(),
        });
    }
    if stop == 0 || stop > horizon {
        return Err(Error::Index {
            index: stop,
            len: horizon,
        });
    }
    let item = if model.recall() {
        (1..stop).fold(0, |b, i| if better(v[i], v[b]) { i } else { b })
    } else {
        stop - 1
    };
    let ahead = v[..stop].iter().filter(|&&x| better(x, v[item])).count();
    if !model.recall() && ahead >= model.stop_ranks() {
        return Err(Error::NotACandidate {
            index: stop,
            model: format!("{model:?}"),
        });
    }
    let status = model.status_ranks();
    let mut beaten = ahead;
    let mut t = horizon + 1;
    for (j, &x) in v.iter().enumerate().take(horizon).skip(stop) {
        if better(x, v[item]) {
            beaten += 1;
            if beaten >= status {
                t = j + 1;
                break;
            }
        }
    }
    let survived = t == horizon + 1;
    Ok(Outcome {
        duration: t - stop,
        survived,
        overall_best: beaten == 0,
    })
}

fn payable(model: MaturityModel, o: &Outcome) -> usize {
    if model.requires_overall_best() && !o.overall_best {
        0
    } else {
        o.duration
    }
}

/// Duration T(stop) - stop of the item selected at `stop` (1-based).
///
/// Recall models select the best item among the first `stop`. Models that
/// require the overall best return 0 unless the selection is the best of all.
pub fn duration_no_info(
    sample: &PermutationSample,
    stop: usize,
    model: MaturityModel,
) -> Result<usize> {
    let o = scan(sample.ranks(), stop, model, sample.len(), |a, b| a < b)?;
    Ok(payable(model, &o))
}

/// Full outcome of a full-information selection within the first `horizon` values.
pub fn full_info_outcome(
    sample: &UniformSample,
    stop: usize,
    model: MaturityModel,
    horizon: usize,
) -> Result<Outcome> {
    value_outcome(sample.values(), stop, model, horizon)
}

pub(super) fn value_outcome(
    values: &[f64],
    stop: usize,
    model: MaturityModel,
    horizon: usize,
) -> Result<Outcome> {
    scan(values, stop, model, horizon, |a, b| a > b)
}

/// Full-information duration: 1 plus the number of consecutive later
/// observations (up to `horizon`) that do not end the selection's status.
pub fn duration_full_info(
    sample: &UniformSample,
    stop: usize,
    model: MaturityModel,
    horizon: usize,
) -> Result<usize> {
    let o = full_info_outcome(sample, stop, model, horizon)?;
    Ok(payable(model, &o))
}
