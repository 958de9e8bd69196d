use thiserror::Error;

/// Errors raised by the solvers and the simulation layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("index {index} out of range 1..={len}")]
    Index { index: usize, len: usize },

    #[error("no sign change on [{lo}, {hi}] (f(lo) = {f_lo}, f(hi) = {f_hi})")]
    NoSignChange {
        lo: f64,
        hi: f64,
        f_lo: f64,
        f_hi: f64,
    },

    #[error("root finder did not converge after {iterations} iterations")]
    NotConverged { iterations: usize },

    #[error("quadrature hit the subdivision limit ({limit}) with error estimate {error:e}")]
    SubdivisionLimit { limit: usize, error: f64 },

    #[error("stop index {index} is not a candidate under {model}")]
    NotACandidate { index: usize, model: String },

    #[error("invalid policy: {0}")]
    InvalidPolicy(String),

    #[error("sampled horizon exceeds the cap of {cap}")]
    HorizonCap { cap: usize },
}

impl Error {
    /// True for failures of the numerical machinery (as opposed to bad input).
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoSignChange { .. }
                | Error::NotConverged { .. }
                | Error::SubdivisionLimit { .. }
                | Error::HorizonCap { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
