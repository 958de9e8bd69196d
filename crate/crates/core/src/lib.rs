//! Optimal stopping rules, thresholds and values for duration problems.
//!
//! A duration problem asks when to select an observation so that it keeps
//! its status (relatively best, or best-or-second-best) for as long as
//! possible. The crate covers the rank-only (no-information) models, the
//! full-information models with fixed and random horizons, and ships
//! independent oracles (exhaustive enumeration, Monte Carlo) used to check
//! every analytic result.
//!
//! Modules:
//! - [`numerics`]: digamma/trigamma, bracketing root finder, adaptive quadrature.
//! - [`process`]: permutations, uniform samples, exact durations, enumeration and simulation.
//! - [`noinfo`]: embedded Markov chain, backward induction, classical and best-or-second solvers.
//! - [`fullinfo`]: full-information backward induction and asymptotic constants.
//! - [`horizon`]: bounded random and geometric horizons, best-or-second problems.

pub mod error;
pub mod fullinfo;
pub mod horizon;
pub mod noinfo;
pub mod numerics;
pub mod problem;
pub mod process;

pub use error::{Error, Result};
pub use problem::{Maturity, ProblemSpec, ThresholdPolicy};
pub use process::{
    simulate_policy, HorizonDistribution, MaturityModel, PermutationSample, SimulationReport,
    UniformSample,
};
