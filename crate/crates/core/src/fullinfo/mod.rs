//! Full-information duration problems: fixed-horizon backward induction,
//! threshold equations and the large-N constants.

mod asymptotics;
mod bcdp;
mod fidp;
pub(crate) mod grid;

pub use asymptotics::{
    asymptotic_z, bcdp_c_star, bcdp_limit_value, bcdp_recall_limit_value, ein,
    exp_integral_tail, fidp_limit_constant, recall_asymptote, z_equation,
};
pub use bcdp::{
    bcdp_recall_threshold, bcdp_recall_thresholds, bcdp_recall_value, bcdp_stop_payoff,
    bcdp_threshold, bcdp_threshold_variant, bcdp_thresholds, bcdp_value,
};
pub use fidp::{
    fidp_recall_threshold, fidp_recall_thresholds, fidp_recall_value, fidp_threshold,
    fidp_threshold_gap, fidp_thresholds, fidp_value, w_fidp, ThresholdSequence,
};
pub use grid::{StageValueGrid, DEFAULT_GRID, MIN_GRID};
