//! Rank-only (no-information) duration problems.

mod best2;
mod classical;
mod discounted;
mod induction;
mod kernel;
mod payoff;

pub use best2::{
    best2_closed_form_check, best2_value_digamma_form, solve_best2, Best2ClosedFormCheck,
    TwoThresholds,
};
pub use classical::{
    bc_duration_choice_of_best, bcp_threshold, choice_of_best_limit_fraction,
    choice_of_best_threshold_values, classical_bc_duration, classical_threshold_value,
    SingleThreshold,
};
pub use discounted::{
    discounted_stop_payoff, discounted_threshold, discounted_threshold_sides, discounted_value,
    solve_discounted, DiscountedSolution,
};
pub use induction::{backward_induction_noinfo, chain_value, NoInfoValueTable};
pub use kernel::{kernel_mean, transition_prob, EmbeddedState, Stage};
pub use payoff::{
    noinfo_payoff, phi_best2, recall_payoff, t_phi_best2, t_phi_best2_kernel, t_phi_best2_variant,
};
