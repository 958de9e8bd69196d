//! Random-horizon duration problems: bounded priors, the geometric horizon,
//! and the best-or-second variants.

mod best2;
mod geometric;
mod ka;
mod prior;

pub use best2::{
    alpha_invariant, best2_full_rule_stops, best2_payoffs, best2_reduction, ka_geometric,
    ka_geometric_continuation, ka_geometric_payoff, mu_star, Best2Payoffs, Best2Reduction,
    KaGeometric, TransformedState,
};
pub use geometric::{
    geometric_alt_maturity, geometric_alt_maturity_payoff, geometric_stop_payoff,
    geometric_unbounded, GeometricSolution,
};
pub use ka::{
    ka_conjecture_lhs, ka_duration, ka_duration_gap, ka_duration_threshold,
    ka_duration_thresholds, ka_finite, ka_g, ka_g_root, ka_report, ka_threshold, ka_u,
    KaComparison,
};
pub use prior::{
    rh_continue_payoff, rh_stop_payoff, rh_stop_payoff_unnormalized, rh_thresholds, rh_value,
    PriorTail,
};
