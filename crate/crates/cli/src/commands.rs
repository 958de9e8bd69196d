//! One function per subcommand; each returns the report to print.

use clap::ValueEnum;

use stopdur_core::fullinfo::*;
use stopdur_core::horizon::*;
use stopdur_core::noinfo::*;
use stopdur_core::{simulate_policy, Maturity, MaturityModel, ProblemSpec, Result, ThresholdPolicy};

use crate::output::Report;

pub fn noinfo_bc(n: usize, recall: bool, overall_best: bool) -> Result<Report> {
    let sol = if overall_best {
        bc_duration_choice_of_best(n, recall)?
    } else {
        classical_bc_duration(n, recall)?
    };
    let mut r = Report::new("noinfo-bc")
        .param("n", n)
        .param("recall", recall)
        .param("overall_best", overall_best)
        .result("threshold", sol.threshold)
        .result("value", sol.value);
    if !recall && !overall_best {
        r.push("best_choice_threshold", bcp_threshold(n)?);
    }
    Ok(r)
}

pub fn noinfo_best2(n: usize) -> Result<Report> {
    let s = solve_best2(n)?;
    Ok(Report::new("noinfo-best2")
        .param("n", n)
        .result("k1", s.k1)
        .result("k2", s.k2)
        .result("value", s.value))
}

pub fn noinfo_discount(beta: f64) -> Result<Report> {
    let s = solve_discounted(beta)?;
    Ok(Report::new("noinfo-discount")
        .param("beta", beta)
        .result("threshold", s.threshold)
        .result("value", s.value))
}

fn grid_report(command: &'static str, n: usize, grid: usize, th: ThresholdSequence, g: StageValueGrid) -> Report {
    Report::new(command)
        .param("n", n)
        .param("grid", grid)
        .result("value", g.value())
        .result("value_per_n", g.value() / n as f64)
        .result("thresholds", th.as_slice())
        .result("dp_crossings", g.crossings())
}

pub fn fidp(n: usize, grid: usize, recall: bool) -> Result<Report> {
    Ok(if recall {
        grid_report("fidp-recall", n, grid, fidp_recall_thresholds(n)?, fidp_recall_value(n, grid)?)
    } else {
        grid_report("fidp", n, grid, fidp_thresholds(n)?, fidp_value(n, grid)?)
    })
}

pub fn bcdp(n: usize, grid: usize, recall: bool) -> Result<Report> {
    let r = if recall {
        grid_report("bcdp", n, grid, bcdp_recall_thresholds(n)?, bcdp_recall_value(n, grid)?)
    } else {
        grid_report("bcdp", n, grid, bcdp_thresholds(n)?, bcdp_value(n, grid)?)
    };
    Ok(r.param("recall", recall))
}

fn prior_results(mut r: Report, prior: &PriorTail, grid: usize) -> Result<Report> {
    let g = rh_value(prior, grid)?;
    // thresholds by stage k = 1..=n
    let per_stage: Vec<f64> = rh_thresholds(prior)?.as_slice().iter().rev().cloned().collect();
    r.push("value", g.value());
    r.push("thresholds", per_stage);
    Ok(r)
}

pub fn rh_prior(prior: &[f64], grid: usize) -> Result<Report> {
    let tail = PriorTail::from_prior(prior)?;
    let r = Report::new("rh-prior").param("prior", prior.to_vec()).param("grid", grid);
    prior_results(r, &tail, grid)
}

pub fn rh_geometric(p: f64, n: Option<usize>, grid: usize) -> Result<Report> {
    let limit = geometric_unbounded(p)?;
    let mut r = Report::new("rh-geometric").param("p", p).param("grid", grid);
    if let Some(n) = n {
        r = r.param("n", n);
        r = prior_results(r, &PriorTail::truncated_geometric(p, n)?, grid)?;
    }
    let alt = geometric_alt_maturity(p)?;
    Ok(r.result("limit_x0", limit.x0)
        .result("limit_value", limit.value)
        .result("limit_stop_everywhere", limit.stop_everywhere)
        .result("limit_value_last_step_excluded", alt.value))
}

pub fn ka(n: usize, grid: usize) -> Result<Report> {
    let rows = ka_report(n, grid)?;
    let g = ka_finite(n, grid)?;
    let col = |f: fn(&KaComparison) -> f64| rows.iter().map(f).collect::<Vec<f64>>();
    Ok(Report::new("ka")
        .param("n", n)
        .param("grid", grid)
        .result("rule", "1-SLA (conjectured optimal)")
        .result("value", g.value())
        .result("value_per_n", g.value() / n as f64)
        .result("thresholds", col(|r| r.one_step_root))
        .result("dp_crossings", col(|r| r.dp_crossing))
        .result("conjecture_roots", col(|r| r.conjecture_root))
        .result("g_roots_coef_n", col(|r| r.g_root_coef_n)))
}

pub fn ka_geometric_cmd(p: f64) -> Result<Report> {
    let k = ka_geometric(p)?;
    Ok(Report::new("ka-geometric")
        .param("p", p)
        .result("mu_star", k.mu_star)
        .result("threshold", k.threshold)
        .result("value", k.value))
}

pub fn best2_geometric(p: f64, lattice: usize, samples: Option<usize>, seed: u64) -> Result<Report> {
    let red = best2_reduction(p, lattice)?;
    let mut r = Report::new("best2-geometric")
        .param("p", p)
        .param("lattice", lattice)
        .result("threshold", red.threshold)
        .result("ka_threshold", red.ka_threshold)
        .result("alpha_invariant", red.alpha_invariant)
        .result("rows_depending_on_second", red.rows_depending_on_y)
        .result("second_stop_points", red.second_stop_points)
        .result("grid_points", red.grid_points)
        .result("depends_only_on_largest", red.depends_only_on_largest());
    if let Some(samples) = samples {
        r = r.param("samples", samples).param("seed", seed);
        let (spec, pol, _) = SimModel::Best2Full.setup(0, p, 0.0, 0)?;
        let full = simulate_policy(&spec, &pol, samples, seed)?;
        let (spec, pol, exact) = SimModel::KaGeometric.setup(0, p, 0.0, 0)?;
        let reduced = simulate_policy(&spec, &pol, samples, seed)?;
        r.push("full_rule_mean", full.mean);
        r.push("full_rule_std_error", full.std_error);
        r.push("reduced_rule_mean", reduced.mean);
        r.push("reduced_rule_std_error", reduced.std_error);
        r.push("reduced_rule_exact", exact);
    }
    Ok(r)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SimModel {
    NoinfoBc,
    NoinfoBcRecall,
    NoinfoCob,
    NoinfoCobRecall,
    NoinfoBest2,
    NoinfoBest2BestOnly,
    NoinfoDiscount,
    Fidp,
    FidpRecall,
    Bcdp,
    BcdpRecall,
    Ka,
    RhGeometric,
    Geometric,
    GeometricAlt,
    KaGeometric,
    Best2Full,
}

impl SimModel {
    /// Problem, policy and reference value (NaN when there is none).
    pub fn setup(self, n: usize, p: f64, beta: f64, grid: usize) -> Result<(ProblemSpec, ThresholdPolicy, f64)> {
        use MaturityModel as M;
        let nf = n as f64;
        let first = ThresholdPolicy::FirstCandidateFrom;
        Ok(match self {
            SimModel::NoinfoBc | SimModel::NoinfoBcRecall => {
                let recall = self == SimModel::NoinfoBcRecall;
                let s = classical_bc_duration(n, recall)?;
                let m = if recall { M::BestRecall } else { M::BestNoRecall };
                (ProblemSpec::no_info(m, n), first(s.threshold), s.value)
            }
            SimModel::NoinfoCob | SimModel::NoinfoCobRecall => {
                let recall = self == SimModel::NoinfoCobRecall;
                let s = bc_duration_choice_of_best(n, recall)?;
                let m = if recall {
                    M::BestRecallRequireOverallBest
                } else {
                    M::BestRequireOverallBest
                };
                (ProblemSpec::no_info(m, n), first(s.threshold), s.value)
            }
            SimModel::NoinfoBest2 => {
                let s = solve_best2(n)?;
                let pol = ThresholdPolicy::TwoThresholds {
                    best: s.k1,
                    second: s.k2,
                };
                (ProblemSpec::no_info(M::BestOrSecondNoRecall, n), pol, s.value)
            }
            SimModel::NoinfoBest2BestOnly => {
                let t = NoInfoValueTable::for_model(M::BestOrSecondStopAtBestOnly, n)?;
                let k = t.first_stop_stage(1).unwrap_or(n);
                (ProblemSpec::no_info(M::BestOrSecondStopAtBestOnly, n), first(k), t.value())
            }
            SimModel::NoinfoDiscount => {
                let s = solve_discounted(beta)?;
                (ProblemSpec::Discounted { beta }, first(s.threshold), s.value)
            }
            SimModel::Fidp => (
                ProblemSpec::full_info(M::BestNoRecall, n),
                fidp_thresholds(n)?.to_policy(),
                fidp_value(n, grid)?.value() / nf,
            ),
            SimModel::FidpRecall => (
                ProblemSpec::full_info(M::BestRecall, n),
                fidp_recall_thresholds(n)?.to_policy(),
                fidp_recall_value(n, grid)?.value() / nf,
            ),
            SimModel::Bcdp => (
                ProblemSpec::full_info(M::BestRequireOverallBest, n),
                bcdp_thresholds(n)?.to_policy(),
                bcdp_value(n, grid)?.value() / nf,
            ),
            SimModel::BcdpRecall => (
                ProblemSpec::full_info(M::BestRecallRequireOverallBest, n),
                bcdp_recall_thresholds(n)?.to_policy(),
                bcdp_recall_value(n, grid)?.value() / nf,
            ),
            SimModel::Ka => (
                ProblemSpec::full_info(M::BestOrSecondStopAtBestOnly, n),
                ka_duration_thresholds(n)?.to_policy(),
                ka_finite(n, grid)?.value() / nf,
            ),
            SimModel::RhGeometric => {
                let prior = PriorTail::truncated_geometric(p, n)?;
                let per: Vec<f64> = rh_thresholds(&prior)?.as_slice().iter().rev().cloned().collect();
                let spec = ProblemSpec::FullInfo {
                    model: M::BestNoRecall,
                    horizon: prior.to_horizon(),
                    maturity: Maturity::Standard,
                };
                (spec, ThresholdPolicy::PerStage(per), rh_value(&prior, grid)?.value())
            }
            SimModel::Geometric => {
                let g = geometric_unbounded(p)?;
                (
                    ProblemSpec::geometric(M::BestNoRecall, p, Maturity::Standard),
                    ThresholdPolicy::Constant(g.x0),
                    g.value,
                )
            }
            SimModel::GeometricAlt => {
                let g = geometric_alt_maturity(p)?;
                (
                    ProblemSpec::geometric(M::BestNoRecall, p, Maturity::ExcludeHorizonStep),
                    ThresholdPolicy::Constant(g.x0),
                    g.value,
                )
            }
            SimModel::KaGeometric => {
                let k = ka_geometric(p)?;
                (
                    ProblemSpec::geometric(M::BestOrSecondStopAtBestOnly, p, Maturity::ExcludeHorizonStep),
                    ThresholdPolicy::Constant(k.threshold),
                    k.value,
                )
            }
            SimModel::Best2Full => (
                ProblemSpec::geometric(M::BestOrSecondNoRecall, p, Maturity::ExcludeHorizonStep),
                ThresholdPolicy::Best2OneStep,
                f64::NAN,
            ),
        })
    }

    fn uses_n(self) -> bool {
        !matches!(
            self,
            SimModel::NoinfoDiscount
                | SimModel::Geometric
                | SimModel::GeometricAlt
                | SimModel::KaGeometric
                | SimModel::Best2Full
        )
    }

    fn uses_p(self) -> bool {
        matches!(
            self,
            SimModel::RhGeometric
                | SimModel::Geometric
                | SimModel::GeometricAlt
                | SimModel::KaGeometric
                | SimModel::Best2Full
        )
    }
}

pub struct SimArgs {
    pub model: SimModel,
    pub n: usize,
    pub p: f64,
    pub beta: f64,
    pub samples: usize,
    pub seed: u64,
    pub grid: usize,
}

pub fn simulate(a: &SimArgs) -> Result<Report> {
    let (spec, pol, exact) = a.model.setup(a.n, a.p, a.beta, a.grid)?;
    let rep = simulate_policy(&spec, &pol, a.samples, a.seed)?;
    let name = a.model.to_possible_value().expect("named variant");
    let mut r = Report::new("simulate").param("model", name.get_name());
    if a.model.uses_n() {
        r = r.param("n", a.n);
    }
    if a.model.uses_p() {
        r = r.param("p", a.p);
    }
    if a.model == SimModel::NoinfoDiscount {
        r = r.param("beta", a.beta);
    }
    r = r
        .param("samples", a.samples)
        .param("seed", a.seed)
        .result("mean", rep.mean)
        .result("std_error", rep.std_error)
        .result("samples", rep.samples);
    if exact.is_finite() {
        r.push("reference_value", exact);
        r.push("z_score", rep.z_score(exact));
    }
    Ok(r)
}

pub fn constants() -> Result<Report> {
    let e2 = (-2.0f64).exp();
    let mu = mu_star()?;
    let rows: Vec<(&str, f64, f64, f64)> = vec![
        ("classical_value_limit", classical_bc_duration(10_000, false)?.value, 2.0 * e2, 5e-3),
        ("overall_best_fraction", choice_of_best_limit_fraction()?, 0.20388, 1e-4),
        ("overall_best_recall_value", bc_duration_choice_of_best(10_000, true)?.value, 0.25, 1e-3),
        ("full_info_z", asymptotic_z()?, 2.1198, 1e-2),
        ("full_info_limit_constant", fidp_limit_constant()?, 0.435171, 1e-3),
        ("full_info_recall_asymptote", recall_asymptote()?, 1.345, 1e-2),
        ("overall_best_c_star", bcdp_c_star()?, 1.2564, 1e-3),
        ("overall_best_limit_value", bcdp_limit_value()?, 0.31096, 1e-4),
        ("overall_best_recall_limit_value", bcdp_recall_limit_value()?, 0.33536, 1e-4),
        ("mu_star", mu, 3.3145, 1e-3),
        ("inverse_mu_star", 1.0 / mu, 0.3017046, 1e-5),
    ];
    Ok(Report::new("constants")
        .result("name", rows.iter().map(|r| r.0).collect::<Vec<_>>())
        .result("computed", rows.iter().map(|r| r.1).collect::<Vec<_>>())
        .result("reference", rows.iter().map(|r| r.2).collect::<Vec<_>>())
        .result("tolerance", rows.iter().map(|r| r.3).collect::<Vec<_>>())
        .result("agrees", rows.iter().map(|r| (r.1 - r.2).abs() <= r.3).collect::<Vec<_>>()))
}
