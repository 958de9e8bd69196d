use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};

use stopdur_core::fullinfo::{bcdp_limit_value, fidp_limit_constant, fidp_thresholds, fidp_value};
use stopdur_core::horizon::{ka_finite, rh_value, PriorTail};
use stopdur_core::noinfo::{classical_bc_duration, solve_best2};
use stopdur_core::process::exhaustive_optimum;
use stopdur_core::{simulate_policy, MaturityModel, ProblemSpec};

fn noinfo(c: &mut Criterion) {
    c.bench_function("classical_bc_duration n=5000", |b| {
        b.iter(|| classical_bc_duration(black_box(5000), false).unwrap())
    });
    c.bench_function("solve_best2 n=2000", |b| b.iter(|| solve_best2(black_box(2000)).unwrap()));
    c.bench_function("exhaustive_optimum best-or-second n=7", |b| {
        b.iter(|| exhaustive_optimum(MaturityModel::BestOrSecondNoRecall, black_box(7)).unwrap())
    });
}

fn fullinfo(c: &mut Criterion) {
    let mut g = c.benchmark_group("grid");
    g.sample_size(10);
    g.bench_function("fidp_value n=100 grid=1024", |b| b.iter(|| fidp_value(black_box(100), 1024).unwrap()));
    g.bench_function("ka_finite n=100 grid=1024", |b| b.iter(|| ka_finite(black_box(100), 1024).unwrap()));
    let prior = PriorTail::truncated_geometric(0.05, 100).unwrap();
    g.bench_function("rh_value n=100 grid=1024", |b| b.iter(|| rh_value(&prior, 1024).unwrap()));
    g.finish();
    c.bench_function("fidp_thresholds n=1000", |b| b.iter(|| fidp_thresholds(black_box(1000)).unwrap()));
    c.bench_function("fidp_limit_constant", |b| b.iter(|| fidp_limit_constant().unwrap()));
    c.bench_function("bcdp_limit_value", |b| b.iter(|| bcdp_limit_value().unwrap()));
}

fn simulation(c: &mut Criterion) {
    let spec = ProblemSpec::full_info(MaturityModel::BestNoRecall, 20);
    let pol = fidp_thresholds(20).unwrap().to_policy();
    let mut g = c.benchmark_group("simulate");
    g.sample_size(10);
    g.bench_function("full-info n=20, 1e5 samples", |b| {
        b.iter(|| simulate_policy(&spec, &pol, black_box(100_000), 7).unwrap())
    });
    g.finish();
}

criterion_group!(benches, noinfo, fullinfo, simulation);
criterion_main!(benches);
