use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qlogit::{
    asymptotic_limit, expected_payoff, logit_map, simulate, solve_pure_nash, steady_fixed_point,
    wasserstein1_to_point, LogitSettings,
};
use qlogit_bench::{bench_grid, reference_config, reference_params, uniform_start, BENCH_CELLS};

fn bench_equilibrium(c: &mut Criterion) {
    let params = reference_params();
    c.bench_function("nash_bisection", |b| {
        b.iter(|| solve_pure_nash(black_box(&params), 1e-12).unwrap())
    });
}

fn bench_payoff_profile(c: &mut Criterion) {
    let d = uniform_start();
    let params = reference_params();
    c.bench_function(&format!("expected_payoff_{BENCH_CELLS}"), |b| {
        b.iter(|| expected_payoff(black_box(&d), &params))
    });
}

fn bench_logit_map(c: &mut Criterion) {
    let d = uniform_start();
    let profile = expected_payoff(&d, &reference_params());
    for q in [1.0, 1.2] {
        let settings = LogitSettings::new(0.1, q).unwrap();
        c.bench_function(&format!("logit_map_{BENCH_CELLS}_q{q}"), |b| {
            b.iter(|| logit_map(black_box(&profile), &settings).unwrap())
        });
    }
}

fn bench_solvers(c: &mut Criterion) {
    let d = uniform_start();
    let cfg = reference_config(0.1, 1.0);
    c.bench_function(&format!("simulate_to_steady_{BENCH_CELLS}"), |b| {
        b.iter(|| simulate(black_box(&d), &cfg, None).unwrap())
    });
    c.bench_function(&format!("steady_fixed_point_{BENCH_CELLS}"), |b| {
        b.iter(|| steady_fixed_point(black_box(&d), &cfg).unwrap())
    });
    let grid = bench_grid();
    let cfg_heavy = reference_config(0.1, 1.2);
    c.bench_function(&format!("asymptotic_limit_{BENCH_CELLS}"), |b| {
        b.iter(|| asymptotic_limit(black_box(&grid), &cfg_heavy).unwrap())
    });
}

fn bench_diagnostics(c: &mut Criterion) {
    let d = uniform_start();
    c.bench_function(&format!("wasserstein_to_point_{BENCH_CELLS}"), |b| {
        b.iter(|| wasserstein1_to_point(black_box(&d), 0.531).unwrap())
    });
}

criterion_group!(
    benches,
    bench_equilibrium,
    bench_payoff_profile,
    bench_logit_map,
    bench_solvers,
    bench_diagnostics
);
criterion_main!(benches);
