use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use qubeam_core::config::SweepConfig;
use qubeam_core::sweep::run_sweep_with_threads;
use qubeam_core::{
    exact_roots, full_report, make_params, EvalOptions, Order, PolarizationConfig, DEFAULT_TOL,
};

fn roots(c: &mut Criterion) {
    let p = make_params(2500.0, 3000.0, 0.5, 0.1).unwrap();
    c.bench_function("exact_roots", |b| {
        b.iter(|| exact_roots(black_box(&p), DEFAULT_TOL).unwrap())
    });
}

fn report(c: &mut Criterion) {
    let p = make_params(2500.0, 3000.0, 0.5, 0.1).unwrap();
    let full = EvalOptions::default();
    let leading = EvalOptions {
        order: Order::Leading,
        ..full
    };
    c.bench_function("full_report", |b| {
        b.iter(|| full_report(black_box(&p), PolarizationConfig::DOWN_UP, &full).unwrap())
    });
    c.bench_function("full_report_leading", |b| {
        b.iter(|| full_report(black_box(&p), PolarizationConfig::DOWN_UP, &leading).unwrap())
    });
}

fn sweep(c: &mut Criterion) {
    let cfg = SweepConfig {
        dk_steps: 16,
        omega_steps: 16,
        ..SweepConfig::default()
    };
    let mut group = c.benchmark_group("sweep_16x16");
    group.sample_size(20);
    group.bench_function("single_thread", |b| {
        b.iter(|| run_sweep_with_threads(&cfg, Some(1)).unwrap())
    });
    group.bench_function("pool", |b| {
        b.iter(|| run_sweep_with_threads(&cfg, None).unwrap())
    });
    group.finish();
}

criterion_group!(benches, roots, report, sweep);
criterion_main!(benches);
