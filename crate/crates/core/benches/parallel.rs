//! Parallel vs sequential throughput of the batch drivers.

use criterion::{criterion_group, criterion_main, Criterion};
use lawson_core::analysis;
use lawson_core::monodromy::ToleranceBudget;
use lawson_core::Complex;

fn bench_scan(c: &mut Criterion) {
    let a = Complex::new(0.1, 0.05);
    let g = Complex::new(1.3, -0.2);
    // a loose budget keeps one bench iteration affordable
    let tol = ToleranceBudget::new(1e-6, 1e-9, 2_000_000);
    let mut group = c.benchmark_group("circle_scan_8pt");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter(|| analysis::circle_scan(a, g, 8, &tol).unwrap())
    });
    group.bench_function("sequential", |b| {
        b.iter(|| analysis::circle_scan_seq(a, g, 8, &tol).unwrap())
    });
    group.finish();
}

fn bench_generators(c: &mut Criterion) {
    use lawson_core::{monodromy, potential};
    let p = potential::close_params(
        Complex::new(0.9, 0.3),
        Complex::new(0.2, 0.1),
        Complex::new(1.4, -0.3),
    )
    .unwrap();
    let tol = ToleranceBudget::new(1e-8, 1e-10, 2_000_000);
    let mut group = c.benchmark_group("generators");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| monodromy::generators(&p, &tol).unwrap()));
    group.bench_function("sequential", |b| {
        b.iter(|| monodromy::generators_seq(&p, &tol).unwrap())
    });
    group.finish();
}

criterion_group!(benches, bench_scan, bench_generators);
criterion_main!(benches);
