use std::hint::black_box;

use affine_bench::{oscillator, sample_phi, sample_system};
use affine_core::dynamics::{integrate, Scheme};
use affine_core::geometry::two_polar_decompose;
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn two_polar(c: &mut Criterion) {
    let mut g = c.benchmark_group("two_polar_decompose");
    for n in [2, 3] {
        let phi = sample_phi(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &phi, |b, phi| {
            b.iter(|| two_polar_decompose(black_box(phi)).unwrap())
        });
    }
    g.finish();
}

fn midpoint_step(c: &mut Criterion) {
    let mut g = c.benchmark_group("implicit_midpoint_10_steps");
    for n in [2, 3] {
        let (sys, z) = sample_system(n);
        g.bench_function(BenchmarkId::from_parameter(n), |b| {
            b.iter(|| integrate(&sys, black_box(&z), Scheme::ImplicitMidpoint, 1e-3, 10).unwrap())
        });
    }
    g.finish();
}

fn tridiagonal(c: &mut Criterion) {
    let mut g = c.benchmark_group("tridiagonal_lowest_5");
    for n in [1000, 4000] {
        let t = oscillator(n);
        g.bench_with_input(BenchmarkId::from_parameter(n), &t, |b, t| {
            b.iter(|| black_box(t).lowest_eigenvalues(5))
        });
    }
    g.finish();
}

criterion_group!(benches, two_polar, midpoint_step, tridiagonal);
criterion_main!(benches);
