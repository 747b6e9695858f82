//! Benchmarks for the hot paths: per-step evolution and determinant
//! work, shape (de)composition, and the two sieve routes. The numeric
//! minimizer is the only deliberately expensive call (a full grid search
//! plus refinement); it gets a reduced sample count.

use criterion::{criterion_group, criterion_main, Criterion};
use lindblad_sieve::{
    decompose, det_sigma_expanded, entropy, evolve, optimal_shape_from_kernels,
    optimal_shape_numeric, optimal_squeezing_closed_form, sieve_kernels, stationary_covariance,
    GridSpec,
};
use lindblad_sieve_bench::reference_scenario;
use std::hint::black_box;

fn bench_evolution(c: &mut Criterion) {
    let (_, params, sigma0) = reference_scenario();
    c.bench_function("stationary_covariance", |b| {
        b.iter(|| stationary_covariance(black_box(&params)))
    });
    c.bench_function("evolve", |b| {
        b.iter(|| evolve(black_box(&sigma0), black_box(3.7), black_box(&params)))
    });
    c.bench_function("det_sigma_expanded", |b| {
        b.iter(|| det_sigma_expanded(black_box(&sigma0), black_box(3.7), black_box(&params)))
    });
}

fn bench_shapes(c: &mut Criterion) {
    let (pc, params, sigma0) = reference_scenario();
    let evolved = evolve(&sigma0, 3.7, &params).expect("valid evolution");
    c.bench_function("decompose", |b| {
        b.iter(|| decompose(black_box(&evolved), black_box(&pc)))
    });
    let area = evolved.area(&pc);
    c.bench_function("entropy", |b| b.iter(|| entropy(black_box(area))));
}

fn bench_sieve(c: &mut Criterion) {
    let (_, params, _) = reference_scenario();
    let point = sieve_kernels(3.7, &params).expect("valid kernels");
    c.bench_function("sieve_kernels", |b| {
        b.iter(|| sieve_kernels(black_box(3.7), black_box(&params)))
    });
    c.bench_function("optimal_squeezing_closed_form", |b| {
        b.iter(|| optimal_squeezing_closed_form(black_box(&params)))
    });
    c.bench_function("optimal_shape_from_kernels", |b| {
        b.iter(|| optimal_shape_from_kernels(black_box(&point)))
    });
    let grid = GridSpec::default();
    let mut group = c.benchmark_group("search");
    group.sample_size(20);
    group.bench_function("optimal_shape_numeric", |b| {
        b.iter(|| optimal_shape_numeric(black_box(&point), black_box(&grid)))
    });
    group.finish();
}

criterion_group!(benches, bench_evolution, bench_shapes, bench_sieve);
criterion_main!(benches);
