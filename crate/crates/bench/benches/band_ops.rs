use std::hint::black_box;

use cmv_bench::{diagonal_pattern, exact_pair, float_pair, ramp};
use cmv_core::ad::hermitian_ad_recursive;
use cmv_core::{solve, Scalar, Tolerance, VerblunskySeq};
use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

fn products(c: &mut Criterion) {
    let mut group = c.benchmark_group("cmv_product");
    for window in [64, 256] {
        let exact = exact_pair(window);
        group.bench_with_input(BenchmarkId::new("exact", window), &exact, |b, p| {
            b.iter(|| black_box(p.l.mul(&p.m).unwrap()))
        });
        let float = float_pair(window);
        group.bench_with_input(BenchmarkId::new("float", window), &float, |b, p| {
            b.iter(|| black_box(p.l.mul(&p.m).unwrap()))
        });
    }
    group.finish();
}

fn hermitian_ad(c: &mut Criterion) {
    let mut group = c.benchmark_group("hermitian_ad");
    let pair = exact_pair(96);
    let lambda = ramp(96);
    for n in 1..=4 {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(hermitian_ad_recursive(&pair, &lambda, n).unwrap()))
        });
    }
    group.finish();
}

fn small_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_diagonal");
    group.sample_size(10);
    let alpha = VerblunskySeq::constant(cmv_bench::Q::from_ratio(3, 5)).unwrap();
    for n in [2, 3] {
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, &n| {
            b.iter(|| black_box(solve(&alpha, n, diagonal_pattern(24), 64, &Tolerance::default()).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(benches, products, hermitian_ad, small_solve);
criterion_main!(benches);
