//! Benchmarks comparing the parallel pairing-matrix dispatch with the
//! sequential implementation it falls back to.
//!
//! With the default `parallel` feature the `*_matrix` entry points fan rows
//! out across a rayon pool (capped by `TAUT_THREADS`); `*_matrix_seq` always
//! runs on the calling thread. Build with `--no-default-features` to measure
//! the fallback build, where both entry points share the sequential path.

use criterion::{criterion_group, criterion_main, BatchSize, Criterion};

use tautring::curve::{self, RingContext};
use tautring::fm;

fn curve_pairing(c: &mut Criterion) {
    let ctx = RingContext::new(1, 6);
    let mut group = c.benchmark_group("curve-pairing-g1-n6-d2");
    group.bench_function("parallel", |b| {
        b.iter_batched(|| (), |_| curve::pairing_matrix(ctx, 2), BatchSize::SmallInput)
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(|| (), |_| curve::pairing_matrix_seq(ctx, 2), BatchSize::SmallInput)
    });
    group.finish();
}

fn compactified_pairing(c: &mut Criterion) {
    let ctx = RingContext::new(2, 5);
    let mut group = c.benchmark_group("fm-pairing-g2-n5-d2");
    group.bench_function("parallel", |b| {
        b.iter_batched(|| (), |_| fm::pairing_matrix(ctx, 2), BatchSize::SmallInput)
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(|| (), |_| fm::pairing_matrix_seq(ctx, 2), BatchSize::SmallInput)
    });
    group.finish();
}

fn curve_pairing_wide(c: &mut Criterion) {
    let ctx = RingContext::new(2, 6);
    let mut group = c.benchmark_group("curve-pairing-g2-n6-d3");
    group.sample_size(10);
    group.bench_function("parallel", |b| {
        b.iter_batched(|| (), |_| curve::pairing_matrix(ctx, 3), BatchSize::SmallInput)
    });
    group.bench_function("sequential", |b| {
        b.iter_batched(|| (), |_| curve::pairing_matrix_seq(ctx, 3), BatchSize::SmallInput)
    });
    group.finish();
}

criterion_group!(benches, curve_pairing, compactified_pairing, curve_pairing_wide);
criterion_main!(benches);
