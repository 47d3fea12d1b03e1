//! Parallel vs single-threaded runs of the data-parallel workloads.
//!
//! With the default `parallel` feature each workload is timed on the full
//! rayon pool and on a one-thread pool. Built with `--no-default-features`
//! the library is sequential and only the `sequential` variant is reported.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use std::hint::black_box;

use asympure::asymptotics::purity_report;
use asympure::oracle::{
    analyze, oracle_series, special_fiber_operator, RankOptions, DEFAULT_SIZE_CAP,
};
use asympure::rep_theory::kernel_series_rep;

fn modes() -> Vec<(&'static str, Option<rayon::ThreadPool>)> {
    if asympure::par::is_parallel() {
        let one = rayon::ThreadPoolBuilder::new()
            .num_threads(1)
            .build()
            .unwrap();
        let all = rayon::ThreadPoolBuilder::new().build().unwrap();
        vec![("threads=1", Some(one)), ("threads=all", Some(all))]
    } else {
        vec![("sequential", None)]
    }
}

fn in_mode<R: Send>(pool: &Option<rayon::ThreadPool>, f: impl FnOnce() -> R + Send) -> R {
    match pool {
        Some(p) => p.install(f),
        None => f(),
    }
}

fn bench_oracle_rank(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_rank_n2_k1_A12_B12");
    group.sample_size(10);
    let op = special_fiber_operator(2, 1);
    for (label, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                in_mode(&pool, || {
                    analyze(
                        &op,
                        black_box(12),
                        black_box(12),
                        DEFAULT_SIZE_CAP,
                        RankOptions::default(),
                    )
                    .unwrap()
                })
            })
        });
    }
    group.finish();
}

fn bench_oracle_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle_series_corner_m2_10");
    group.sample_size(10);
    let op = asympure::oracle::diagonal_operator(2, 1);
    for (label, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                in_mode(&pool, || {
                    oracle_series(&op, 1, 1, 2..=10, DEFAULT_SIZE_CAP, RankOptions::default())
                        .unwrap()
                })
            })
        });
    }
    group.finish();
}

fn bench_rep_series(c: &mut Criterion) {
    let mut group = c.benchmark_group("rep_series_n3_k2_m1_200");
    for (label, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| {
                in_mode(&pool, || {
                    kernel_series_rep(3, 2, 3, 2, black_box(1..=200)).unwrap()
                })
            })
        });
    }
    group.finish();
}

fn bench_purity_scan(c: &mut Criterion) {
    let mut group = c.benchmark_group("purity_scan_n2_k2_0_5");
    group.sample_size(20);
    let grid: Vec<(i64, i64)> = (0..=5).flat_map(|a| (0..=5).map(move |b| (a, b))).collect();
    for (label, pool) in modes() {
        group.bench_function(BenchmarkId::from_parameter(label), |b| {
            b.iter(|| in_mode(&pool, || purity_report(2, 2, black_box(&grid)).unwrap()))
        });
    }
    group.finish();
}

criterion_group!(
    benches,
    bench_oracle_rank,
    bench_oracle_series,
    bench_rep_series,
    bench_purity_scan
);
criterion_main!(benches);
