//! Wall-clock coverage of the hot paths: separation, the full cutting-plane
//! solve, post-processing, the lottery draw, and the chain cover.

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};

use merit_bench::{jittered_marginals, lattice_points, staircase, synthetic};
use merit_core::oracle::min_feasible_value;
use merit_core::sampling::systematic_sample;
use merit_core::solver::{chain_cover_points, solve_ex_ante};
use merit_core::{expost, MarginalVector};

fn bench_oracle(c: &mut Criterion) {
    let mut group = c.benchmark_group("oracle");
    for n in [1_000usize, 10_000] {
        let instance = staircase(n, n / 4);
        let p = jittered_marginals(&instance, 17);
        group.bench_with_input(BenchmarkId::new("min_feasible_value", n), &n, |b, _| {
            b.iter(|| min_feasible_value(&p, &instance))
        });
    }
    group.finish();
}

fn bench_solve(c: &mut Criterion) {
    let mut group = c.benchmark_group("solve_ex_ante");
    group.sample_size(10);
    for n in [1_000usize, 10_000] {
        let instance = synthetic(n, 1.0 / 3.0, 77);
        group.bench_with_input(BenchmarkId::from_parameter(n), &n, |b, _| {
            b.iter(|| solve_ex_ante(&instance).unwrap())
        });
    }
    group.finish();
}

fn bench_postprocess(c: &mut Criterion) {
    let instance = synthetic(10_000, 1.0 / 3.0, 77);
    let solved = solve_ex_ante(&instance).unwrap().marginals;
    c.bench_function("expost_enforce_10k", |b| {
        b.iter(|| expost::enforce(&solved, &instance))
    });

    let enforced = expost::enforce(&solved, &instance);
    let budget = instance.budget();
    c.bench_function("systematic_sample_10k", |b| {
        let mut seed = 0u64;
        b.iter(|| {
            seed = seed.wrapping_add(1);
            systematic_sample(&enforced, budget, seed).unwrap()
        })
    });

    let uniform = MarginalVector::new(vec![budget as f64 / 10_000.0; 10_000]);
    c.bench_function("systematic_sample_uniform_10k", |b| {
        b.iter(|| systematic_sample(&uniform, budget, 3).unwrap())
    });
}

fn bench_chain_cover(c: &mut Criterion) {
    let points = lattice_points(10_000, 200, 5);
    c.bench_function("chain_cover_points_10k", |b| {
        b.iter(|| chain_cover_points(&points))
    });
}

criterion_group!(benches, bench_oracle, bench_solve, bench_postprocess, bench_chain_cover);
criterion_main!(benches);
