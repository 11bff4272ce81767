//! Instance builders shared by the solver benchmarks and their sanity tests.

use merit_core::datagen::bench_instance;
use merit_core::rng::Rng;
use merit_core::{Instance, Interval};

/// Synthetic review data at laptop scale: integer scores, leave-one-out
/// intervals, budget `rate * n`.
pub fn synthetic(n: usize, rate: f64, seed: u64) -> Instance {
    let k = ((n as f64 * rate).round() as usize).clamp(1, n);
    bench_instance(n, k, seed)
}

/// A band of shifted, heavily overlapping intervals: candidate i spans
/// [i, i + n/2], so roughly half the pool is incomparable with any given
/// candidate and the order structure stays dense.
pub fn staircase(n: usize, k: usize) -> Instance {
    let span = (n / 2).max(1) as f64;
    let intervals: Vec<Interval> = (0..n)
        .map(|i| Interval::new(format!("c{i}"), i as f64, i as f64 + span).unwrap())
        .collect();
    Instance::new(intervals, k).unwrap()
}

/// Near-uniform marginals that still sum exactly to the budget.
pub fn jittered_marginals(instance: &Instance, seed: u64) -> Vec<f64> {
    let n = instance.n();
    let k = instance.budget();
    let mut rng = Rng::new(seed);
    let mut p: Vec<f64> = (0..n).map(|_| 0.5 + 0.5 * rng.next_f64()).collect();
    let total: f64 = p.iter().sum();
    let scale = k as f64 / total;
    for v in &mut p {
        *v *= scale;
    }
    p
}

/// Random points for the chain-cover benchmark, coordinates below `cap`.
pub fn lattice_points(n: usize, cap: i64, seed: u64) -> Vec<(i64, i64)> {
    let mut rng = Rng::new(seed);
    (0..n).map(|_| (rng.below(cap as usize) as i64, rng.below(cap as usize) as i64)).collect()
}
