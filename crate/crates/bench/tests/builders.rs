//! The benchmark fixtures must be genuinely solvable, not just type-correct;
//! a builder that errors mid-benchmark wastes a long run.

use merit_bench::{jittered_marginals, lattice_points, staircase, synthetic};
use merit_core::oracle::min_feasible_value;
use merit_core::solver::{chain_cover_points, solve_ex_ante};

#[test]
fn staircase_is_dense_but_solvable() {
    let instance = staircase(400, 100);
    let rep = solve_ex_ante(&instance).unwrap();
    assert!(rep.certified);
    rep.marginals.validate(100, 1e-7).unwrap();
    // The band leaves the top and bottom of the pool comparable, so pruning
    // has something to do and the LP still has real structure.
    assert!(rep.pruned_accepts + rep.pruned_rejects > 0);
    assert!(rep.groups > 1);
}

#[test]
fn synthetic_solves_within_the_iteration_budget() {
    let instance = synthetic(1_000, 1.0 / 3.0, 77);
    assert_eq!(instance.budget(), 333);
    let rep = solve_ex_ante(&instance).unwrap();
    assert!(rep.certified);
    assert!(rep.iterations <= 30);
}

#[test]
fn jittered_marginals_fit_the_oracle() {
    let instance = staircase(300, 75);
    let p = jittered_marginals(&instance, 17);
    assert!((p.iter().sum::<f64>() - 75.0).abs() < 1e-9);
    let (value, members) = min_feasible_value(&p, &instance);
    assert_eq!(members.len(), 75);
    assert!(value.is_finite());
}

#[test]
fn lattice_points_cover_the_grid() {
    let points = lattice_points(2_000, 50, 5);
    assert_eq!(points.len(), 2_000);
    assert!(points.iter().all(|&(a, b)| (0..50).contains(&a) && (0..50).contains(&b)));
    let chains = chain_cover_points(&points);
    let covered: usize = chains.iter().map(Vec::len).sum();
    assert_eq!(covered, 2_000);
}
