//! Helpers shared by the integration suites: random problem generators and
//! independent brute-force reference computations.
//!
//! Each test binary compiles this module on its own, so not every helper is
//! referenced from every binary.
#![allow(dead_code)]

use merit_core::lp::{solve_lp, LinearConstraint, LinearProgram, LpStatus};
use merit_core::model::enumerate_feasible_topk;
use merit_core::rng::Rng;
use merit_core::{Instance, Interval, MarginalVector};

/// Random instance with bounds uniform in [0, 1]. Estimates, when requested,
/// sit at the midpoint so estimate-based rules always have input.
pub fn random_instance(rng: &mut Rng, n: usize, k: usize, with_estimates: bool) -> Instance {
    let intervals: Vec<Interval> = (0..n)
        .map(|i| {
            let a = rng.next_f64();
            let b = rng.next_f64();
            let (lo, hi) = (a.min(b), a.max(b));
            if with_estimates {
                Interval::with_estimate(format!("c{i}"), lo, hi, 0.5 * (lo + hi)).unwrap()
            } else {
                Interval::new(format!("c{i}"), lo, hi).unwrap()
            }
        })
        .collect();
    Instance::new(intervals, k).unwrap()
}

/// Random marginals summing to the budget: proportional water-filling that
/// caps overflowing entries at 1 and redistributes the rest.
pub fn random_marginals(rng: &mut Rng, n: usize, k: usize) -> MarginalVector {
    let w: Vec<f64> = (0..n).map(|_| rng.next_f64() + 1e-9).collect();
    let mut p = vec![0.0; n];
    let mut fixed = vec![false; n];
    loop {
        let remaining = k as f64 - p.iter().zip(&fixed).filter(|(_, &f)| f).map(|(x, _)| *x).sum::<f64>();
        let s: f64 = w.iter().zip(&fixed).filter(|(_, &f)| !f).map(|(x, _)| *x).sum();
        if s <= 0.0 || remaining <= 0.0 {
            break;
        }
        let mut overflowed = false;
        for i in 0..n {
            if !fixed[i] && remaining * w[i] / s >= 1.0 {
                p[i] = 1.0;
                fixed[i] = true;
                overflowed = true;
            }
        }
        if !overflowed {
            for i in 0..n {
                if !fixed[i] {
                    p[i] = remaining * w[i] / s;
                }
            }
            break;
        }
    }
    let p = MarginalVector::new(p);
    p.validate(k, 1e-7).expect("water-filling yields a valid marginal vector");
    p
}

/// Optimal worst-case value by materializing every feasible-set constraint
/// into one linear program. Exponential in n; the reference the cutting
/// plane loop must match.
pub fn full_lp_optimum(instance: &Instance) -> f64 {
    let n = instance.n();
    let k = instance.budget();
    let sets = enumerate_feasible_topk(instance).unwrap();
    let v_var = n;
    let mut objective = vec![0.0; n + 1];
    objective[v_var] = 1.0;
    let mut bounds = vec![(0.0, 1.0); n];
    bounds.push((0.0, k as f64));
    let mut constraints =
        vec![LinearConstraint::eq((0..n).map(|i| (i, 1.0)).collect(), k as f64)];
    for set in &sets {
        let mut terms: Vec<(usize, f64)> = set.iter().map(|&i| (i, 1.0)).collect();
        terms.push((v_var, -1.0));
        constraints.push(LinearConstraint::ge(terms, 0.0));
    }
    let lp = LinearProgram { num_vars: n + 1, objective, bounds, constraints };
    let sol = solve_lp(&lp);
    assert_eq!(sol.status, LpStatus::Optimal, "reference LP must solve");
    sol.objective
}

/// Minimum payout over all feasible sets, each summed in index order.
pub fn brute_min_value(p: &[f64], instance: &Instance) -> f64 {
    enumerate_feasible_topk(instance)
        .unwrap()
        .iter()
        .map(|set| set.iter().map(|&i| p[i]).sum::<f64>())
        .fold(f64::INFINITY, f64::min)
}

/// The four-candidate reference fixture: one clear leader, one all-overlap
/// contender, two interchangeable trailers dominated only by the leader.
/// Estimates are placed so the k-th-estimate funding line sits strictly
/// below the leader's lower bound at k = 2.
pub fn reference_fixture(k: usize) -> Instance {
    Instance::new(
        vec![
            Interval::with_estimate("1", 5.0, 7.0, 6.0).unwrap(),
            Interval::with_estimate("2", 2.0, 6.0, 4.0).unwrap(),
            Interval::with_estimate("3", 1.0, 4.5, 2.75).unwrap(),
            Interval::with_estimate("4", 1.0, 4.5, 2.75).unwrap(),
        ],
        k,
    )
    .unwrap()
}
