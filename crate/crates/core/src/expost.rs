//! Ex-post validity: no lottery outcome may select a candidate while leaving
//! a strictly better one unfunded. In marginals this reads, for every
//! dominating pair (a, b): p_a = 1 or p_b = 0.
//!
//! `enforce` repairs a marginal vector by moving mass from dominated
//! candidates up to their dominators. Candidates are processed in increasing
//! upper bound; each one either gives away all of its mass or fills every
//! one of its dominators to exactly 1. Dominance is transitive, so a filled
//! dominator can never lose mass to a later transfer: its own dominators
//! were filled in the same pass that filled it. Transfers are arranged so
//! that a drained candidate holds exactly 0.0 and a filled one exactly 1.0,
//! which makes the procedure idempotent bit for bit and lets callers test
//! tier membership without tolerances.
//!
//! Total mass is conserved exactly up to one rounding per transfer, and the
//! worst-case guarantee never decreases: mass moves from a candidate to
//! someone who belongs to every feasible top-k set the donor belongs to.

use crate::model::{Instance, MarginalVector};

/// Returns marginals satisfying every dominating pair, obtained from `p` by
/// upward mass transfers. Input entries are clamped to [0, 1] first.
pub fn enforce(p: &MarginalVector, instance: &Instance) -> MarginalVector {
    let n = instance.n();
    assert_eq!(p.len(), n, "got {} marginals for {n} candidates", p.len());
    let mut q: Vec<f64> = p.iter().map(|v| v.clamp(0.0, 1.0)).collect();

    // Increasing upper bound puts every candidate before all of its
    // dominators: a dominator's lower bound exceeds u_b + eps, so its upper
    // bound is strictly larger than u_b.
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&x, &y| {
        let ix = instance.interval(x);
        let iy = instance.interval(y);
        ix.upper()
            .partial_cmp(&iy.upper())
            .unwrap()
            .then(iy.lower().partial_cmp(&ix.lower()).unwrap())
            .then(x.cmp(&y))
    });

    // suffix_max_lower[pos] = max lower bound at sorted positions >= pos;
    // lets candidates with no dominator skip the scan.
    let mut suffix_max_lower = vec![f64::NEG_INFINITY; n + 1];
    for pos in (0..n).rev() {
        suffix_max_lower[pos] =
            suffix_max_lower[pos + 1].max(instance.interval(order[pos]).lower());
    }

    for bpos in 0..n {
        let b = order[bpos];
        if q[b] == 0.0 {
            continue;
        }
        if suffix_max_lower[bpos + 1] <= instance.interval(b).upper() + instance.epsilon() {
            continue;
        }
        for apos in (bpos + 1..n).rev() {
            if q[b] == 0.0 {
                break;
            }
            let a = order[apos];
            if q[a] >= 1.0 || !instance.dominates(a, b) {
                continue;
            }
            let capacity = 1.0 - q[a];
            if q[b] <= capacity {
                q[a] = (q[a] + q[b]).min(1.0);
                q[b] = 0.0;
            } else {
                q[a] = 1.0;
                q[b] -= capacity;
            }
        }
    }

    MarginalVector::new(q)
}

/// True when every dominating pair (a, b) has p_a >= 1 - tol or p_b <= tol.
/// `enforce` output satisfies this at tol = 0.
pub fn is_ex_post_valid(p: &MarginalVector, instance: &Instance, tol: f64) -> bool {
    let n = instance.n();
    assert_eq!(p.len(), n, "got {} marginals for {n} candidates", p.len());
    for a in 0..n {
        if p[a] >= 1.0 - tol {
            continue;
        }
        for b in 0..n {
            if a != b && p[b] > tol && instance.dominates(a, b) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::worst_case_utility;
    use crate::model::Interval;
    use crate::rng::Rng;

    fn iv(id: &str, lo: f64, hi: f64) -> Interval {
        Interval::new(id, lo, hi).unwrap()
    }

    #[test]
    fn valid_input_passes_through_unchanged() {
        let inst = Instance::new(
            vec![
                iv("1", 5.0, 7.0),
                iv("2", 4.0, 6.0),
                iv("3", 1.0, 4.5),
                iv("4", 1.0, 4.5),
            ],
            2,
        )
        .unwrap();
        let p = MarginalVector::new(vec![1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        assert!(is_ex_post_valid(&p, &inst, 0.0));
        assert_eq!(enforce(&p, &inst), p);
    }

    #[test]
    fn mass_moves_up_a_dominating_pair() {
        let inst = Instance::new(vec![iv("a", 2.0, 3.0), iv("b", 0.0, 1.0)], 1).unwrap();
        let q = enforce(&MarginalVector::new(vec![0.4, 0.6]), &inst);
        assert_eq!(q.as_slice(), &[1.0, 0.0]);

        let q = enforce(&MarginalVector::new(vec![0.5, 0.2]), &inst);
        assert_eq!(q.as_slice(), &[0.7, 0.0]);
    }

    #[test]
    fn chains_drain_to_the_top() {
        let inst = Instance::new(
            vec![iv("a", 4.0, 5.0), iv("b", 2.0, 3.0), iv("c", 0.0, 1.0)],
            1,
        )
        .unwrap();
        let q = enforce(&MarginalVector::new(vec![0.2, 0.3, 0.5]), &inst);
        assert_eq!(q.as_slice(), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn enforcement_raises_the_worst_case_here() {
        let inst = Instance::new(vec![iv("a", 2.0, 3.0), iv("b", 0.0, 1.0)], 1).unwrap();
        let p = MarginalVector::new(vec![0.4, 0.6]);
        let before = worst_case_utility(&p, &inst);
        let after = worst_case_utility(&enforce(&p, &inst), &inst);
        assert!((before - 0.4).abs() < 1e-15);
        assert!((after - 1.0).abs() < 1e-15);
    }

    fn random_instance(rng: &mut Rng, n: usize) -> Instance {
        let ivs: Vec<Interval> = (0..n)
            .map(|i| {
                let a = (rng.next_f64() * 4.0).round() / 4.0;
                let b = (rng.next_f64() * 4.0).round() / 4.0;
                iv(&i.to_string(), a.min(b), a.max(b))
            })
            .collect();
        Instance::new(ivs, 0).unwrap()
    }

    #[test]
    fn random_instances_keep_the_invariants() {
        let mut rng = Rng::new(23);
        for trial in 0..150 {
            let n = 2 + rng.below(10);
            let k = rng.below(n + 1);
            let inst = random_instance(&mut rng, n).with_budget(k).unwrap();
            let p = MarginalVector::new((0..n).map(|_| rng.next_f64()).collect());
            let q = enforce(&p, &inst);

            assert!(is_ex_post_valid(&q, &inst, 0.0), "trial {trial}: invalid output");
            assert!(
                (q.sum() - p.sum()).abs() < 1e-9,
                "trial {trial}: mass drifted from {} to {}",
                p.sum(),
                q.sum()
            );
            for i in 0..n {
                assert!((0.0..=1.0).contains(&q[i]), "trial {trial}: q[{i}] = {}", q[i]);
            }
            assert!(
                worst_case_utility(&q, &inst) >= worst_case_utility(&p, &inst) - 1e-12,
                "trial {trial}: enforcement lowered the guarantee"
            );

            let again = enforce(&q, &inst);
            assert_eq!(again.as_slice(), q.as_slice(), "trial {trial}: not idempotent");
        }
    }

    #[test]
    fn epsilon_gates_the_transfer() {
        let ivs = vec![iv("a", 2.05, 3.0), iv("b", 1.0, 2.0)];
        let strict = Instance::new(ivs.clone(), 1).unwrap();
        let q = enforce(&MarginalVector::new(vec![0.5, 0.5]), &strict);
        assert_eq!(q.as_slice(), &[1.0, 0.0]);

        // With a wider indifference band the pair overlaps and nothing moves.
        let relaxed = Instance::with_epsilon(ivs, 1, 0.1).unwrap();
        let q = enforce(&MarginalVector::new(vec![0.5, 0.5]), &relaxed);
        assert_eq!(q.as_slice(), &[0.5, 0.5]);
    }
}
