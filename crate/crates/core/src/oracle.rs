//! Exact separation for the worst-case selection guarantee.
//!
//! Given marginals p, the adversary picks the feasible top-k set T that
//! minimizes p(T). This module finds that minimizer in O(n log n + nk):
//! sort candidates by lower bound descending and case-split on the position
//! `cnt` of the first candidate left out. With sorted[0..cnt] inside and
//! sorted[cnt] the highest-lower-bound outsider, every further member must
//! overlap sorted[cnt] (anything it dominates would make the set infeasible),
//! so the cheapest completion takes the k - cnt smallest marginals among the
//! eligible tail. The case cnt == k (the k largest lower bounds) is feasible
//! on every instance, so the minimum always exists.

use crate::model::Instance;

/// A candidate solution (p, v) is rejected only when the adversary finds a
/// set cheaper than v by more than this. Kept an order of magnitude looser
/// than the LP feasibility tolerance so a freshly added cut cannot be
/// re-reported as violated on the next round.
pub const DEFAULT_VIOLATION_TOL: f64 = 1e-7;

/// One adversarial top-k set, recorded with the mass it held when found.
#[derive(Debug, Clone, PartialEq)]
pub struct Cut {
    /// Candidate indices, ascending.
    pub members: Vec<usize>,
    /// Sum of the marginals over `members` at separation time.
    pub value: f64,
}

/// Candidates rearranged by (lower desc, upper desc, index asc), with the
/// lookup tables the case split needs.
struct SortedView {
    /// order[pos] = original candidate index.
    order: Vec<usize>,
    /// Lower bounds by sorted position.
    lower: Vec<f64>,
    /// upper + epsilon by sorted position; `upper_eps[j] >= lower[cnt]` is
    /// exactly the negation of `dominates(sorted[cnt], sorted[j])`.
    upper_eps: Vec<f64>,
    /// Marginals by sorted position.
    p: Vec<f64>,
    /// prefix[i] = sum of p over sorted positions 0..i.
    prefix: Vec<f64>,
    /// Sorted positions ordered by (p asc, position asc).
    by_p: Vec<usize>,
}

fn sorted_view(p: &[f64], instance: &Instance) -> SortedView {
    let n = instance.n();
    let eps = instance.epsilon();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_unstable_by(|&a, &b| {
        let ia = instance.interval(a);
        let ib = instance.interval(b);
        ib.lower()
            .partial_cmp(&ia.lower())
            .unwrap()
            .then(ib.upper().partial_cmp(&ia.upper()).unwrap())
            .then(a.cmp(&b))
    });

    let lower: Vec<f64> = order.iter().map(|&i| instance.interval(i).lower()).collect();
    let upper_eps: Vec<f64> = order.iter().map(|&i| instance.interval(i).upper() + eps).collect();
    let p_sorted: Vec<f64> = order.iter().map(|&i| p[i]).collect();

    let mut prefix = Vec::with_capacity(n + 1);
    prefix.push(0.0);
    for &x in &p_sorted {
        prefix.push(prefix.last().unwrap() + x);
    }

    let mut by_p: Vec<usize> = (0..n).collect();
    by_p.sort_unstable_by(|&a, &b| p_sorted[a].partial_cmp(&p_sorted[b]).unwrap().then(a.cmp(&b)));

    SortedView { order, lower, upper_eps, p: p_sorted, prefix, by_p }
}

/// Cheapest completion for the case split at `cnt`: the sum of the k - cnt
/// smallest marginals among tail positions overlapping sorted[cnt], or None
/// when fewer than k - cnt positions are eligible (no feasible set excludes
/// sorted[cnt] that early).
fn completion_value(view: &SortedView, cnt: usize, k: usize) -> Option<f64> {
    let exc_lower = view.lower[cnt];
    let mut needed = k - cnt;
    let mut total = view.prefix[cnt];
    for &pos in &view.by_p {
        if needed == 0 {
            break;
        }
        if pos <= cnt || view.upper_eps[pos] < exc_lower {
            continue;
        }
        total += view.p[pos];
        needed -= 1;
    }
    (needed == 0).then_some(total)
}

fn rebuild_members(view: &SortedView, cnt: usize, k: usize) -> Vec<usize> {
    let mut members: Vec<usize> = view.order[..cnt.min(k)].to_vec();
    if cnt < k {
        let exc_lower = view.lower[cnt];
        let mut needed = k - cnt;
        for &pos in &view.by_p {
            if needed == 0 {
                break;
            }
            if pos <= cnt || view.upper_eps[pos] < exc_lower {
                continue;
            }
            members.push(view.order[pos]);
            needed -= 1;
        }
        debug_assert_eq!(needed, 0, "rebuilding a case that had no completion");
    }
    members.sort_unstable();
    members
}

/// The adversary's best response: the minimum of `sum_{j in T} p_j` over
/// feasible top-k sets, together with one minimizing set (indices ascending).
/// Ties break toward the case split with fewer forced prefix members, then
/// by (marginal asc, sorted position asc) within the tail.
pub fn min_feasible_value(p: &[f64], instance: &Instance) -> (f64, Vec<usize>) {
    let n = instance.n();
    let k = instance.budget();
    assert_eq!(p.len(), n, "got {} marginals for {n} candidates", p.len());
    if k == 0 {
        return (0.0, Vec::new());
    }

    let view = sorted_view(p, instance);
    let mut best_value = view.prefix[k];
    let mut best_cnt = k;
    for cnt in 0..k {
        if let Some(value) = completion_value(&view, cnt, k) {
            if value < best_value {
                best_value = value;
                best_cnt = cnt;
            }
        }
    }
    (best_value, rebuild_members(&view, best_cnt, k))
}

/// Most-violated-cut oracle at the default tolerance.
pub fn separate(p: &[f64], v: f64, instance: &Instance) -> Option<Cut> {
    separate_with_tol(p, v, instance, DEFAULT_VIOLATION_TOL)
}

/// Returns the adversary's set when it undercuts the claimed guarantee `v`
/// by more than `tol`, None when (p, v) survives every feasible top-k set.
pub fn separate_with_tol(p: &[f64], v: f64, instance: &Instance, tol: f64) -> Option<Cut> {
    let (value, members) = min_feasible_value(p, instance);
    (value < v - tol).then_some(Cut { members, value })
}
