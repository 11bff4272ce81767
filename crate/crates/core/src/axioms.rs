//! Executable checks of the fairness properties a selection rule may claim.
//!
//! Each check runs a rule on constructed inputs and measures the property
//! directly, so a claim like "marginals never shrink when the budget grows"
//! is a test outcome rather than prose. The checks are used both by unit
//! tests and by the `axioms` subcommand of the CLI.

use crate::model::{order_counts, Instance, Interval, MarginalVector};
use crate::rules::{RuleError, SelectionRule};

/// Slack allowed before a measured deviation counts as a violation. The
/// quantities compared are either exact by construction or carry only
/// linear-programming residue, so this can sit well below any honest effect.
pub const AXIOM_TOL: f64 = 1e-9;

/// One candidate whose probability fell when the budget grew.
#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub candidate: usize,
    /// The larger budget at which the drop was observed.
    pub budget: usize,
    pub before: f64,
    pub after: f64,
}

/// Runs `rule` at every budget from 1 to the instance's own and reports
/// every candidate whose probability drops from one budget to the next.
pub fn check_budget_monotonicity(
    instance: &Instance,
    rule: &dyn SelectionRule,
) -> Result<Vec<MonotonicityViolation>, RuleError> {
    let mut violations = Vec::new();
    let mut prev: Option<MarginalVector> = None;
    for b in 1..=instance.budget() {
        let inst_b = instance.with_budget(b)?;
        let p = rule.select(&inst_b)?.marginals;
        if let Some(q) = &prev {
            for i in 0..instance.n() {
                if p[i] < q[i] - AXIOM_TOL {
                    violations.push(MonotonicityViolation {
                        candidate: i,
                        budget: b,
                        before: q[i],
                        after: p[i],
                    });
                }
            }
        }
        prev = Some(p);
    }
    Ok(violations)
}

/// The same candidates with quality read in the opposite direction: interval
/// [l, u] becomes [-u, -l] and the estimate flips sign. Negation is exact in
/// floating point, so dominance relations reverse without rounding slack.
pub fn reversed_instance(instance: &Instance) -> Instance {
    let ivs = instance
        .intervals()
        .iter()
        .map(|iv| match iv.estimate() {
            Some(e) => Interval::with_estimate(iv.id(), -iv.upper(), -iv.lower(), -e),
            None => Interval::new(iv.id(), -iv.upper(), -iv.lower()),
        })
        .map(|r| r.expect("negating a valid interval keeps it valid"))
        .collect();
    Instance::with_epsilon(ivs, instance.budget(), instance.epsilon())
        .expect("negation preserves instance validity")
}

/// Two-candidate reversal check: picking one of two under a reversed quality
/// scale should reject exactly whom it previously selected. Returns the
/// largest deviation |p_reversed[i] - (1 - p[i])|.
pub fn reversal_gap(instance: &Instance, rule: &dyn SelectionRule) -> Result<f64, RuleError> {
    assert!(
        instance.n() == 2 && instance.budget() == 1,
        "the reversal check is defined for two candidates and budget one"
    );
    let p = rule.select(instance)?.marginals;
    let pr = rule.select(&reversed_instance(instance))?.marginals;
    let mut gap: f64 = 0.0;
    for i in 0..2 {
        gap = gap.max((pr[i] - (1.0 - p[i])).abs());
    }
    Ok(gap)
}

/// Builds the knife-edge pair of instances used by the instability check.
///
/// Base: k strong candidates with interval [0, 2] and estimate 1, and n - k
/// weak ones with interval [0, 1 - eps] and estimate (1 - eps) / 2. Every
/// pair overlaps, so the interval evidence distinguishes nobody, yet score
/// rules accept the strong block outright.
///
/// Perturbed: the k-th strong candidate's estimate slips to 1 - eps (its
/// interval shrinks to [0, 2 - 2 eps]), an arbitrarily small change for
/// small eps. Threshold rules now drag every weak candidate above the bar
/// and flip from a deterministic committee to a near-uniform lottery.
pub fn instability_fixture(n: usize, k: usize, eps: f64) -> (Instance, Instance) {
    assert!(k >= 1 && k < n, "need at least one strong and one weak candidate");
    assert!(eps > 0.0 && eps < 0.5, "the perturbation must stay a small positive number");
    let strong = |i: usize| Interval::with_estimate(format!("c{i}"), 0.0, 2.0, 1.0).unwrap();
    let weak = |i: usize| {
        Interval::with_estimate(format!("c{i}"), 0.0, 1.0 - eps, (1.0 - eps) / 2.0).unwrap()
    };

    let base: Vec<Interval> = (0..n).map(|i| if i < k { strong(i) } else { weak(i) }).collect();
    let mut perturbed = base.clone();
    perturbed[k - 1] =
        Interval::with_estimate(format!("c{}", k - 1), 0.0, 2.0 - 2.0 * eps, 1.0 - eps).unwrap();

    (
        Instance::new(base, k).expect("fixture instances are valid"),
        Instance::new(perturbed, k).expect("fixture instances are valid"),
    )
}

/// Largest per-candidate probability change between the base and perturbed
/// fixture instances.
pub fn instability_shift(
    rule: &dyn SelectionRule,
    n: usize,
    k: usize,
    eps: f64,
) -> Result<f64, RuleError> {
    let (base, perturbed) = instability_fixture(n, k, eps);
    let p = rule.select(&base)?.marginals;
    let q = rule.select(&perturbed)?.marginals;
    let mut shift: f64 = 0.0;
    for i in 0..n {
        shift = shift.max((p[i] - q[i]).abs());
    }
    Ok(shift)
}

/// Passes when the fixture perturbation moves no marginal at all. Rules that
/// flip from accepting the strong block to a near-uniform lottery move some
/// marginal by 1 - k/n and fail.
pub fn check_not_maximally_unstable(
    rule: &dyn SelectionRule,
    n: usize,
    k: usize,
    eps: f64,
) -> Result<bool, RuleError> {
    Ok(instability_shift(rule, n, k, eps)? <= AXIOM_TOL)
}

/// True when no candidate dominates another, i.e. the interval evidence
/// cannot rank any pair.
pub fn all_pairs_overlap(instance: &Instance) -> bool {
    order_counts(instance).above.iter().all(|&a| a == 0)
}

/// True when all entries agree within `tol`.
pub fn is_uniform(p: &MarginalVector, tol: f64) -> bool {
    match p.as_slice().first() {
        None => true,
        Some(&first) => p.iter().all(|&x| (x - first).abs() <= tol),
    }
}

/// True when every entry is within `tol` of 0 or 1.
pub fn is_deterministic(p: &MarginalVector, tol: f64) -> bool {
    p.iter().all(|&x| x.abs() <= tol || (x - 1.0).abs() <= tol)
}
