//! Maximin marginal selection by cutting planes.
//!
//! The decision variables are one selection probability per candidate plus a
//! scalar v standing for the guaranteed utility. Every feasible top-k set T
//! contributes a constraint v <= sum of p over T, and the objective is to
//! maximize v subject to the budget. The set family is exponential, so rows
//! are generated on demand: solve the current relaxation, ask the separation
//! oracle for the feasible set that the incumbent pays least, add its row if
//! it is violated, repeat until the oracle certifies the incumbent.
//!
//! Three reductions keep the master problem small:
//!
//! * **Pruning.** A candidate dominated by at least k others appears in no
//!   feasible set and is fixed to 0; one that dominates all but fewer than k
//!   appears in every feasible set and is fixed to 1 (shrinking the budget).
//!   Both tests re-run on the reduced instance until nothing changes.
//! * **Symmetry.** Candidates with the same dominator and dominated counts
//!   relate identically to everyone else (predecessor sets in an interval
//!   order are nested, so equal counts mean equal sets). They share one LP
//!   variable.
//! * **Chains.** If group g has no more dominators and no fewer dominated
//!   than group h, some optimum has p_g >= p_h; covering the groups by
//!   chains in this strength order adds those rows up front.
//!
//! `solve_monotone_sequence` re-solves budgets 1..=k, carrying each round's
//! marginals forward as lower bounds so that growing the budget never shrinks
//! anyone's probability. `solve_uniform` restricts marginals to three values
//! (reject, lottery, accept) and enforces ex-post validity inside the master
//! problem, which then becomes a small branch-and-bound.

use std::collections::{HashMap, HashSet};

use crate::expost;
use crate::lp::{
    self, LinearConstraint, LinearProgram, LpStatus, MipOptions, MipStatus, SimplexOptions, Tier,
};
use crate::model::{order_counts, Instance, MarginalVector, ModelError, OrderCounts};
use crate::oracle::{self, DEFAULT_VIOLATION_TOL};

/// Lower bounds below this are treated as no promise at all when pruning.
const REJECT_LB_TOL: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct SolveOptions {
    /// Cap on master LP solves before giving up.
    pub max_iters: usize,
    /// A feasible set must pay at least this much less than v to become a row.
    pub violation_tol: f64,
    pub simplex: SimplexOptions,
    /// Branch-and-bound settings for the uniform-lottery variant.
    pub mip: MipOptions,
}

impl Default for SolveOptions {
    fn default() -> Self {
        SolveOptions {
            max_iters: 500,
            violation_tol: DEFAULT_VIOLATION_TOL,
            simplex: SimplexOptions::default(),
            mip: MipOptions::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct SolveReport {
    pub marginals: MarginalVector,
    /// Worst feasible-set payout of `marginals`, recomputed on the original
    /// instance after assembly.
    pub value: f64,
    pub budget: usize,
    /// Master LP solves performed.
    pub iterations: usize,
    /// Feasible-set rows in the final master, including the seed row.
    pub cuts: usize,
    /// LP variables besides v.
    pub groups: usize,
    /// Pairwise ordering rows added from the chain cover.
    pub chains: usize,
    pub pruned_accepts: usize,
    pub pruned_rejects: usize,
    /// True when the oracle certified the incumbent; false when the loop
    /// stopped because the most violated set was already a row (a tolerance
    /// standoff, not a certificate).
    pub certified: bool,
}

#[derive(Debug, Clone)]
pub struct UniformReport {
    pub marginals: MarginalVector,
    pub value: f64,
    /// Selection probability shared by everyone in the lottery tier.
    pub lottery_probability: f64,
    pub accepted: Vec<usize>,
    pub lottery: Vec<usize>,
    pub rejected: Vec<usize>,
    pub iterations: usize,
    /// Branch-and-bound nodes across all master solves.
    pub nodes: usize,
    pub cuts: usize,
    pub certified: bool,
}

#[derive(Debug)]
pub enum SolveError {
    /// The master LP failed to solve; the payload names the stage.
    Lp { status: LpStatus, context: &'static str },
    /// Cut generation hit `max_iters` without a certificate.
    IterationLimit { iterations: usize, best_value: f64 },
    /// Carried-forward lower bounds do not fit the budget. Not expected to
    /// occur for bounds produced by `solve_monotone_sequence` itself.
    LowerBounds(String),
    /// The branch-and-bound master gave up or proved the tier system empty.
    Mip { status: MipStatus },
    Model(ModelError),
}

impl std::fmt::Display for SolveError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            SolveError::Lp { status, context } => {
                write!(f, "linear program ({context}) ended with status {status:?}")
            }
            SolveError::IterationLimit { iterations, best_value } => write!(
                f,
                "no certificate after {iterations} cut rounds (best value {best_value})"
            ),
            SolveError::LowerBounds(msg) => write!(f, "lower bounds are inconsistent: {msg}"),
            SolveError::Mip { status } => {
                write!(f, "tier search ended with status {status:?}")
            }
            SolveError::Model(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for SolveError {}

impl From<ModelError> for SolveError {
    fn from(e: ModelError) -> Self {
        SolveError::Model(e)
    }
}

/// Result of fixing forced candidates before the LP.
#[derive(Debug, Clone)]
pub struct PruneOutcome {
    /// Candidates in every feasible set (probability 1).
    pub accepted: Vec<usize>,
    /// Candidates in no feasible set (probability 0).
    pub rejected: Vec<usize>,
    /// Everyone else, in original order.
    pub remaining: Vec<usize>,
    /// Budget left for `remaining`.
    pub reduced_budget: usize,
}

/// Runs the accept/reject fixpoint on `instance`.
pub fn prune(instance: &Instance) -> PruneOutcome {
    prune_with(instance, None)
}

fn prune_with(instance: &Instance, lower_bounds: Option<&[f64]>) -> PruneOutcome {
    let n = instance.n();
    let mut accepted = Vec::new();
    let mut rejected = Vec::new();
    let mut remaining: Vec<usize> = (0..n).collect();
    let mut k = instance.budget();

    loop {
        if remaining.is_empty() {
            break;
        }
        if k == remaining.len() {
            accepted.append(&mut remaining);
            k = 0;
            break;
        }
        if k == 0 {
            // Candidates carrying a promised lower bound cannot be zeroed;
            // they stay remaining and the caller's feasibility check decides.
            let (free, kept): (Vec<usize>, Vec<usize>) = remaining
                .iter()
                .partition(|&&i| lower_bounds.map_or(true, |lb| lb[i] <= REJECT_LB_TOL));
            rejected.extend(free);
            remaining = kept;
            break;
        }

        let sub = restrict(instance, &remaining, k);
        let counts = order_counts(&sub);
        let nc = remaining.len();
        let mut accepts_round = Vec::new();
        let mut rejects_round = Vec::new();
        for (pos, &orig) in remaining.iter().enumerate() {
            if counts.below[pos] >= nc - k {
                accepts_round.push(orig);
            } else if counts.above[pos] >= k
                && lower_bounds.map_or(true, |lb| lb[orig] <= REJECT_LB_TOL)
            {
                rejects_round.push(orig);
            }
        }
        if accepts_round.is_empty() && rejects_round.is_empty() {
            break;
        }
        k -= accepts_round.len();
        let drop: HashSet<usize> = accepts_round.iter().chain(&rejects_round).copied().collect();
        remaining.retain(|i| !drop.contains(i));
        accepted.extend(accepts_round);
        rejected.extend(rejects_round);
    }

    accepted.sort_unstable();
    rejected.sort_unstable();
    PruneOutcome { accepted, rejected, remaining, reduced_budget: k }
}

fn restrict(instance: &Instance, keep: &[usize], budget: usize) -> Instance {
    let ivs = keep.iter().map(|&i| instance.interval(i).clone()).collect();
    Instance::with_epsilon(ivs, budget, instance.epsilon())
        .expect("restriction of a valid instance is valid")
}

/// Partitions candidates into classes with identical dominator and dominated
/// counts. Classes are interchangeable under every feasible-set constraint,
/// so the LP needs one variable per class. Ordered by (dominators ascending,
/// dominated descending, first member).
pub fn symmetry_groups(instance: &Instance) -> Vec<Vec<usize>> {
    let counts = order_counts(instance);
    grouped_by(
        (0..instance.n())
            .map(|i| (counts.above[i], counts.below[i], 0u64))
            .collect(),
    )
}

fn grouped_by(keys: Vec<(usize, usize, u64)>) -> Vec<Vec<usize>> {
    let mut map: HashMap<(usize, usize, u64), Vec<usize>> = HashMap::new();
    for (i, key) in keys.into_iter().enumerate() {
        map.entry(key).or_default().push(i);
    }
    let mut groups: Vec<((usize, usize, u64), Vec<usize>)> = map.into_iter().collect();
    groups.sort_by(|a, b| {
        (a.0 .0, std::cmp::Reverse(a.0 .1), a.1[0]).cmp(&(b.0 .0, std::cmp::Reverse(b.0 .1), b.1[0]))
    });
    groups.into_iter().map(|(_, members)| members).collect()
}

/// A partition of group indices into chains that descend in strength.
#[derive(Debug, Clone)]
pub struct ChainPartition {
    pub chains: Vec<Vec<usize>>,
}

/// Covers the points with chains under the componentwise order
/// (a_i >= a_j and b_i >= b_j). Greedy patience construction: scan points by
/// a descending and append each to the chain whose tail has the smallest b
/// still >= b_i; the tails stay sorted, so the lookup is a binary search.
pub fn chain_cover_points(points: &[(i64, i64)]) -> Vec<Vec<usize>> {
    let mut order: Vec<usize> = (0..points.len()).collect();
    order.sort_unstable_by(|&x, &y| {
        points[y]
            .0
            .cmp(&points[x].0)
            .then(points[y].1.cmp(&points[x].1))
            .then(x.cmp(&y))
    });
    let mut chains: Vec<Vec<usize>> = Vec::new();
    let mut tails: Vec<i64> = Vec::new();
    for &i in &order {
        let b = points[i].1;
        let pos = tails.partition_point(|&t| t < b);
        if pos == tails.len() {
            chains.push(vec![i]);
            tails.push(b);
        } else {
            chains[pos].push(i);
            tails[pos] = b;
        }
    }
    chains
}

/// Chain cover of the candidates in the strength order: fewer dominators and
/// more dominated is stronger.
pub fn chain_cover(counts: &OrderCounts) -> ChainPartition {
    let points: Vec<(i64, i64)> = counts
        .above
        .iter()
        .zip(&counts.below)
        .map(|(&a, &b)| (-(a as i64), b as i64))
        .collect();
    ChainPartition { chains: chain_cover_points(&points) }
}

/// Maximin marginals for `instance` with default options.
pub fn solve_ex_ante(instance: &Instance) -> Result<SolveReport, SolveError> {
    solve_ex_ante_with(instance, &SolveOptions::default())
}

pub fn solve_ex_ante_with(
    instance: &Instance,
    opts: &SolveOptions,
) -> Result<SolveReport, SolveError> {
    solve_constrained(instance, opts, None)
}

/// Solves budgets 1..=k in order, feeding each round's (ex-post enforced)
/// marginals into the next round as per-candidate lower bounds. The returned
/// reports are entrywise monotone: report[i] is budget i+1, already enforced.
pub fn solve_monotone_sequence(instance: &Instance) -> Result<Vec<SolveReport>, SolveError> {
    solve_monotone_sequence_with(instance, &SolveOptions::default())
}

pub fn solve_monotone_sequence_with(
    instance: &Instance,
    opts: &SolveOptions,
) -> Result<Vec<SolveReport>, SolveError> {
    let n = instance.n();
    let mut prev = vec![0.0; n];
    let mut out = Vec::with_capacity(instance.budget());
    for b in 1..=instance.budget() {
        let inst_b = instance.with_budget(b)?;
        let mut rep = solve_constrained(&inst_b, opts, Some(&prev))?;
        rep.marginals = expost::enforce(&rep.marginals, &inst_b);
        rep.value = oracle::min_feasible_value(rep.marginals.as_slice(), &inst_b).0;
        prev = rep.marginals.as_slice().to_vec();
        out.push(rep);
    }
    Ok(out)
}

fn solve_constrained(
    instance: &Instance,
    opts: &SolveOptions,
    lower_bounds: Option<&[f64]>,
) -> Result<SolveReport, SolveError> {
    let n = instance.n();
    let k = instance.budget();
    if let Some(lb) = lower_bounds {
        assert_eq!(lb.len(), n, "got {} lower bounds for {n} candidates", lb.len());
    }

    let pr = prune_with(instance, lower_bounds);
    let kr = pr.reduced_budget;

    let mut p_full = vec![0.0; n];
    for &i in &pr.accepted {
        p_full[i] = 1.0;
    }

    if let Some(lb) = lower_bounds {
        let promised: f64 = pr.remaining.iter().map(|&i| lb[i].clamp(0.0, 1.0)).sum();
        if promised > kr as f64 + 1e-9 {
            return Err(SolveError::LowerBounds(format!(
                "remaining candidates carry promises totalling {promised} \
                 against a reduced budget of {kr}"
            )));
        }
    }

    let mut report = SolveReport {
        marginals: MarginalVector::new(Vec::new()),
        value: 0.0,
        budget: k,
        iterations: 0,
        cuts: 0,
        groups: 0,
        chains: 0,
        pruned_accepts: pr.accepted.len(),
        pruned_rejects: pr.rejected.len(),
        certified: true,
    };

    if pr.remaining.is_empty() {
        report.marginals = MarginalVector::new(p_full);
        report.value = oracle::min_feasible_value(report.marginals.as_slice(), instance).0;
        return Ok(report);
    }

    let sub = restrict(instance, &pr.remaining, kr);
    let nr = sub.n();
    let counts = order_counts(&sub);

    // Grouping key carries the lower bound so only identically promised
    // candidates share a variable. Bounds inherited from a grouped solve are
    // bitwise equal within a class, so this loses nothing in practice.
    let keys: Vec<(usize, usize, u64)> = (0..nr)
        .map(|i| {
            let lb = lower_bounds.map_or(0.0, |lb| lb[pr.remaining[i]].clamp(0.0, 1.0));
            (counts.above[i], counts.below[i], lb.to_bits())
        })
        .collect();
    let groups = grouped_by(keys);
    let g = groups.len();
    let mut group_of = vec![0usize; nr];
    for (gi, members) in groups.iter().enumerate() {
        for &m in members {
            group_of[m] = gi;
        }
    }

    let v_var = g;
    let mut objective = vec![0.0; g + 1];
    objective[v_var] = 1.0;
    let mut bounds = Vec::with_capacity(g + 1);
    for members in &groups {
        let lb = lower_bounds.map_or(0.0, |lb| lb[pr.remaining[members[0]]].clamp(0.0, 1.0));
        bounds.push((lb, 1.0));
    }
    bounds.push((0.0, kr as f64));

    let mut lp = LinearProgram {
        num_vars: g + 1,
        objective,
        bounds,
        constraints: vec![LinearConstraint::eq(
            groups.iter().enumerate().map(|(gi, m)| (gi, m.len() as f64)).collect(),
            kr as f64,
        )],
    };

    // Asymmetric lower bounds invalidate the exchange argument behind the
    // ordering rows, so chains only apply to the unconstrained solve.
    if lower_bounds.is_none() {
        let group_points: Vec<(i64, i64)> = groups
            .iter()
            .map(|m| (-(counts.above[m[0]] as i64), counts.below[m[0]] as i64))
            .collect();
        for chain in chain_cover_points(&group_points) {
            for w in chain.windows(2) {
                lp.constraints
                    .push(LinearConstraint::ge(vec![(w[0], 1.0), (w[1], -1.0)], 0.0));
                report.chains += 1;
            }
        }
    }

    let mut seen: HashSet<Vec<u32>> = HashSet::new();
    let add_cut = |lp: &mut LinearProgram, seen: &mut HashSet<Vec<u32>>, members: &[usize]| {
        let mut coeff = vec![0u32; g];
        for &m in members {
            coeff[group_of[m]] += 1;
        }
        if !seen.insert(coeff.clone()) {
            return false;
        }
        let mut terms: Vec<(usize, f64)> = coeff
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(gi, &c)| (gi, c as f64))
            .collect();
        terms.push((v_var, -1.0));
        lp.constraints.push(LinearConstraint::ge(terms, 0.0));
        true
    };

    add_cut(&mut lp, &mut seen, &top_k_by_lower(&sub, kr));
    report.cuts = 1;
    report.groups = g;

    let mut p_reduced: Option<Vec<f64>> = None;
    let mut best_value = f64::NAN;
    while report.iterations < opts.max_iters {
        report.iterations += 1;
        let sol = lp::solve_lp_with(&lp, &opts.simplex);
        if sol.status != LpStatus::Optimal {
            return Err(SolveError::Lp { status: sol.status, context: "cutting-plane master" });
        }
        let p: Vec<f64> = (0..nr).map(|i| sol.x[group_of[i]]).collect();
        let v = sol.x[v_var];
        best_value = v;
        match oracle::separate_with_tol(&p, v, &sub, opts.violation_tol) {
            None => {
                p_reduced = Some(p);
                break;
            }
            Some(cut) => {
                if !add_cut(&mut lp, &mut seen, &cut.members) {
                    report.certified = false;
                    p_reduced = Some(p);
                    break;
                }
                report.cuts += 1;
            }
        }
    }

    let Some(p_reduced) = p_reduced else {
        return Err(SolveError::IterationLimit {
            iterations: report.iterations,
            best_value,
        });
    };

    for (ri, &orig) in pr.remaining.iter().enumerate() {
        let mut val = p_reduced[ri].clamp(0.0, 1.0);
        if let Some(lb) = lower_bounds {
            val = val.max(lb[orig].clamp(0.0, 1.0));
        }
        p_full[orig] = val;
    }
    report.marginals = MarginalVector::new(p_full);
    report.value = oracle::min_feasible_value(report.marginals.as_slice(), instance).0;
    Ok(report)
}

fn top_k_by_lower(instance: &Instance, k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..instance.n()).collect();
    order.sort_unstable_by(|&x, &y| {
        let ix = instance.interval(x);
        let iy = instance.interval(y);
        iy.lower()
            .partial_cmp(&ix.lower())
            .unwrap()
            .then(iy.upper().partial_cmp(&ix.upper()).unwrap())
            .then(x.cmp(&y))
    });
    let mut members: Vec<usize> = order[..k].to_vec();
    members.sort_unstable();
    members
}

/// Maximin selection restricted to a three-tier structure: every candidate
/// is rejected, accepted outright, or entered into a single lottery with a
/// shared probability. Ex-post validity is part of the constraint system
/// here rather than a postprocessing step, since transfers would break the
/// tier structure.
pub fn solve_uniform(instance: &Instance) -> Result<UniformReport, SolveError> {
    solve_uniform_with(instance, &SolveOptions::default())
}

pub fn solve_uniform_with(
    instance: &Instance,
    opts: &SolveOptions,
) -> Result<UniformReport, SolveError> {
    let n = instance.n();
    let k = instance.budget();

    if k == 0 || k == n {
        let p = vec![if k == n { 1.0 } else { 0.0 }; n];
        let marginals = MarginalVector::new(p);
        let value = oracle::min_feasible_value(marginals.as_slice(), instance).0;
        return Ok(UniformReport {
            marginals,
            value,
            lottery_probability: 0.0,
            accepted: if k == n { (0..n).collect() } else { Vec::new() },
            lottery: Vec::new(),
            rejected: if k == 0 { (0..n).collect() } else { Vec::new() },
            iterations: 0,
            nodes: 0,
            cuts: 0,
            certified: true,
        });
    }

    let c_var = n;
    let v_var = n + 1;
    let mut objective = vec![0.0; n + 2];
    objective[v_var] = 1.0;
    let mut bounds = vec![(0.0, 1.0); n + 1];
    bounds.push((0.0, k as f64));
    let mut lp = LinearProgram {
        num_vars: n + 2,
        objective,
        bounds,
        constraints: vec![LinearConstraint::eq((0..n).map(|i| (i, 1.0)).collect(), k as f64)],
    };

    let tied: Vec<usize> = (0..n).collect();
    let mut disjunctions = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b && instance.dominates(a, b) {
                disjunctions.push((a, b));
            }
        }
    }

    let mut seen: HashSet<Vec<usize>> = HashSet::new();
    let add_cut = |lp: &mut LinearProgram, seen: &mut HashSet<Vec<usize>>, members: &[usize]| {
        if !seen.insert(members.to_vec()) {
            return false;
        }
        let mut terms: Vec<(usize, f64)> = members.iter().map(|&i| (i, 1.0)).collect();
        terms.push((v_var, -1.0));
        lp.constraints.push(LinearConstraint::ge(terms, 0.0));
        true
    };

    add_cut(&mut lp, &mut seen, &top_k_by_lower(instance, k));
    let mut cuts = 1;
    let mut iterations = 0;
    let mut nodes = 0;
    let mut certified = true;
    let mut tiers: Option<Vec<Tier>> = None;

    while iterations < opts.max_iters {
        iterations += 1;
        let sol = lp::solve_mip_three_valued(&lp, &tied, c_var, &disjunctions, &opts.mip);
        nodes += sol.nodes;
        if sol.status != MipStatus::Optimal {
            return Err(SolveError::Mip { status: sol.status });
        }
        match oracle::separate_with_tol(&sol.x[..n], sol.objective, instance, opts.violation_tol)
        {
            None => {
                tiers = Some(sol.tiers);
                break;
            }
            Some(cut) => {
                if !add_cut(&mut lp, &mut seen, &cut.members) {
                    certified = false;
                    tiers = Some(sol.tiers);
                    break;
                }
                cuts += 1;
            }
        }
    }

    let Some(tiers) = tiers else {
        return Err(SolveError::IterationLimit { iterations, best_value: f64::NAN });
    };

    let mut accepted = Vec::new();
    let mut lottery = Vec::new();
    let mut rejected = Vec::new();
    for (i, t) in tiers.iter().enumerate() {
        match t {
            Tier::One => accepted.push(i),
            Tier::Tied => lottery.push(i),
            Tier::Zero => rejected.push(i),
        }
    }
    assert!(
        accepted.len() <= k && accepted.len() + lottery.len() >= k,
        "tier counts cannot meet the budget: {} accepted, {} in lottery, k = {k}",
        accepted.len(),
        lottery.len()
    );
    let mut c = if lottery.is_empty() {
        0.0
    } else {
        (k - accepted.len()) as f64 / lottery.len() as f64
    };
    if !lottery.is_empty() && c <= 0.0 {
        rejected.append(&mut lottery);
        rejected.sort_unstable();
        c = 0.0;
    } else if !lottery.is_empty() && c >= 1.0 {
        accepted.append(&mut lottery);
        accepted.sort_unstable();
        c = 0.0;
    }

    let mut p = vec![0.0; n];
    for &i in &accepted {
        p[i] = 1.0;
    }
    for &i in &lottery {
        p[i] = c;
    }
    let marginals = MarginalVector::new(p);
    let value = oracle::min_feasible_value(marginals.as_slice(), instance).0;
    Ok(UniformReport {
        marginals,
        value,
        lottery_probability: c,
        accepted,
        lottery,
        rejected,
        iterations,
        nodes,
        cuts,
        certified,
    })
}
