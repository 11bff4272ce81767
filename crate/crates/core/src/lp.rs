//! Dense bounded-variable simplex, plus a small branch-and-bound wrapper for
//! the three-valued master problems the uniform-lottery variant needs.
//!
//! The solver maximizes c'x over box bounds and Le/Ge/Eq rows. Every row gets
//! a slack column whose bounds encode the relation ([0, inf) for Le,
//! (-inf, 0] for Ge, [0, 0] for Eq); an artificial column is added only for
//! rows whose initial residual falls outside the slack bounds, which in the
//! cutting-plane LPs means exactly one: the budget row. Phase one maximizes
//! the negated artificial mass, after which artificials are locked to [0, 0]
//! and ignored by pricing. Reduced costs live in a separate row that is
//! pivoted along with the tableau and rebuilt from scratch periodically to
//! shed accumulated error.
//!
//! Pricing is Dantzig's rule, falling back to Bland's rule after a run of
//! degenerate pivots so cycling cannot persist. The ratio test covers bound
//! flips of the entering variable as well as basic variables hitting either
//! bound.

use std::collections::HashMap;

/// Reduced-cost threshold for pricing and minimum acceptable pivot magnitude.
const PIVOT_TOL: f64 = 1e-9;
/// Residual artificial mass below this counts as feasible after phase one.
const FEAS_TOL: f64 = 1e-8;
/// Objective gains below this count as a stalled (degenerate) pivot.
const STALL_GAIN: f64 = 1e-12;
/// Ties in the ratio test are resolved within this band.
const RATIO_TIE_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Relation {
    Le,
    Ge,
    Eq,
}

#[derive(Debug, Clone)]
pub struct LinearConstraint {
    /// Sparse (variable, coefficient) terms; repeated variables accumulate.
    pub coeffs: Vec<(usize, f64)>,
    pub relation: Relation,
    pub rhs: f64,
}

impl LinearConstraint {
    pub fn le(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint { coeffs, relation: Relation::Le, rhs }
    }

    pub fn ge(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint { coeffs, relation: Relation::Ge, rhs }
    }

    pub fn eq(coeffs: Vec<(usize, f64)>, rhs: f64) -> Self {
        LinearConstraint { coeffs, relation: Relation::Eq, rhs }
    }
}

/// A maximization problem. Bounds may be infinite on either side.
#[derive(Debug, Clone)]
pub struct LinearProgram {
    pub num_vars: usize,
    pub objective: Vec<f64>,
    pub bounds: Vec<(f64, f64)>,
    pub constraints: Vec<LinearConstraint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LpStatus {
    Optimal,
    Infeasible,
    Unbounded,
    IterationLimit,
}

#[derive(Debug, Clone)]
pub struct LpSolution {
    pub status: LpStatus,
    /// Structural variable values; best effort unless status is Optimal.
    pub x: Vec<f64>,
    pub objective: f64,
}

#[derive(Debug, Clone)]
pub struct SimplexOptions {
    pub max_pivots: usize,
    /// Consecutive stalled pivots before switching to Bland's rule.
    pub stall_limit: usize,
    /// Pivots between full reduced-cost rebuilds.
    pub rebuild_every: usize,
}

impl Default for SimplexOptions {
    fn default() -> Self {
        SimplexOptions { max_pivots: 1_000_000, stall_limit: 200, rebuild_every: 256 }
    }
}

pub fn solve_lp(lp: &LinearProgram) -> LpSolution {
    solve_lp_with(lp, &SimplexOptions::default())
}

pub fn solve_lp_with(lp: &LinearProgram, opts: &SimplexOptions) -> LpSolution {
    validate(lp);
    let mut s = Simplex::new(lp, opts);

    if s.first_art < s.cols {
        s.set_phase1_costs();
        match s.iterate() {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => unreachable!("iterate never reports infeasible"),
            // Phase one is bounded above by zero, so an unbounded ray here is
            // numerical failure; surface it as giving up rather than a claim
            // about the original program.
            LpStatus::Unbounded | LpStatus::IterationLimit => {
                return s.finish(lp, LpStatus::IterationLimit);
            }
        }
        if s.artificial_mass() > FEAS_TOL {
            return s.finish(lp, LpStatus::Infeasible);
        }
        s.lock_artificials();
    }

    s.set_phase2_costs(lp);
    let status = s.iterate();
    s.finish(lp, status)
}

fn validate(lp: &LinearProgram) {
    assert_eq!(lp.objective.len(), lp.num_vars, "objective length mismatch");
    assert_eq!(lp.bounds.len(), lp.num_vars, "bounds length mismatch");
    for (i, &(lo, hi)) in lp.bounds.iter().enumerate() {
        assert!(!lo.is_nan() && !hi.is_nan() && lo <= hi, "bad bounds on var {i}: [{lo}, {hi}]");
    }
    for (r, c) in lp.constraints.iter().enumerate() {
        assert!(c.rhs.is_finite(), "row {r} has non-finite rhs");
        for &(j, coef) in &c.coeffs {
            assert!(j < lp.num_vars, "row {r} references variable {j}");
            assert!(coef.is_finite(), "row {r} has non-finite coefficient on var {j}");
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum NbState {
    Lower,
    Upper,
    Free,
}

struct Simplex<'a> {
    opts: &'a SimplexOptions,
    rows: usize,
    cols: usize,
    num_vars: usize,
    /// First artificial column; cols when there are none.
    first_art: usize,
    /// Tableau rows, maintained as the basis inverse times the raw columns.
    a: Vec<Vec<f64>>,
    lo: Vec<f64>,
    hi: Vec<f64>,
    /// Phase-dependent objective per column.
    cost: Vec<f64>,
    /// Reduced costs, pivoted alongside `a`.
    z: Vec<f64>,
    basis: Vec<usize>,
    is_basic: Vec<bool>,
    /// Values of basic variables, by row.
    xb: Vec<f64>,
    /// Resting values of nonbasic variables, by column.
    value: Vec<f64>,
    state: Vec<NbState>,
    obj: f64,
    pivots: usize,
    stalled: usize,
    since_rebuild: usize,
}

impl<'a> Simplex<'a> {
    fn new(lp: &LinearProgram, opts: &'a SimplexOptions) -> Self {
        let rows = lp.constraints.len();
        let nv = lp.num_vars;

        let mut lo = Vec::with_capacity(nv + rows);
        let mut hi = Vec::with_capacity(nv + rows);
        let mut value = Vec::with_capacity(nv + rows);
        let mut state = Vec::with_capacity(nv + rows);
        for &(l, h) in &lp.bounds {
            lo.push(l);
            hi.push(h);
            if l.is_finite() {
                value.push(l);
                state.push(NbState::Lower);
            } else if h.is_finite() {
                value.push(h);
                state.push(NbState::Upper);
            } else {
                value.push(0.0);
                state.push(NbState::Free);
            }
        }

        // Slack bounds by relation, then row residuals at the initial point.
        let mut residual = Vec::with_capacity(rows);
        for c in &lp.constraints {
            let (sl, sh) = match c.relation {
                Relation::Le => (0.0, f64::INFINITY),
                Relation::Ge => (f64::NEG_INFINITY, 0.0),
                Relation::Eq => (0.0, 0.0),
            };
            lo.push(sl);
            hi.push(sh);
            let mut r = c.rhs;
            for &(j, coef) in &c.coeffs {
                r -= coef * value[j];
            }
            residual.push(r);
        }

        // Clamp each slack into its bounds; rows whose residual sticks out
        // get an artificial column carrying the overshoot.
        let mut art_rows = Vec::new();
        let mut slack_value = Vec::with_capacity(rows);
        for (i, &r) in residual.iter().enumerate() {
            let clamped = r.clamp(lo[nv + i], hi[nv + i]);
            slack_value.push(clamped);
            if r != clamped {
                art_rows.push((i, r - clamped));
            }
        }

        let first_art = nv + rows;
        let cols = first_art + art_rows.len();
        let mut a = vec![vec![0.0; cols]; rows];
        for (i, c) in lp.constraints.iter().enumerate() {
            for &(j, coef) in &c.coeffs {
                a[i][j] += coef;
            }
            a[i][nv + i] = 1.0;
        }

        let mut basis = vec![0usize; rows];
        let mut is_basic = vec![false; cols];
        let mut xb = vec![0.0; rows];
        for i in 0..rows {
            basis[i] = nv + i;
            xb[i] = residual[i];
        }
        for (i, &r) in residual.iter().enumerate() {
            value.push(slack_value[i]);
            state.push(if r > hi[nv + i] { NbState::Upper } else { NbState::Lower });
        }

        for (art_idx, &(row, overshoot)) in art_rows.iter().enumerate() {
            let col = first_art + art_idx;
            a[row][col] = 1.0;
            if overshoot > 0.0 {
                lo.push(0.0);
                hi.push(f64::INFINITY);
            } else {
                lo.push(f64::NEG_INFINITY);
                hi.push(0.0);
            }
            value.push(0.0);
            state.push(NbState::Lower);
            basis[row] = col;
            is_basic[nv + row] = false;
            xb[row] = overshoot;
            // The displaced slack rests at the bound it was clamped to.
        }
        for i in 0..rows {
            is_basic[basis[i]] = true;
        }

        Simplex {
            opts,
            rows,
            cols,
            num_vars: nv,
            first_art,
            a,
            lo,
            hi,
            cost: vec![0.0; cols],
            z: vec![0.0; cols],
            basis,
            is_basic,
            xb,
            value,
            state,
            obj: 0.0,
            pivots: 0,
            stalled: 0,
            since_rebuild: 0,
        }
    }

    fn set_phase1_costs(&mut self) {
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        for col in self.first_art..self.cols {
            self.cost[col] = if self.lo[col] == 0.0 { -1.0 } else { 1.0 };
        }
        self.rebuild();
    }

    fn set_phase2_costs(&mut self, lp: &LinearProgram) {
        self.cost.iter_mut().for_each(|c| *c = 0.0);
        self.cost[..self.num_vars].copy_from_slice(&lp.objective);
        self.rebuild();
    }

    /// Recomputes reduced costs and the tracked objective from scratch.
    fn rebuild(&mut self) {
        self.z.copy_from_slice(&self.cost);
        for r in 0..self.rows {
            let cb = self.cost[self.basis[r]];
            if cb != 0.0 {
                let row = &self.a[r];
                for (zj, &arj) in self.z.iter_mut().zip(row.iter()) {
                    *zj -= cb * arj;
                }
            }
        }
        for r in 0..self.rows {
            self.z[self.basis[r]] = 0.0;
        }

        let mut obj = 0.0;
        for j in 0..self.cols {
            if !self.is_basic[j] && self.cost[j] != 0.0 {
                obj += self.cost[j] * self.value[j];
            }
        }
        for r in 0..self.rows {
            obj += self.cost[self.basis[r]] * self.xb[r];
        }
        self.obj = obj;
        self.since_rebuild = 0;
    }

    fn artificial_mass(&self) -> f64 {
        let mut mass = 0.0;
        for r in 0..self.rows {
            if self.basis[r] >= self.first_art {
                mass += self.xb[r].abs();
            }
        }
        mass
    }

    fn lock_artificials(&mut self) {
        for col in self.first_art..self.cols {
            self.lo[col] = 0.0;
            self.hi[col] = 0.0;
            if !self.is_basic[col] {
                self.value[col] = 0.0;
            }
        }
        for r in 0..self.rows {
            if self.basis[r] >= self.first_art && self.xb[r].abs() <= FEAS_TOL {
                self.xb[r] = 0.0;
            }
        }
    }

    fn entering(&self, bland: bool) -> Option<(usize, f64)> {
        let mut best: Option<(usize, f64, f64)> = None;
        for j in 0..self.cols {
            if self.is_basic[j] || self.hi[j] - self.lo[j] <= 0.0 {
                continue;
            }
            let zj = self.z[j];
            let dir = match self.state[j] {
                NbState::Lower if zj > PIVOT_TOL => 1.0,
                NbState::Upper if zj < -PIVOT_TOL => -1.0,
                NbState::Free if zj > PIVOT_TOL => 1.0,
                NbState::Free if zj < -PIVOT_TOL => -1.0,
                _ => continue,
            };
            if bland {
                return Some((j, dir));
            }
            let score = zj.abs();
            if best.map_or(true, |(_, _, s)| score > s) {
                best = Some((j, dir, score));
            }
        }
        best.map(|(j, dir, _)| (j, dir))
    }

    fn iterate(&mut self) -> LpStatus {
        loop {
            if self.pivots >= self.opts.max_pivots {
                return LpStatus::IterationLimit;
            }
            if self.since_rebuild >= self.opts.rebuild_every {
                self.rebuild();
            }
            let bland = self.stalled >= self.opts.stall_limit;
            let Some((j_in, dir)) = self.entering(bland) else {
                return LpStatus::Optimal;
            };

            let col: Vec<f64> = (0..self.rows).map(|r| self.a[r][j_in]).collect();
            let range = self.hi[j_in] - self.lo[j_in];
            let mut t_best = if range.is_finite() { range } else { f64::INFINITY };
            // (row, leaving variable ends at its lower bound)
            let mut leave: Option<(usize, bool)> = None;
            for r in 0..self.rows {
                let alpha = dir * col[r];
                let (t, hits_lower) = if alpha > PIVOT_TOL {
                    let l = self.lo[self.basis[r]];
                    if l == f64::NEG_INFINITY {
                        continue;
                    }
                    ((self.xb[r] - l) / alpha, true)
                } else if alpha < -PIVOT_TOL {
                    let h = self.hi[self.basis[r]];
                    if h == f64::INFINITY {
                        continue;
                    }
                    ((h - self.xb[r]) / -alpha, false)
                } else {
                    continue;
                };
                let t = t.max(0.0);
                if t < t_best - RATIO_TIE_TOL {
                    t_best = t;
                    leave = Some((r, hits_lower));
                } else if t < t_best + RATIO_TIE_TOL {
                    if let Some((rb, _)) = leave {
                        let better = if bland {
                            self.basis[r] < self.basis[rb]
                        } else {
                            col[r].abs() > col[rb].abs()
                        };
                        if better {
                            t_best = t_best.min(t);
                            leave = Some((r, hits_lower));
                        }
                    }
                    // A tie against the bound flip keeps the flip: no basis
                    // change is the cheaper move.
                }
            }

            if t_best.is_infinite() {
                return LpStatus::Unbounded;
            }

            let delta = dir * t_best;
            let gain = self.z[j_in] * delta;
            for r in 0..self.rows {
                self.xb[r] -= delta * col[r];
            }
            self.obj += gain;

            match leave {
                None => {
                    self.value[j_in] = if dir > 0.0 { self.hi[j_in] } else { self.lo[j_in] };
                    self.state[j_in] = if dir > 0.0 { NbState::Upper } else { NbState::Lower };
                }
                Some((r, hits_lower)) => {
                    let j_out = self.basis[r];
                    let entering_val = self.value[j_in] + delta;
                    self.value[j_out] =
                        if hits_lower { self.lo[j_out] } else { self.hi[j_out] };
                    self.state[j_out] =
                        if hits_lower { NbState::Lower } else { NbState::Upper };
                    self.is_basic[j_out] = false;
                    self.basis[r] = j_in;
                    self.is_basic[j_in] = true;
                    self.xb[r] = entering_val;

                    let piv = self.a[r][j_in];
                    for v in self.a[r].iter_mut() {
                        *v /= piv;
                    }
                    self.a[r][j_in] = 1.0;
                    let prow = self.a[r].clone();
                    for (rr, row) in self.a.iter_mut().enumerate() {
                        if rr == r {
                            continue;
                        }
                        let f = row[j_in];
                        if f != 0.0 {
                            for (v, &pv) in row.iter_mut().zip(prow.iter()) {
                                *v -= f * pv;
                            }
                            row[j_in] = 0.0;
                        }
                    }
                    let fz = self.z[j_in];
                    if fz != 0.0 {
                        for (zj, &pv) in self.z.iter_mut().zip(prow.iter()) {
                            *zj -= fz * pv;
                        }
                    }
                    self.z[j_in] = 0.0;
                }
            }

            self.pivots += 1;
            self.since_rebuild += 1;
            self.stalled = if gain < STALL_GAIN { self.stalled + 1 } else { 0 };
        }
    }

    fn finish(&self, lp: &LinearProgram, status: LpStatus) -> LpSolution {
        let mut row_of = HashMap::with_capacity(self.rows);
        for r in 0..self.rows {
            row_of.insert(self.basis[r], r);
        }
        let x: Vec<f64> = (0..self.num_vars)
            .map(|j| match row_of.get(&j) {
                Some(&r) => self.xb[r],
                None => self.value[j],
            })
            .collect();
        let objective = lp.objective.iter().zip(&x).map(|(c, v)| c * v).sum();
        LpSolution { status, x, objective }
    }
}

/// Tier assignment for one variable in the three-valued problems: exactly
/// zero, exactly one, or tied to the shared lottery probability.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Tier {
    Zero,
    One,
    Tied,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MipStatus {
    Optimal,
    /// Search stopped early; the incumbent is feasible but unproven.
    NodeBudgetExhausted,
    Infeasible,
}

#[derive(Debug, Clone)]
pub struct MipOptions {
    pub node_budget: usize,
    /// How close a value must be to 0, 1, or the shared probability to count
    /// as on-tier.
    pub tier_tol: f64,
    pub simplex: SimplexOptions,
}

impl Default for MipOptions {
    fn default() -> Self {
        MipOptions { node_budget: 1_000_000, tier_tol: 1e-6, simplex: SimplexOptions::default() }
    }
}

#[derive(Debug, Clone)]
pub struct MipSolution {
    pub status: MipStatus,
    /// Structural values; empty when no feasible assignment was found.
    pub x: Vec<f64>,
    pub objective: f64,
    /// Tier per entry of `tied_vars`, in order.
    pub tiers: Vec<Tier>,
    pub nodes: usize,
}

#[derive(Clone)]
struct Node {
    /// Some(true) pins the slot's variable to 1, Some(false) to 0.
    fixed: Vec<Option<bool>>,
    /// True ties the slot's variable to the shared variable by an Eq row.
    tied: Vec<bool>,
}

/// Maximizes `base` subject to every variable in `tied_vars` taking a value
/// in {0, 1, c} where c is the single shared variable `shared_var`, and to
/// each disjunction (a, b) meaning x_a = 1 or x_b = 0. Branch and bound on
/// tier assignments; node relaxations drop the disjunctions and leave
/// unbranched variables continuous, so their optima bound every completion.
pub fn solve_mip_three_valued(
    base: &LinearProgram,
    tied_vars: &[usize],
    shared_var: usize,
    disjunctions: &[(usize, usize)],
    opts: &MipOptions,
) -> MipSolution {
    assert!(shared_var < base.num_vars, "shared variable out of range");
    let mut slot_of = vec![usize::MAX; base.num_vars];
    for (s, &v) in tied_vars.iter().enumerate() {
        assert!(v < base.num_vars, "tied variable out of range");
        assert_ne!(v, shared_var, "the shared variable cannot be tiered");
        slot_of[v] = s;
    }
    for &(a, b) in disjunctions {
        assert!(slot_of[a] != usize::MAX && slot_of[b] != usize::MAX,
            "disjunction endpoints must be tiered variables");
    }

    let n_slots = tied_vars.len();
    let mut stack = vec![Node { fixed: vec![None; n_slots], tied: vec![false; n_slots] }];
    let mut nodes = 0usize;
    let mut exhausted = false;
    let mut best: Option<(f64, Vec<f64>)> = None;

    while let Some(node) = stack.pop() {
        if nodes >= opts.node_budget {
            exhausted = true;
            break;
        }
        nodes += 1;

        let lp = node_lp(base, tied_vars, shared_var, &node);
        let sol = solve_lp_with(&lp, &opts.simplex);
        match sol.status {
            LpStatus::Optimal => {}
            LpStatus::Infeasible => continue,
            LpStatus::Unbounded | LpStatus::IterationLimit => {
                // Cannot bound this subtree; dropping it makes the final
                // answer a best-effort one, which the status reports.
                exhausted = true;
                continue;
            }
        }
        if let Some((bv, _)) = &best {
            if sol.objective <= bv + 1e-9 {
                continue;
            }
        }

        // Branch on a violated validity disjunction first: any completion
        // must pin one side, so the two children cover the node.
        let violated = disjunctions
            .iter()
            .find(|&&(a, b)| sol.x[a] < 1.0 - opts.tier_tol && sol.x[b] > opts.tier_tol);
        if let Some(&(a, b)) = violated {
            if let Some(child) = child_fix(&node, slot_of[b], false) {
                stack.push(child);
            }
            if let Some(child) = child_fix(&node, slot_of[a], true) {
                stack.push(child);
            }
            continue;
        }

        // Then the variable farthest from every tier, split three ways.
        let c_val = sol.x[shared_var];
        let mut worst: Option<(usize, f64)> = None;
        for (s, &v) in tied_vars.iter().enumerate() {
            if node.fixed[s].is_some() || node.tied[s] {
                continue;
            }
            let xv = sol.x[v];
            let d = xv.abs().min((xv - 1.0).abs()).min((xv - c_val).abs());
            if d > opts.tier_tol && worst.map_or(true, |(_, wd)| d > wd) {
                worst = Some((s, d));
            }
        }
        if let Some((s, _)) = worst {
            if let Some(child) = child_fix(&node, s, false) {
                stack.push(child);
            }
            if let Some(child) = child_fix(&node, s, true) {
                stack.push(child);
            }
            let mut child = node.clone();
            child.tied[s] = true;
            stack.push(child);
            continue;
        }

        // On tier and disjunction-clean: a new incumbent.
        best = Some((sol.objective, sol.x));
    }

    let Some((raw_obj, raw_x)) = best else {
        return MipSolution {
            status: if exhausted { MipStatus::NodeBudgetExhausted } else { MipStatus::Infeasible },
            x: Vec::new(),
            objective: f64::NEG_INFINITY,
            tiers: Vec::new(),
            nodes,
        };
    };

    // Snap the incumbent to its exact tier pattern and re-solve once, so the
    // reported values are clean rather than within tier_tol of clean.
    let c_val = raw_x[shared_var];
    let tiers: Vec<Tier> = tied_vars.iter().map(|&v| classify(raw_x[v], c_val)).collect();
    let mut polish = base.clone();
    for (slot, &v) in tied_vars.iter().enumerate() {
        match tiers[slot] {
            Tier::Zero => polish.bounds[v] = (0.0, 0.0),
            Tier::One => polish.bounds[v] = (1.0, 1.0),
            Tier::Tied => polish
                .constraints
                .push(LinearConstraint::eq(vec![(v, 1.0), (shared_var, -1.0)], 0.0)),
        }
    }
    let polished = solve_lp_with(&polish, &opts.simplex);
    let disjunctions_hold = |x: &[f64]| {
        disjunctions
            .iter()
            .all(|&(a, b)| x[a] >= 1.0 - opts.tier_tol || x[b] <= opts.tier_tol)
    };
    let (x, objective) = if polished.status == LpStatus::Optimal && disjunctions_hold(&polished.x)
    {
        (polished.x, polished.objective)
    } else {
        (raw_x, raw_obj)
    };

    MipSolution {
        status: if exhausted { MipStatus::NodeBudgetExhausted } else { MipStatus::Optimal },
        x,
        objective,
        tiers,
        nodes,
    }
}

fn node_lp(
    base: &LinearProgram,
    tied_vars: &[usize],
    shared_var: usize,
    node: &Node,
) -> LinearProgram {
    let mut lp = base.clone();
    for (slot, &v) in tied_vars.iter().enumerate() {
        if let Some(one) = node.fixed[slot] {
            lp.bounds[v] = if one { (1.0, 1.0) } else { (0.0, 0.0) };
        }
        if node.tied[slot] {
            lp.constraints
                .push(LinearConstraint::eq(vec![(v, 1.0), (shared_var, -1.0)], 0.0));
        }
    }
    lp
}

fn child_fix(node: &Node, slot: usize, one: bool) -> Option<Node> {
    match node.fixed[slot] {
        Some(existing) if existing != one => None,
        _ => {
            let mut child = node.clone();
            child.fixed[slot] = Some(one);
            Some(child)
        }
    }
}

/// Nearest tier, preferring Zero, then One, on exact ties; that keeps the
/// pinned side of a satisfied disjunction pinned when the shared probability
/// collapses onto 0 or 1.
fn classify(x: f64, c: f64) -> Tier {
    let d0 = x.abs();
    let d1 = (x - 1.0).abs();
    let dc = (x - c).abs();
    if d0 <= d1 && d0 <= dc {
        Tier::Zero
    } else if d1 <= dc {
        Tier::One
    } else {
        Tier::Tied
    }
}
