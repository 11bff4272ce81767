//! Problem instances and the interval order.
//!
//! A candidate is an interval [lower, upper] of plausible quality, optionally
//! with a point estimate inside it. Candidate `a` strictly dominates `b` when
//! `a.lower > b.upper + epsilon` (epsilon defaults to 0; touching intervals
//! overlap). A "feasible top-k set" is any k-subset that some ranking
//! consistent with the intervals puts on top, or equivalently a k-subset none
//! of whose members is dominated by an outsider.
//!
//! Invariants maintained here and relied on everywhere else:
//! - `above(i) + below(i) <= n - 1` (a candidate is never counted twice);
//! - `above(i) >= k` puts `i` in no feasible top-k set,
//!   `below(i) >= n - k` puts `i` in every one;
//! - a `MarginalVector` for budget k has entries in [0, 1] summing to k.

use crate::oracle;
use std::collections::HashSet;
use std::fmt;

/// Largest instance `enumerate_feasible_topk` will accept; the set count is
/// exponential and enumeration exists only to cross-check the oracle.
pub const ENUMERATION_LIMIT: usize = 20;

#[derive(Debug, Clone, PartialEq)]
pub enum ModelError {
    InvalidInterval { id: String, reason: String },
    DuplicateId(String),
    BudgetOutOfRange { budget: usize, n: usize },
    InvalidEpsilon(f64),
    EnumerationTooLarge { n: usize },
    InvalidMarginals(String),
}

impl fmt::Display for ModelError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ModelError::InvalidInterval { id, reason } => {
                write!(f, "invalid interval '{id}': {reason}")
            }
            ModelError::DuplicateId(id) => write!(f, "duplicate candidate id '{id}'"),
            ModelError::BudgetOutOfRange { budget, n } => {
                write!(f, "budget {budget} out of range for {n} candidates")
            }
            ModelError::InvalidEpsilon(e) => write!(f, "epsilon must be finite and >= 0, got {e}"),
            ModelError::EnumerationTooLarge { n } => {
                write!(f, "feasible-set enumeration supports at most {ENUMERATION_LIMIT} candidates, got {n}")
            }
            ModelError::InvalidMarginals(reason) => write!(f, "invalid marginals: {reason}"),
        }
    }
}

impl std::error::Error for ModelError {}

/// One candidate: an id, a quality interval, and an optional point estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct Interval {
    id: String,
    lower: f64,
    upper: f64,
    estimate: Option<f64>,
}

impl Interval {
    pub fn new(id: impl Into<String>, lower: f64, upper: f64) -> Result<Self, ModelError> {
        Self::build(id.into(), lower, upper, None)
    }

    pub fn with_estimate(
        id: impl Into<String>,
        lower: f64,
        upper: f64,
        estimate: f64,
    ) -> Result<Self, ModelError> {
        Self::build(id.into(), lower, upper, Some(estimate))
    }

    fn build(id: String, lower: f64, upper: f64, estimate: Option<f64>) -> Result<Self, ModelError> {
        if !lower.is_finite() || !upper.is_finite() {
            return Err(ModelError::InvalidInterval {
                id,
                reason: format!("bounds must be finite, got [{lower}, {upper}]"),
            });
        }
        if lower > upper {
            return Err(ModelError::InvalidInterval {
                id,
                reason: format!("lower {lower} exceeds upper {upper}"),
            });
        }
        if let Some(e) = estimate {
            if !e.is_finite() || e < lower || e > upper {
                return Err(ModelError::InvalidInterval {
                    id,
                    reason: format!("estimate {e} outside [{lower}, {upper}]"),
                });
            }
        }
        Ok(Interval { id, lower, upper, estimate })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn lower(&self) -> f64 {
        self.lower
    }

    pub fn upper(&self) -> f64 {
        self.upper
    }

    pub fn estimate(&self) -> Option<f64> {
        self.estimate
    }

    pub fn midpoint(&self) -> f64 {
        0.5 * (self.lower + self.upper)
    }
}

/// A selection problem: candidates plus the number `budget` to select.
#[derive(Debug, Clone)]
pub struct Instance {
    intervals: Vec<Interval>,
    budget: usize,
    epsilon: f64,
}

impl Instance {
    pub fn new(intervals: Vec<Interval>, budget: usize) -> Result<Self, ModelError> {
        Self::with_epsilon(intervals, budget, 0.0)
    }

    /// Like `new`, but candidate `a` dominates `b` only when
    /// `a.lower > b.upper + epsilon`.
    pub fn with_epsilon(
        intervals: Vec<Interval>,
        budget: usize,
        epsilon: f64,
    ) -> Result<Self, ModelError> {
        if !epsilon.is_finite() || epsilon < 0.0 {
            return Err(ModelError::InvalidEpsilon(epsilon));
        }
        if budget > intervals.len() {
            return Err(ModelError::BudgetOutOfRange { budget, n: intervals.len() });
        }
        let mut seen = HashSet::new();
        for iv in &intervals {
            if !seen.insert(iv.id.as_str()) {
                return Err(ModelError::DuplicateId(iv.id.clone()));
            }
        }
        Ok(Instance { intervals, budget, epsilon })
    }

    pub fn n(&self) -> usize {
        self.intervals.len()
    }

    pub fn budget(&self) -> usize {
        self.budget
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn interval(&self, i: usize) -> &Interval {
        &self.intervals[i]
    }

    /// Same candidates, different budget.
    pub fn with_budget(&self, budget: usize) -> Result<Self, ModelError> {
        if budget > self.n() {
            return Err(ModelError::BudgetOutOfRange { budget, n: self.n() });
        }
        Ok(Instance { intervals: self.intervals.clone(), budget, epsilon: self.epsilon })
    }

    /// Strict dominance: every quality consistent with `a` beats every
    /// quality consistent with `b`.
    pub fn dominates(&self, a: usize, b: usize) -> bool {
        self.intervals[a].lower > self.intervals[b].upper + self.epsilon
    }
}

/// Per-candidate marginal selection probabilities, aligned with the
/// instance's candidate order.
#[derive(Debug, Clone, PartialEq)]
pub struct MarginalVector(Vec<f64>);

impl MarginalVector {
    pub fn new(p: Vec<f64>) -> Self {
        MarginalVector(p)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, f64> {
        self.0.iter()
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Kahan-compensated sum, so validation does not hinge on the summation
    /// order of thousands of entries.
    pub fn sum(&self) -> f64 {
        let mut sum = 0.0;
        let mut carry = 0.0;
        for &x in &self.0 {
            let y = x - carry;
            let t = sum + y;
            carry = (t - sum) - y;
            sum = t;
        }
        sum
    }

    /// Checks entries lie in [0, 1] and the total equals `budget`, both
    /// within `tol`.
    pub fn validate(&self, budget: usize, tol: f64) -> Result<(), ModelError> {
        for (i, &p) in self.0.iter().enumerate() {
            if !p.is_finite() || p < -tol || p > 1.0 + tol {
                return Err(ModelError::InvalidMarginals(format!(
                    "entry {i} is {p}, outside [0, 1]"
                )));
            }
        }
        let sum = self.sum();
        if (sum - budget as f64).abs() > tol {
            return Err(ModelError::InvalidMarginals(format!(
                "total mass {sum} differs from budget {budget}"
            )));
        }
        Ok(())
    }
}

impl From<Vec<f64>> for MarginalVector {
    fn from(p: Vec<f64>) -> Self {
        MarginalVector(p)
    }
}

impl std::ops::Index<usize> for MarginalVector {
    type Output = f64;

    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// For each candidate, how many candidates sit strictly above it and strictly
/// below it in the interval order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderCounts {
    pub above: Vec<usize>,
    pub below: Vec<usize>,
}

/// Computes dominance counts in O(n log n) by binary-searching sorted bound
/// lists. The comparisons reproduce `Instance::dominates` bit for bit: both
/// sides evaluate `lower > upper + epsilon` on the same rounded sum.
pub fn order_counts(instance: &Instance) -> OrderCounts {
    let n = instance.n();
    let eps = instance.epsilon();
    let mut lowers: Vec<f64> = instance.intervals().iter().map(|iv| iv.lower()).collect();
    let mut uppers_eps: Vec<f64> = instance.intervals().iter().map(|iv| iv.upper() + eps).collect();
    lowers.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    uppers_eps.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());

    let mut above = Vec::with_capacity(n);
    let mut below = Vec::with_capacity(n);
    for iv in instance.intervals() {
        let threshold = iv.upper() + eps;
        // #{r : lower_r > upper_i + eps}
        above.push(n - lowers.partition_point(|&l| l <= threshold));
        // #{r : lower_i > upper_r + eps}
        below.push(uppers_eps.partition_point(|&ue| ue < iv.lower()));
    }
    OrderCounts { above, below }
}

/// Every k-subset that can be the top k under some ranking consistent with
/// the intervals, as sorted index lists in deterministic order. Exponential;
/// guarded by `ENUMERATION_LIMIT`.
pub fn enumerate_feasible_topk(instance: &Instance) -> Result<Vec<Vec<usize>>, ModelError> {
    let n = instance.n();
    if n > ENUMERATION_LIMIT {
        return Err(ModelError::EnumerationTooLarge { n });
    }
    let k = instance.budget();
    if k == 0 {
        return Ok(vec![vec![]]);
    }

    // dominators[j]: bitmask of candidates that strictly dominate j. A set T
    // is feasible iff every member's dominators are all inside T.
    let mut dominators = vec![0u32; n];
    for a in 0..n {
        for b in 0..n {
            if a != b && instance.dominates(a, b) {
                dominators[b] |= 1 << a;
            }
        }
    }

    let full: u32 = if n == 32 { u32::MAX } else { (1 << n) - 1 };
    let mut sets = Vec::new();
    // Gosper's hack: walk all n-bit masks with exactly k bits, ascending.
    let mut mask: u32 = (1 << k) - 1;
    while mask <= full {
        let feasible = (0..n)
            .filter(|&j| mask >> j & 1 == 1)
            .all(|j| dominators[j] & !mask == 0);
        if feasible {
            sets.push((0..n).filter(|&j| mask >> j & 1 == 1).collect());
        }
        // Next mask with the same popcount.
        let c = mask & mask.wrapping_neg();
        let r = mask + c;
        if r > full || c == 0 {
            break;
        }
        mask = r | (((mask ^ r) >> 2) / c);
    }
    Ok(sets)
}

/// The guaranteed expected number of deserving selections: the minimum of
/// `sum_{j in T} p_j` over feasible top-k sets `T`. Computed by the exact
/// polynomial oracle, never by enumeration.
pub fn worst_case_utility(p: &MarginalVector, instance: &Instance) -> f64 {
    debug_assert_eq!(p.len(), instance.n(), "marginals misaligned with instance");
    oracle::min_feasible_value(p.as_slice(), instance).0
}
