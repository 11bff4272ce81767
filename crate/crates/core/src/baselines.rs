//! Reference selection rules to compare the maximin solver against.
//!
//! All three work from a point score per candidate: the reported estimate
//! when present, the interval midpoint otherwise. They differ in what they
//! do with it.
//!
//! * [`deterministic_topk`] ranks by score and takes the best k, ties to the
//!   earlier candidate. The classic panel decision.
//! * [`randomize_above_threshold`] draws the committee uniformly from every
//!   candidate whose interval reaches a threshold, for several choices of
//!   threshold.
//! * [`swiss_nsf`] accepts candidates whose whole interval clears the k-th
//!   score, rejects those whose interval sits entirely below it, and holds a
//!   uniform lottery over the undecided middle. This mirrors the lottery
//!   procedure used by the Swiss National Science Foundation.

use crate::model::{Instance, Interval, MarginalVector};

#[derive(Debug, Clone, PartialEq)]
pub enum BaselineError {
    /// The threshold did not define a usable eligible set.
    InvalidThreshold(String),
    /// The score layout broke an internal invariant; not expected for
    /// instances whose estimates passed validation.
    InvalidEstimates(String),
}

impl std::fmt::Display for BaselineError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            BaselineError::InvalidThreshold(msg) => write!(f, "invalid threshold: {msg}"),
            BaselineError::InvalidEstimates(msg) => write!(f, "invalid estimates: {msg}"),
        }
    }
}

impl std::error::Error for BaselineError {}

/// Point score used by every baseline: the estimate if reported, otherwise
/// the interval midpoint. Estimates are validated to lie inside the interval
/// when the instance is built, so this always lands between the bounds.
pub fn effective_estimate(iv: &Interval) -> f64 {
    iv.estimate().unwrap_or_else(|| iv.midpoint())
}

/// How `randomize_above_threshold` picks its cutoff.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdPolicy {
    /// A caller-supplied score.
    Fixed(f64),
    /// The k-th largest effective estimate. Never leaves the budget unfilled:
    /// at least the k top-scored candidates have an upper bound at or above
    /// their own score.
    KthEstimate,
    /// The k-th largest interval lower bound; a more forgiving cutoff.
    KthLowerBound,
}

impl Default for ThresholdPolicy {
    fn default() -> Self {
        ThresholdPolicy::KthEstimate
    }
}

#[derive(Debug, Clone)]
pub struct RatOutcome {
    pub marginals: MarginalVector,
    /// True when fewer than k candidates reached the threshold. Everyone
    /// eligible is then accepted outright and the marginals sum to less than
    /// the budget; only possible under [`ThresholdPolicy::Fixed`].
    pub under_budget: bool,
}

/// Takes the k best by score, deterministically.
pub fn deterministic_topk(instance: &Instance) -> MarginalVector {
    let n = instance.n();
    let mut order: Vec<usize> = (0..n).collect();
    let scores: Vec<f64> = instance.intervals().iter().map(effective_estimate).collect();
    order.sort_unstable_by(|&x, &y| {
        scores[y].partial_cmp(&scores[x]).unwrap().then(x.cmp(&y))
    });
    let mut p = vec![0.0; n];
    for &i in &order[..instance.budget()] {
        p[i] = 1.0;
    }
    MarginalVector::new(p)
}

/// Uniform lottery over everyone whose interval upper bound reaches the
/// threshold.
pub fn randomize_above_threshold(
    instance: &Instance,
    policy: ThresholdPolicy,
) -> Result<RatOutcome, BaselineError> {
    let n = instance.n();
    let k = instance.budget();
    if k == 0 {
        return Ok(RatOutcome {
            marginals: MarginalVector::new(vec![0.0; n]),
            under_budget: false,
        });
    }

    let threshold = match policy {
        ThresholdPolicy::Fixed(t) => {
            if !t.is_finite() {
                return Err(BaselineError::InvalidThreshold(format!(
                    "threshold must be finite, got {t}"
                )));
            }
            t
        }
        ThresholdPolicy::KthEstimate => {
            kth_largest(instance.intervals().iter().map(effective_estimate), k)
        }
        ThresholdPolicy::KthLowerBound => {
            kth_largest(instance.intervals().iter().map(|iv| iv.lower()), k)
        }
    };

    let eligible: Vec<usize> = (0..n)
        .filter(|&i| instance.interval(i).upper() >= threshold)
        .collect();
    let mut p = vec![0.0; n];
    if eligible.len() >= k {
        let share = k as f64 / eligible.len() as f64;
        for &i in &eligible {
            p[i] = share;
        }
        Ok(RatOutcome { marginals: MarginalVector::new(p), under_budget: false })
    } else {
        for &i in &eligible {
            p[i] = 1.0;
        }
        Ok(RatOutcome { marginals: MarginalVector::new(p), under_budget: true })
    }
}

/// Accept candidates whose interval clears the k-th score outright, reject
/// those entirely below it, and split the remaining budget uniformly over
/// the undecided middle.
pub fn swiss_nsf(instance: &Instance) -> Result<MarginalVector, BaselineError> {
    let n = instance.n();
    let k = instance.budget();
    if k == 0 {
        return Ok(MarginalVector::new(vec![0.0; n]));
    }
    if k == n {
        return Ok(MarginalVector::new(vec![1.0; n]));
    }

    let scores: Vec<f64> = instance.intervals().iter().map(effective_estimate).collect();
    let pivot = kth_largest(scores.iter().copied(), k);

    let mut p = vec![0.0; n];
    let mut accepted = 0usize;
    let mut middle = Vec::new();
    for i in 0..n {
        let iv = instance.interval(i);
        if iv.lower() > pivot {
            p[i] = 1.0;
            accepted += 1;
        } else if iv.upper() >= pivot {
            middle.push(i);
        }
    }

    // A candidate with lower > pivot scores above the pivot, and only k - 1
    // candidates can score strictly above the k-th largest score, so some
    // budget is always left for the lottery. Likewise the k top scorers all
    // have upper >= pivot, so the middle is large enough to absorb it.
    if accepted >= k || accepted + middle.len() < k {
        return Err(BaselineError::InvalidEstimates(format!(
            "{accepted} accepted and {} undecided cannot fill a budget of {k}",
            middle.len()
        )));
    }
    let share = (k - accepted) as f64 / middle.len() as f64;
    for &i in &middle {
        p[i] = share;
    }
    Ok(MarginalVector::new(p))
}

fn kth_largest(values: impl Iterator<Item = f64>, k: usize) -> f64 {
    let mut v: Vec<f64> = values.collect();
    v.sort_unstable_by(|a, b| b.partial_cmp(a).unwrap());
    v[k - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn band(budget: usize) -> Instance {
        Instance::new(
            vec![
                Interval::with_estimate("1", 5.0, 7.0, 6.0).unwrap(),
                Interval::with_estimate("2", 4.0, 6.0, 4.0).unwrap(),
                Interval::with_estimate("3", 1.0, 4.5, 2.75).unwrap(),
                Interval::with_estimate("4", 1.0, 4.5, 2.75).unwrap(),
            ],
            budget,
        )
        .unwrap()
    }

    fn assert_close(got: &MarginalVector, want: &[f64]) {
        for (i, (g, w)) in got.iter().zip(want).enumerate() {
            assert!((g - w).abs() < 1e-12, "entry {i}: got {g}, want {w}");
        }
    }

    #[test]
    fn topk_takes_the_best_scores() {
        assert_close(&deterministic_topk(&band(2)), &[1.0, 1.0, 0.0, 0.0]);
        assert_close(&deterministic_topk(&band(1)), &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn topk_breaks_ties_toward_earlier_candidates() {
        let inst = Instance::new(
            vec![
                Interval::new("a", 0.0, 4.0).unwrap(),
                Interval::new("b", 0.0, 4.0).unwrap(),
                Interval::new("c", 0.0, 4.0).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_close(&deterministic_topk(&inst), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn topk_prefers_estimates_over_midpoints() {
        // Wide interval, strong reported score: the estimate should rank it
        // first even though its midpoint is lowest.
        let inst = Instance::new(
            vec![
                Interval::with_estimate("wide", 0.0, 10.0, 9.0).unwrap(),
                Interval::new("mid", 5.0, 6.0).unwrap(),
                Interval::new("low", 4.0, 5.0).unwrap(),
            ],
            1,
        )
        .unwrap();
        assert_close(&deterministic_topk(&inst), &[1.0, 0.0, 0.0]);
    }

    #[test]
    fn swiss_band_budget_one_randomizes_the_top_pair() {
        let p = swiss_nsf(&band(1)).unwrap();
        assert_close(&p, &[0.5, 0.5, 0.0, 0.0]);
    }

    #[test]
    fn swiss_band_budget_two_accepts_the_clear_leader() {
        let p = swiss_nsf(&band(2)).unwrap();
        assert_close(&p, &[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        p.validate(2, 1e-12).unwrap();
    }

    #[test]
    fn swiss_degenerates_to_uniform_when_everyone_overlaps() {
        let inst = Instance::new(
            (0..4)
                .map(|i| Interval::new(i.to_string(), 1.0, 9.0).unwrap())
                .collect(),
            2,
        )
        .unwrap();
        assert_close(&swiss_nsf(&inst).unwrap(), &[0.5; 4]);
    }

    #[test]
    fn swiss_handles_trivial_budgets() {
        assert_close(&swiss_nsf(&band(0)).unwrap(), &[0.0; 4]);
        assert_close(&swiss_nsf(&band(4)).unwrap(), &[1.0; 4]);
    }

    #[test]
    fn rat_kth_estimate_spreads_over_reachable_candidates() {
        let out = randomize_above_threshold(&band(2), ThresholdPolicy::KthEstimate).unwrap();
        assert!(!out.under_budget);
        assert_close(&out.marginals, &[0.5; 4]);

        let out = randomize_above_threshold(&band(2), ThresholdPolicy::KthLowerBound).unwrap();
        assert!(!out.under_budget);
        assert_close(&out.marginals, &[0.5; 4]);
    }

    #[test]
    fn rat_fixed_threshold_can_leave_budget_unfilled() {
        let out = randomize_above_threshold(&band(2), ThresholdPolicy::Fixed(6.5)).unwrap();
        assert!(out.under_budget);
        assert_close(&out.marginals, &[1.0, 0.0, 0.0, 0.0]);
    }

    #[test]
    fn rat_rejects_non_finite_thresholds() {
        let err =
            randomize_above_threshold(&band(2), ThresholdPolicy::Fixed(f64::NAN)).unwrap_err();
        assert!(matches!(err, BaselineError::InvalidThreshold(_)));
    }

    #[test]
    fn rat_zero_budget_selects_nobody() {
        let out = randomize_above_threshold(&band(0), ThresholdPolicy::KthEstimate).unwrap();
        assert!(!out.under_budget);
        assert_close(&out.marginals, &[0.0; 4]);
    }
}
