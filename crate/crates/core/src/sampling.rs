//! Systematic sampling of a fixed-size committee from marginals.
//!
//! Given marginals p that sum to the budget k, lay the candidates out on a
//! segment of length k, each owning an interval as long as its probability,
//! then throw a single uniform draw u and select whoever owns u, u+1, ...,
//! u+k-1. Every candidate is picked with probability exactly p_i, and since
//! no interval is longer than 1, the k hits land on k distinct candidates.
//!
//! Candidates are laid out in a seeded random order. A fixed order would
//! correlate neighbours (adjacent candidates could never be picked together
//! when their combined mass is below 1); the shuffle spreads that negative
//! correlation evenly.
//!
//! The whole procedure is a pure function of (marginals, budget, seed), so a
//! selection can be re-run and checked by anyone. [`AuditRecord`] captures
//! the intermediate values; [`verify_audit`] replays the record against the
//! published marginals and flags any discrepancy.

use serde::{Deserialize, Serialize};

use crate::model::{MarginalVector, ModelError};
use crate::rng::Rng;

/// Slack allowed between the marginal sum and the budget. Marginals straight
/// out of the solver carry linear-programming residuals of roughly this size.
pub const DEFAULT_SAMPLE_TOL: f64 = 1e-7;

/// Everything needed to replay one selection.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AuditRecord {
    pub seed: u64,
    pub budget: usize,
    /// The single uniform draw in [0, 1), taken after the shuffle.
    pub draw: f64,
    /// Candidate layout on the segment: `permutation[j]` is the original
    /// index placed at slot j.
    pub permutation: Vec<usize>,
    /// Selected original indices, ascending.
    pub selected: Vec<usize>,
}

impl AuditRecord {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("audit records always serialize")
    }

    pub fn from_json(text: &str) -> Result<AuditRecord, serde_json::Error> {
        serde_json::from_str(text)
    }
}

/// Draws a committee of exactly `budget` candidates with inclusion
/// probabilities `p`.
pub fn systematic_sample(
    p: &MarginalVector,
    budget: usize,
    seed: u64,
) -> Result<Vec<usize>, ModelError> {
    Ok(audit_record(p, budget, seed)?.selected)
}

/// Runs the sampler and keeps the intermediate values for later replay.
pub fn audit_record(
    p: &MarginalVector,
    budget: usize,
    seed: u64,
) -> Result<AuditRecord, ModelError> {
    p.validate(budget, DEFAULT_SAMPLE_TOL)?;
    let n = p.len();

    let mut rng = Rng::new(seed);
    let mut permutation: Vec<usize> = (0..n).collect();
    rng.shuffle(&mut permutation);
    let draw = rng.next_f64();

    // Cumulative interval ends in shuffled order. The final end is pinned to
    // the exact budget so the last interval absorbs any rounding drift.
    let mut ends = Vec::with_capacity(n + 1);
    ends.push(0.0);
    let mut acc = 0.0;
    for &orig in &permutation {
        acc += p[orig].clamp(0.0, 1.0);
        ends.push(acc);
    }
    ends[n] = budget as f64;

    let mut selected = Vec::with_capacity(budget);
    for m in 0..budget {
        let t = draw + m as f64;
        // Number of interval ends at or below t, minus the leading zero:
        // the slot whose half-open interval contains t. Zero-length slots
        // are skipped automatically because their start equals their end.
        let slot = ends.partition_point(|&s| s <= t) - 1;
        selected.push(permutation[slot]);
    }
    selected.sort_unstable();
    debug_assert!(selected.windows(2).all(|w| w[0] < w[1]), "sampled a candidate twice");

    Ok(AuditRecord { seed, budget, draw, permutation, selected })
}

/// Replays `record` against `p` and reports whether every field matches.
pub fn verify_audit(p: &MarginalVector, record: &AuditRecord) -> bool {
    match audit_record(p, record.budget, record.seed) {
        Ok(replayed) => replayed == *record,
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mv(values: &[f64]) -> MarginalVector {
        MarginalVector::new(values.to_vec())
    }

    #[test]
    fn frequencies_track_the_marginals() {
        let p = mv(&[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let mut hits = [0usize; 4];
        let trials = 20_000;
        for seed in 0..trials {
            for &i in &systematic_sample(&p, 2, seed).unwrap() {
                hits[i] += 1;
            }
        }
        for (i, &h) in hits.iter().enumerate() {
            let freq = h as f64 / trials as f64;
            assert!(
                (freq - p[i]).abs() < 0.015,
                "candidate {i}: frequency {freq} vs marginal {}",
                p[i]
            );
        }
    }

    #[test]
    fn certain_and_impossible_candidates_are_respected() {
        let p = mv(&[1.0, 0.0, 0.5, 0.5]);
        for seed in 0..500 {
            let s = systematic_sample(&p, 2, seed).unwrap();
            assert_eq!(s.len(), 2);
            assert!(s.contains(&0), "seed {seed}: certain candidate missing");
            assert!(!s.contains(&1), "seed {seed}: impossible candidate selected");
        }
    }

    #[test]
    fn draws_exactly_k_distinct_candidates() {
        use crate::rng::Rng;
        let mut rng = Rng::new(42);
        for trial in 0..100 {
            let n = 2 + rng.below(10);
            let k = 1 + rng.below(n);
            // Random weights scaled to sum to k, then capped at 1 with the
            // excess pushed onto the others until it fits.
            let mut w: Vec<f64> = (0..n).map(|_| rng.next_f64() + 1e-3).collect();
            let total: f64 = w.iter().sum();
            for x in &mut w {
                *x *= k as f64 / total;
            }
            for _ in 0..64 {
                let excess: f64 = w.iter().map(|&x| (x - 1.0).max(0.0)).sum();
                if excess < 1e-12 {
                    break;
                }
                let room: f64 = w.iter().map(|&x| (1.0 - x).max(0.0)).sum();
                for x in &mut w {
                    if *x > 1.0 {
                        *x = 1.0;
                    } else {
                        *x += excess * (1.0 - *x) / room;
                    }
                }
            }
            let p = mv(&w);
            let s = systematic_sample(&p, k, trial as u64).unwrap();
            assert_eq!(s.len(), k, "trial {trial}");
            assert!(s.windows(2).all(|w| w[0] < w[1]), "trial {trial}: repeat");
            assert!(s.iter().all(|&i| i < n), "trial {trial}: out of range");
        }
    }

    #[test]
    fn same_seed_replays_identically() {
        let p = mv(&[0.7, 0.6, 0.4, 0.3]);
        let a = audit_record(&p, 2, 9001).unwrap();
        let b = audit_record(&p, 2, 9001).unwrap();
        assert_eq!(a, b);
        let c = audit_record(&p, 2, 9002).unwrap();
        assert_ne!(a.permutation.clone(), c.permutation, "independent seeds collided");
    }

    #[test]
    fn audit_records_round_trip_through_json() {
        let p = mv(&[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let record = audit_record(&p, 2, 77).unwrap();
        let parsed = AuditRecord::from_json(&record.to_json()).unwrap();
        assert_eq!(record, parsed);
        assert!(verify_audit(&p, &parsed));
    }

    #[test]
    fn tampered_records_fail_verification() {
        let p = mv(&[1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let honest = audit_record(&p, 2, 123).unwrap();

        let mut swapped = honest.clone();
        swapped.selected = vec![2, 3];
        if swapped.selected == honest.selected {
            swapped.selected = vec![0, 1];
        }
        assert!(!verify_audit(&p, &swapped));

        let mut redrawn = honest.clone();
        redrawn.draw = (redrawn.draw + 0.37) % 1.0;
        assert!(!verify_audit(&p, &redrawn));

        let mut heavier = honest;
        heavier.budget = 3;
        assert!(!verify_audit(&p, &heavier));
    }

    #[test]
    fn marginals_must_sum_to_the_budget() {
        let p = mv(&[0.5, 0.5, 0.5]);
        let err = systematic_sample(&p, 2, 1).unwrap_err();
        assert!(matches!(err, ModelError::InvalidMarginals(_)));
    }
}
