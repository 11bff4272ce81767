//! Randomized top-k selection from quality intervals.
//!
//! Given candidates whose merit is known only up to an interval, this crate
//! computes the selection lottery that maximizes the worst-case number of
//! deserving candidates chosen, over every ranking consistent with the
//! intervals. The optimum is found by a cutting-plane loop around an exact
//! polynomial separation oracle, then post-processed so no chosen candidate
//! can be dominated by an unchosen one, and finally realized by an auditable
//! systematic-sampling draw.
//!
//! Alongside the optimal rule the crate ships the common baselines
//! (deterministic top-k, randomize-above-threshold, the Swiss NSF rule),
//! executable axiom checks, and a synthetic review-data generator for
//! comparing rules under reviewer miscalibration.

pub mod axioms;
pub mod baselines;
pub mod datagen;
pub mod expost;
pub mod lp;
pub mod model;
pub mod oracle;
pub mod rng;
pub mod rules;
pub mod sampling;
pub mod solver;

pub use model::{Instance, Interval, MarginalVector, OrderCounts};
pub use oracle::Cut;
pub use rules::{Method, SelectionRule};
pub use solver::{ChainPartition, SolveOptions, SolveReport};
