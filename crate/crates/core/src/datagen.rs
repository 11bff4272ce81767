//! Synthetic peer review and the simulation harness.
//!
//! The generative story: proposal p has a latent quality theta_p, and a
//! review of it by reviewer r reports
//!
//! ```text
//! y_pr = a_r * theta_p + b_r + noise,    clamped to the score scale
//! ```
//!
//! where b_r is the reviewer's fixed generosity offset and a_r a fixed
//! severity slope. Raising the bias spread makes panels less comparable,
//! which is the miscalibration knob the experiments turn. Each reviewer
//! covers a fixed quota of uniformly chosen proposals, so per-proposal
//! coverage is uneven and can be zero.
//!
//! Two ways of turning a proposal's observed scores into a quality interval:
//!
//! * **Partial-panel bounds** ([`manski_intervals`]): treat the unseen
//!   reviews from the rest of the pool as if they could be anything on the
//!   scale. The interval is the range of the full-panel mean over every
//!   completion; its width depends only on how much of the pool was seen.
//! * **Leave-one-out bounds** ([`loo_intervals`]): the span of the observed
//!   mean as each single review is withheld; an interval from the data's own
//!   sensitivity rather than from missingness.
//!
//! [`run_comparison`] generates many trials, runs every requested rule, and
//! scores each against the latent truth; rows come back tidy for CSV export.

use std::fmt;
use std::io::Write;

use crate::model::{Instance, Interval, ModelError};
use crate::rng::Rng;
use crate::rules::Method;

#[derive(Debug, Clone)]
pub struct MiscalParams {
    pub proposals: usize,
    /// Size of the reviewer pool. Partial-panel bounds treat the pool as the
    /// hypothetical full panel for every proposal.
    pub reviewers: usize,
    /// How many distinct proposals each reviewer covers.
    pub reviews_per_reviewer: usize,
    pub theta_mean: f64,
    pub theta_sd: f64,
    /// Spread of the fixed per-reviewer generosity offsets.
    pub bias_sd: f64,
    /// Spread of the per-review noise.
    pub noise_sd: f64,
    /// Spread of the unit-mean severity slopes; zero means every reviewer
    /// has slope one.
    pub severity_sd: f64,
    pub scale_min: f64,
    pub scale_max: f64,
    /// Round scores to whole points, as rubric-based panels do.
    pub integer_scores: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvalidParams(pub String);

impl fmt::Display for InvalidParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "invalid generator parameters: {}", self.0)
    }
}

impl std::error::Error for InvalidParams {}

impl MiscalParams {
    /// A small pool covering a big docket: ten reviewers, eighty proposals
    /// each, so a typical proposal sees two or three of the ten.
    pub fn small_panel(bias_sd: f64) -> Self {
        MiscalParams {
            proposals: 350,
            reviewers: 10,
            reviews_per_reviewer: 80,
            theta_mean: 5.5,
            theta_sd: 2.0,
            bias_sd,
            noise_sd: 0.5,
            severity_sd: 0.0,
            scale_min: 1.0,
            scale_max: 10.0,
            integer_scores: false,
        }
    }

    /// A conference-sized pool spread thin: a thousand reviewers, five
    /// papers each, about five reviews per paper.
    pub fn large_pool(bias_sd: f64) -> Self {
        MiscalParams {
            proposals: 1000,
            reviewers: 1000,
            reviews_per_reviewer: 5,
            theta_mean: 5.5,
            theta_sd: 2.0,
            bias_sd,
            noise_sd: 0.5,
            severity_sd: 0.0,
            scale_min: 1.0,
            scale_max: 10.0,
            integer_scores: false,
        }
    }

    pub fn validate(&self) -> Result<(), InvalidParams> {
        if self.proposals == 0 || self.reviewers == 0 {
            return Err(InvalidParams("need at least one proposal and one reviewer".into()));
        }
        if self.reviews_per_reviewer > self.proposals {
            return Err(InvalidParams(format!(
                "each reviewer covers {} proposals but only {} exist",
                self.reviews_per_reviewer, self.proposals
            )));
        }
        for (name, sd) in [
            ("theta_sd", self.theta_sd),
            ("bias_sd", self.bias_sd),
            ("noise_sd", self.noise_sd),
            ("severity_sd", self.severity_sd),
        ] {
            if !(sd >= 0.0) {
                return Err(InvalidParams(format!("{name} must be nonnegative, got {sd}")));
            }
        }
        if !(self.scale_min <= self.scale_max) {
            return Err(InvalidParams(format!(
                "score scale [{}, {}] is inverted",
                self.scale_min, self.scale_max
            )));
        }
        Ok(())
    }
}

/// Observed scores plus the latent truth they came from.
#[derive(Debug, Clone)]
pub struct ReviewMatrix {
    /// Latent quality per proposal.
    pub theta: Vec<f64>,
    /// Observed scores per proposal; may be empty for uncovered proposals.
    pub scores: Vec<Vec<f64>>,
    /// Reviewer ids aligned with `scores`.
    pub reviewers: Vec<Vec<usize>>,
    pub pool_size: usize,
}

/// Draws a full synthetic review round: fixed reviewer offsets and slopes,
/// latent qualities, then each reviewer's quota of uniformly chosen
/// proposals.
pub fn generate_reviews(
    params: &MiscalParams,
    rng: &mut Rng,
) -> Result<ReviewMatrix, InvalidParams> {
    params.validate()?;
    let biases: Vec<f64> = (0..params.reviewers).map(|_| rng.normal(0.0, params.bias_sd)).collect();
    let slopes: Vec<f64> = (0..params.reviewers)
        .map(|_| {
            if params.severity_sd == 0.0 {
                1.0
            } else {
                rng.unit_mean_log_normal(params.severity_sd)
            }
        })
        .collect();
    let theta: Vec<f64> =
        (0..params.proposals).map(|_| rng.normal(params.theta_mean, params.theta_sd)).collect();

    let mut scores = vec![Vec::new(); params.proposals];
    let mut reviewers = vec![Vec::new(); params.proposals];
    let mut docket: Vec<usize> = (0..params.proposals).collect();
    for r in 0..params.reviewers {
        rng.shuffle(&mut docket);
        for &p in &docket[..params.reviews_per_reviewer] {
            let raw = slopes[r] * theta[p] + biases[r] + rng.normal(0.0, params.noise_sd);
            let clamped = raw.clamp(params.scale_min, params.scale_max);
            scores[p].push(if params.integer_scores { clamped.round() } else { clamped });
            reviewers[p].push(r);
        }
    }

    Ok(ReviewMatrix { theta, scores, reviewers, pool_size: params.reviewers })
}

/// Randomly withholds each score with probability `fraction`, never taking
/// a covered proposal down to zero reviews.
pub fn drop_scores(matrix: &ReviewMatrix, fraction: f64, rng: &mut Rng) -> ReviewMatrix {
    let mut out = matrix.clone();
    for (obs, who) in out.scores.iter_mut().zip(out.reviewers.iter_mut()) {
        if obs.is_empty() {
            continue;
        }
        let keep: Vec<usize> = (0..obs.len()).filter(|_| rng.next_f64() >= fraction).collect();
        if keep.is_empty() {
            let survivor = rng.below(obs.len());
            *obs = vec![obs[survivor]];
            *who = vec![who[survivor]];
        } else {
            *obs = keep.iter().map(|&j| obs[j]).collect();
            *who = keep.iter().map(|&j| who[j]).collect();
        }
    }
    out
}

/// Point summary of the observed scores.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Aggregate {
    Mean,
    Median,
}

fn aggregate(values: &[f64], agg: Aggregate) -> f64 {
    match agg {
        Aggregate::Mean => values.iter().sum::<f64>() / values.len() as f64,
        Aggregate::Median => {
            let mut v = values.to_vec();
            v.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let mid = v.len() / 2;
            if v.len() % 2 == 1 {
                v[mid]
            } else {
                0.5 * (v[mid - 1] + v[mid])
            }
        }
    }
}

/// Partial-panel bounds: the full-panel mean under the best and worst
/// completions of the unseen reviews. Every interval has width
/// (pool - seen) * scale span / pool, so sparse coverage means wide bands;
/// an uncovered proposal spans the whole scale. The point estimate is the
/// observed aggregate, clamped into the band (the median of a skewed
/// handful can fall outside it); uncovered proposals get the scale middle.
pub fn manski_intervals(
    matrix: &ReviewMatrix,
    agg: Aggregate,
    scale_min: f64,
    scale_max: f64,
) -> Result<Vec<Interval>, ModelError> {
    let pool = matrix.pool_size as f64;
    matrix
        .scores
        .iter()
        .enumerate()
        .map(|(i, obs)| {
            let seen = obs.len() as f64;
            let sum: f64 = obs.iter().sum();
            let lower = (sum + (pool - seen) * scale_min) / pool;
            let upper = (sum + (pool - seen) * scale_max) / pool;
            let estimate = if obs.is_empty() {
                0.5 * (lower + upper)
            } else {
                aggregate(obs, agg).clamp(lower, upper)
            };
            Interval::with_estimate(format!("p{i}"), lower, upper, estimate)
        })
        .collect()
}

#[derive(Debug, Clone)]
pub struct LooOutcome {
    pub intervals: Vec<Interval>,
    /// Proposals with fewer than two observed scores, whose interval is a
    /// single point (one score) or the whole scale (none).
    pub degenerate: Vec<usize>,
}

/// Leave-one-out bounds: the span of the observed mean as each single review
/// is withheld. The point estimate is the full observed mean, which always
/// lies inside the span.
pub fn loo_intervals(
    matrix: &ReviewMatrix,
    scale_min: f64,
    scale_max: f64,
) -> Result<LooOutcome, ModelError> {
    let mut intervals = Vec::with_capacity(matrix.scores.len());
    let mut degenerate = Vec::new();
    for (i, obs) in matrix.scores.iter().enumerate() {
        let id = format!("p{i}");
        let iv = match obs.len() {
            0 => {
                degenerate.push(i);
                Interval::with_estimate(id, scale_min, scale_max, 0.5 * (scale_min + scale_max))?
            }
            1 => {
                degenerate.push(i);
                Interval::with_estimate(id, obs[0], obs[0], obs[0])?
            }
            m => {
                let sum: f64 = obs.iter().sum();
                let mut lo = f64::INFINITY;
                let mut hi = f64::NEG_INFINITY;
                for &y in obs {
                    let held_out = (sum - y) / (m - 1) as f64;
                    lo = lo.min(held_out);
                    hi = hi.max(held_out);
                }
                let estimate = (sum / m as f64).clamp(lo, hi);
                Interval::with_estimate(id, lo, hi, estimate)?
            }
        };
        intervals.push(iv);
    }
    Ok(LooOutcome { intervals, degenerate })
}

/// Which interval construction a simulation uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundsKind {
    Manski,
    LeaveOneOut,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    /// Expected fraction of the latent top k that gets selected.
    ExpectedUtility,
    /// Worst feasible-set payout divided by the budget.
    WorstCase,
}

impl Metric {
    pub fn name(&self) -> &'static str {
        match self {
            Metric::ExpectedUtility => "expected_utility",
            Metric::WorstCase => "worst_case",
        }
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonParams {
    pub gen: MiscalParams,
    pub budget: usize,
    pub trials: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    pub aggregate: Aggregate,
    pub bounds: BoundsKind,
}

/// One tidy observation: a method's score on one metric in one trial.
#[derive(Debug, Clone)]
pub struct ComparisonRow {
    pub trial: usize,
    pub method: Method,
    pub metric: Metric,
    pub value: f64,
}

#[derive(Debug, Clone)]
pub struct TrialFailure {
    pub trial: usize,
    pub method: Method,
    pub error: String,
}

#[derive(Debug, Clone)]
pub struct ComparisonOutcome {
    pub rows: Vec<ComparisonRow>,
    /// Per-trial rule failures; recorded, never fatal to the run.
    pub failures: Vec<TrialFailure>,
}

/// Indices of the k best latent qualities, ties to the earlier proposal.
pub fn true_topk(theta: &[f64], k: usize) -> Vec<usize> {
    let mut order: Vec<usize> = (0..theta.len()).collect();
    order.sort_unstable_by(|&x, &y| theta[y].partial_cmp(&theta[x]).unwrap().then(x.cmp(&y)));
    let mut top = order[..k].to_vec();
    top.sort_unstable();
    top
}

/// Runs every method on freshly generated data `trials` times. Each trial
/// draws its own generator stream from the master seed, so trial t is
/// reproducible in isolation and the trial set is stable under reordering
/// of methods.
pub fn run_comparison(params: &ComparisonParams) -> ComparisonOutcome {
    let mut rows = Vec::new();
    let mut failures = Vec::new();
    let k = params.budget;

    for trial in 0..params.trials {
        let mut rng = Rng::derive(params.master_seed, trial as u64);
        let all_methods_fail = |failures: &mut Vec<TrialFailure>, error: String| {
            for &method in &params.methods {
                failures.push(TrialFailure { trial, method, error: error.clone() });
            }
        };
        let matrix = match generate_reviews(&params.gen, &mut rng) {
            Ok(m) => m,
            Err(e) => {
                all_methods_fail(&mut failures, e.to_string());
                continue;
            }
        };
        let built = match params.bounds {
            BoundsKind::Manski => manski_intervals(
                &matrix,
                params.aggregate,
                params.gen.scale_min,
                params.gen.scale_max,
            ),
            BoundsKind::LeaveOneOut => {
                loo_intervals(&matrix, params.gen.scale_min, params.gen.scale_max)
                    .map(|o| o.intervals)
            }
        };
        let instance = match built.and_then(|ivs| Instance::new(ivs, k)) {
            Ok(inst) => inst,
            Err(e) => {
                all_methods_fail(&mut failures, e.to_string());
                continue;
            }
        };
        let top = true_topk(&matrix.theta, k);

        for &method in &params.methods {
            match method.select(&instance) {
                Ok(out) => {
                    let eu: f64 = top.iter().map(|&i| out.marginals[i]).sum::<f64>() / k as f64;
                    rows.push(ComparisonRow {
                        trial,
                        method,
                        metric: Metric::ExpectedUtility,
                        value: eu,
                    });
                    rows.push(ComparisonRow {
                        trial,
                        method,
                        metric: Metric::WorstCase,
                        value: out.worst_case / k as f64,
                    });
                }
                Err(e) => failures.push(TrialFailure { trial, method, error: e.to_string() }),
            }
        }
    }

    ComparisonOutcome { rows, failures }
}

/// Bootstrap summary of one method/metric cell.
#[derive(Debug, Clone)]
pub struct CiRow {
    pub method: Method,
    pub metric: Metric,
    pub mean: f64,
    pub lo: f64,
    pub hi: f64,
    pub trials: usize,
}

/// Percentile bootstrap over trials: 95% interval from `resamples` resampled
/// means per method/metric cell.
pub fn bootstrap_summary(rows: &[ComparisonRow], master_seed: u64, resamples: usize) -> Vec<CiRow> {
    let mut cells: Vec<(Method, Metric, Vec<f64>)> = Vec::new();
    for row in rows {
        match cells.iter_mut().find(|(m, t, _)| *m == row.method && *t == row.metric) {
            Some((_, _, vs)) => vs.push(row.value),
            None => cells.push((row.method, row.metric, vec![row.value])),
        }
    }

    cells
        .into_iter()
        .enumerate()
        .map(|(idx, (method, metric, values))| {
            let n = values.len();
            let mean = values.iter().sum::<f64>() / n as f64;
            let mut rng = Rng::derive(master_seed, 1_000_003 + idx as u64);
            let mut means: Vec<f64> = (0..resamples)
                .map(|_| (0..n).map(|_| values[rng.below(n)]).sum::<f64>() / n as f64)
                .collect();
            means.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
            let lo = means[((resamples as f64) * 0.025) as usize];
            let hi = means[(((resamples as f64) * 0.975) as usize).min(resamples - 1)];
            CiRow { method, metric, mean, lo, hi, trials: n }
        })
        .collect()
}

/// Writes tidy rows as CSV. The fields are numbers and fixed identifiers, so
/// no quoting is ever needed.
pub fn write_rows_csv<W: Write>(mut w: W, rows: &[ComparisonRow]) -> std::io::Result<()> {
    writeln!(w, "trial,method,metric,value")?;
    for r in rows {
        writeln!(w, "{},{},{},{}", r.trial, r.method.name(), r.metric.name(), r.value)?;
    }
    Ok(())
}

pub fn write_summary_csv<W: Write>(mut w: W, rows: &[CiRow]) -> std::io::Result<()> {
    writeln!(w, "method,metric,mean,ci_lo,ci_hi,trials")?;
    for r in rows {
        writeln!(
            w,
            "{},{},{},{},{},{}",
            r.method.name(),
            r.metric.name(),
            r.mean,
            r.lo,
            r.hi,
            r.trials
        )?;
    }
    Ok(())
}

/// A realistic solver workload: whole-point scores from about five reviews
/// give leave-one-out bounds on a coarse grid, so bound pairs repeat heavily
/// and the candidates collapse into far fewer symmetry classes than there
/// are proposals.
pub fn bench_instance(n: usize, budget: usize, seed: u64) -> Instance {
    let params = MiscalParams {
        proposals: n,
        reviewers: n,
        reviews_per_reviewer: 5.min(n),
        theta_mean: 5.5,
        theta_sd: 1.0,
        bias_sd: 0.5,
        noise_sd: 0.25,
        severity_sd: 0.0,
        scale_min: 1.0,
        scale_max: 10.0,
        integer_scores: true,
    };
    let mut rng = Rng::new(seed);
    let matrix = generate_reviews(&params, &mut rng).expect("static parameters are valid");
    let out = loo_intervals(&matrix, params.scale_min, params.scale_max)
        .expect("generated scores are finite");
    Instance::new(out.intervals, budget).expect("generated instances are valid")
}
