//! `merit`: interval-based top-k selection from the command line.
//!
//! Subcommands cover the whole pipeline: `select` ingests an interval CSV and
//! emits marginals (optionally drawing an auditable committee), `evaluate`
//! scores a marginals file against an instance, `axioms` runs the stability
//! and monotonicity checks, `simulate` compares methods on synthetic review
//! data, and `bench` times the solver across instance sizes.
//!
//! Exit codes: 2 for unreadable or malformed input, 3 for solver failures,
//! 4 for violated rule preconditions (an estimate-based method on an
//! estimate-free file).

use std::fmt;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use merit_core::axioms::{check_budget_monotonicity, instability_shift, reversal_gap, AXIOM_TOL};
use merit_core::datagen::{
    bootstrap_summary, run_comparison, write_rows_csv, write_summary_csv, Aggregate, BoundsKind,
    ComparisonParams, MiscalParams,
};
use merit_core::model::worst_case_utility;
use merit_core::rules::{
    Method, MeritMonotoneRule, MeritRule, MeritUniformRule, RuleError, SelectionRule,
};
use merit_core::sampling::{audit_record, AuditRecord};
use merit_core::solver::{solve_ex_ante_with, SolveOptions};
use merit_core::{Instance, Interval, MarginalVector};

#[derive(Parser)]
#[command(
    name = "merit",
    version,
    about = "Maximin top-k selection lotteries from quality intervals"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute marginals for one instance; optionally draw the committee.
    Select(SelectArgs),
    /// Score a marginals file against the instance it was computed from.
    Evaluate(EvaluateArgs),
    /// Run budget-monotonicity, stability, and reversal checks.
    Axioms(AxiomsArgs),
    /// Compare methods on synthetic miscalibrated review data.
    Simulate(SimulateArgs),
    /// Time the solver across instance sizes and acceptance rates.
    Bench(BenchArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Args)]
struct SelectArgs {
    /// Interval CSV with header id,lower,upper[,estimate].
    #[arg(long)]
    input: PathBuf,

    /// Number of candidates to fund.
    #[arg(long)]
    k: usize,

    /// merit, merit-uniform, merit-monotone, swissnsf, rat, or det.
    #[arg(long, default_value = "merit")]
    method: Method,

    /// Dominance slack: a beats b only when lower(a) > upper(b) + epsilon.
    #[arg(long, env = "MERIT_EPSILON", default_value_t = 0.0)]
    epsilon: f64,

    /// Cap on cutting-plane iterations.
    #[arg(long, env = "MERIT_MAX_ITERS", default_value_t = 500)]
    max_iters: usize,

    /// Lottery seed recorded in the audit trail.
    #[arg(long, env = "MERIT_SEED", default_value_t = 0)]
    seed: u64,

    /// Draw the funded committee and attach the audit record.
    #[arg(long)]
    draw: bool,

    /// Output path; "-" writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,

    /// json emits the full report; csv emits id,p rows (plus a selected
    /// column under --draw, without the audit record).
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct EvaluateArgs {
    /// Interval CSV with header id,lower,upper[,estimate].
    #[arg(long)]
    input: PathBuf,

    /// Marginals to score: either id,p CSV or the JSON written by `select`.
    #[arg(long)]
    marginals: PathBuf,

    /// Dominance slack, matching the run that produced the marginals.
    #[arg(long, env = "MERIT_EPSILON", default_value_t = 0.0)]
    epsilon: f64,

    /// Ground-truth ranking file, one id per line, best first; enables the
    /// expected-utility figure.
    #[arg(long)]
    true_ranking: Option<PathBuf>,

    #[arg(long, default_value = "-")]
    out: String,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct AxiomsArgs {
    /// Interval CSV with header id,lower,upper[,estimate].
    #[arg(long)]
    input: PathBuf,

    /// Budget the monotonicity sweep climbs to.
    #[arg(long)]
    k: usize,

    /// Methods to check; repeat or comma-separate.
    #[arg(
        long = "method",
        value_delimiter = ',',
        default_values_t = [Method::Merit, Method::MeritMonotone, Method::SwissNsf]
    )]
    methods: Vec<Method>,

    #[arg(long, env = "MERIT_EPSILON", default_value_t = 0.0)]
    epsilon: f64,

    #[arg(long, env = "MERIT_MAX_ITERS", default_value_t = 500)]
    max_iters: usize,

    #[arg(long, default_value = "-")]
    out: String,

    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum Regime {
    /// 350 proposals, 10 reviewers covering 80 proposals each.
    SmallPanel,
    /// 1000 proposals, 1000 reviewers covering 5 each.
    LargePool,
}

#[derive(Clone, Copy, ValueEnum)]
enum AggregateArg {
    Mean,
    Median,
}

#[derive(Clone, Copy, ValueEnum)]
enum BoundsArg {
    /// Worst-case completion of the unobserved scores over the full pool.
    Manski,
    /// Span of the hold-one-out means.
    Loo,
}

#[derive(Args)]
struct SimulateArgs {
    /// Review-panel shape the synthetic data follows.
    #[arg(long, value_enum, default_value_t = Regime::SmallPanel)]
    regime: Regime,

    /// Reviewer bias spread (the miscalibration severity knob).
    #[arg(long, default_value_t = 1.0)]
    bias_sd: f64,

    /// Override the regime's proposal count.
    #[arg(long)]
    proposals: Option<usize>,

    /// Override the regime's reviewer count.
    #[arg(long)]
    reviewers: Option<usize>,

    /// Override how many proposals each reviewer covers.
    #[arg(long)]
    reviews: Option<usize>,

    /// Override the regime's per-review noise.
    #[arg(long)]
    noise_sd: Option<f64>,

    /// Reviewer slope spread for multiplicative mis-specification.
    #[arg(long)]
    severity_sd: Option<f64>,

    /// Number of candidates funded per trial; defaults to a quarter of the
    /// proposals.
    #[arg(long)]
    k: Option<usize>,

    #[arg(long, default_value_t = 20)]
    trials: usize,

    #[arg(long, env = "MERIT_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(
        long = "method",
        value_delimiter = ',',
        default_values_t = [Method::Merit, Method::SwissNsf, Method::Det]
    )]
    methods: Vec<Method>,

    #[arg(long, value_enum, default_value_t = AggregateArg::Mean)]
    aggregate: AggregateArg,

    #[arg(long, value_enum, default_value_t = BoundsArg::Manski)]
    bounds: BoundsArg,

    /// Per-trial rows CSV; "-" writes to stdout.
    #[arg(long, default_value = "-")]
    out: String,

    /// Also write a bootstrap confidence-interval summary CSV here.
    #[arg(long)]
    summary: Option<PathBuf>,

    /// Bootstrap resamples behind the summary intervals.
    #[arg(long, default_value_t = 1000)]
    resamples: usize,
}

#[derive(Args)]
struct BenchArgs {
    /// Instance sizes to sweep.
    #[arg(long, value_delimiter = ',', default_values_t = [500, 1000, 2000])]
    sizes: Vec<usize>,

    /// Acceptance rates to sweep; the budget is n times the rate.
    #[arg(long, value_delimiter = ',', default_values_t = [0.1, 0.25, 0.5])]
    rates: Vec<f64>,

    #[arg(long, env = "MERIT_SEED", default_value_t = 0)]
    seed: u64,

    #[arg(long, default_value = "-")]
    out: String,
}

enum CliError {
    Input(String),
    Solver(String),
    Precondition(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Solver(_) => 3,
            CliError::Precondition(_) => 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Solver(m) | CliError::Precondition(m) => {
                f.write_str(m)
            }
        }
    }
}

impl From<RuleError> for CliError {
    fn from(e: RuleError) -> Self {
        match e {
            RuleError::Solve(e) => CliError::Solver(format!("solver failed: {e}")),
            RuleError::Baseline(e) => CliError::Precondition(e.to_string()),
            RuleError::Model(e) => CliError::Input(e.to_string()),
        }
    }
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e}");
        std::process::exit(e.code());
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Select(args) => cmd_select(args),
        Command::Evaluate(args) => cmd_evaluate(args),
        Command::Axioms(args) => cmd_axioms(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Bench(args) => cmd_bench(args),
    }
}

// ---------------------------------------------------------------- input

#[derive(Deserialize)]
struct IntervalRow {
    id: String,
    lower: f64,
    upper: f64,
    #[serde(default)]
    estimate: Option<f64>,
}

fn read_intervals(path: &Path) -> Result<Vec<Interval>, CliError> {
    let mut reader = csv::Reader::from_path(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let mut intervals = Vec::new();
    for (line, row) in reader.deserialize::<IntervalRow>().enumerate() {
        let row = row.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        let interval = match row.estimate {
            Some(e) => Interval::with_estimate(row.id, row.lower, row.upper, e),
            None => Interval::new(row.id, row.lower, row.upper),
        }
        .map_err(|e| {
            CliError::Input(format!("{} row {}: {e}", path.display(), line + 2))
        })?;
        intervals.push(interval);
    }
    if intervals.is_empty() {
        return Err(CliError::Input(format!("{}: no data rows", path.display())));
    }
    Ok(intervals)
}

fn load_instance(path: &Path, k: usize, epsilon: f64) -> Result<Instance, CliError> {
    let intervals = read_intervals(path)?;
    Instance::with_epsilon(intervals, k, epsilon).map_err(|e| CliError::Input(e.to_string()))
}

fn needs_estimates(method: Method) -> bool {
    matches!(method, Method::SwissNsf | Method::Rat | Method::Det)
}

fn require_estimates(instance: &Instance, method: Method) -> Result<(), CliError> {
    if !needs_estimates(method) {
        return Ok(());
    }
    let missing: Vec<&str> = instance
        .intervals()
        .iter()
        .filter(|iv| iv.estimate().is_none())
        .map(|iv| iv.id())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(CliError::Precondition(format!(
            "method {} needs point estimates, but {} of {} candidates have none (first: {})",
            method.name(),
            missing.len(),
            instance.n(),
            missing[0]
        )))
    }
}

fn rule_with(method: Method, opts: &SolveOptions) -> Box<dyn SelectionRule> {
    match method {
        Method::Merit => Box::new(MeritRule { opts: opts.clone() }),
        Method::MeritUniform => Box::new(MeritUniformRule { opts: opts.clone() }),
        Method::MeritMonotone => Box::new(MeritMonotoneRule { opts: opts.clone() }),
        baseline => baseline.rule(),
    }
}

fn write_output(out: &str, text: &str) -> Result<(), CliError> {
    if out == "-" {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::Input(format!("stdout: {e}")))
    } else {
        fs::write(out, text).map_err(|e| CliError::Input(format!("{out}: {e}")))
    }
}

// ---------------------------------------------------------------- select

#[derive(Serialize, Deserialize)]
struct IdP {
    id: String,
    p: f64,
}

#[derive(Serialize)]
struct TierSummary {
    accept: usize,
    lottery: usize,
    reject: usize,
    accept_pct: f64,
    random_pct: f64,
    /// Smallest and largest lottery probability; absent without a lottery.
    #[serde(skip_serializing_if = "Option::is_none")]
    p_range: Option<[f64; 2]>,
}

#[derive(Serialize)]
struct SelectReport {
    method: &'static str,
    k: usize,
    marginals: Vec<IdP>,
    tiers: TierSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    selected: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    audit: Option<AuditRecord>,
}

fn tier_summary(p: &MarginalVector) -> TierSummary {
    let n = p.len();
    let (mut accept, mut lottery, mut reject) = (0usize, 0usize, 0usize);
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for &v in p.iter() {
        if v >= 1.0 - 1e-9 {
            accept += 1;
        } else if v <= 1e-9 {
            reject += 1;
        } else {
            lottery += 1;
            lo = lo.min(v);
            hi = hi.max(v);
        }
    }
    TierSummary {
        accept,
        lottery,
        reject,
        accept_pct: 100.0 * accept as f64 / n as f64,
        random_pct: 100.0 * lottery as f64 / n as f64,
        p_range: (lottery > 0).then_some([lo, hi]),
    }
}

fn cmd_select(args: SelectArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input, args.k, args.epsilon)?;
    require_estimates(&instance, args.method)?;
    let opts = SolveOptions { max_iters: args.max_iters, ..SolveOptions::default() };
    let output = rule_with(args.method, &opts).select(&instance)?;

    let ids: Vec<String> =
        instance.intervals().iter().map(|iv| iv.id().to_string()).collect();
    let (selected, audit) = if args.draw {
        let record = audit_record(&output.marginals, args.k, args.seed)
            .map_err(|e| CliError::Solver(format!("drawing the committee: {e}")))?;
        let chosen = record.selected.iter().map(|&i| ids[i].clone()).collect();
        (Some(chosen), Some(record))
    } else {
        (None, None)
    };

    let text = match args.format {
        Format::Json => {
            let report = SelectReport {
                method: args.method.name(),
                k: args.k,
                marginals: ids
                    .iter()
                    .zip(output.marginals.iter())
                    .map(|(id, &p)| IdP { id: id.clone(), p })
                    .collect(),
                tiers: tier_summary(&output.marginals),
                seed: args.draw.then_some(args.seed),
                selected,
                audit,
            };
            let mut text = serde_json::to_string_pretty(&report)
                .expect("reports always serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
            let selected = selected.unwrap_or_default();
            for (id, &p) in ids.iter().zip(output.marginals.iter()) {
                if args.draw {
                    w.serialize((id, p, u8::from(selected.contains(id))))
                } else {
                    w.serialize(IdP { id: id.clone(), p })
                }
                .map_err(|e| CliError::Input(format!("writing csv: {e}")))?;
            }
            let bytes = w.into_inner().expect("vec writers do not fail");
            let body = String::from_utf8(bytes).expect("csv output is utf-8");
            let header = if args.draw { "id,p,selected\n" } else { "id,p\n" };
            format!("{header}{body}")
        }
    };
    write_output(&args.out, &text)
}

// -------------------------------------------------------------- evaluate

#[derive(Deserialize)]
struct MarginalsEnvelope {
    marginals: Vec<IdP>,
}

fn read_marginals(path: &Path) -> Result<Vec<IdP>, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    if text.trim_start().starts_with('{') {
        let envelope: MarginalsEnvelope = serde_json::from_str(&text)
            .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
        return Ok(envelope.marginals);
    }
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let mut rows = Vec::new();
    for row in reader.deserialize::<IdP>() {
        rows.push(row.map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?);
    }
    if rows.is_empty() {
        return Err(CliError::Input(format!("{}: no data rows", path.display())));
    }
    Ok(rows)
}

/// Orders the marginals by the instance's candidate list, requiring a
/// one-to-one id match.
fn align(rows: &[IdP], instance: &Instance) -> Result<MarginalVector, CliError> {
    let mut p = vec![f64::NAN; instance.n()];
    for row in rows {
        let slot = instance
            .intervals()
            .iter()
            .position(|iv| iv.id() == row.id)
            .ok_or_else(|| {
                CliError::Input(format!("marginal for unknown candidate {:?}", row.id))
            })?;
        if !p[slot].is_nan() {
            return Err(CliError::Input(format!("duplicate marginal for {:?}", row.id)));
        }
        p[slot] = row.p;
    }
    if let Some(hole) = p.iter().position(|v| v.is_nan()) {
        return Err(CliError::Input(format!(
            "no marginal for candidate {:?}",
            instance.interval(hole).id()
        )));
    }
    Ok(MarginalVector::new(p))
}

#[derive(Serialize)]
struct EvaluateReport {
    k: usize,
    worst_case: f64,
    worst_case_normalized: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    expected_utility: Option<f64>,
}

fn cmd_evaluate(args: EvaluateArgs) -> Result<(), CliError> {
    let rows = read_marginals(&args.marginals)?;
    let total: f64 = rows.iter().map(|r| r.p).sum();
    let k = total.round();
    if (total - k).abs() > 1e-6 || k < 0.0 {
        return Err(CliError::Input(format!(
            "marginals sum to {total}, not an integer budget"
        )));
    }
    let k = k as usize;

    let instance = load_instance(&args.input, k, args.epsilon)?;
    let p = align(&rows, &instance)?;
    p.validate(k, 1e-6).map_err(|e| CliError::Input(e.to_string()))?;

    let worst_case = worst_case_utility(&p, &instance);
    let expected_utility = match &args.true_ranking {
        None => None,
        Some(path) => Some(ranked_expected_utility(path, &instance, &p, k)?),
    };
    let report = EvaluateReport {
        k,
        worst_case,
        worst_case_normalized: if k == 0 { 0.0 } else { worst_case / k as f64 },
        expected_utility,
    };

    let text = match args.format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(&report).expect("reports always serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text = format!(
                "metric,value\nworst_case,{}\nworst_case_normalized,{}\n",
                report.worst_case, report.worst_case_normalized
            );
            if let Some(eu) = report.expected_utility {
                text.push_str(&format!("expected_utility,{eu}\n"));
            }
            text
        }
    };
    write_output(&args.out, &text)
}

/// Expected number of true top-k candidates funded, over k: the ranking file
/// lists ids best first, and the first k of them are the truth.
fn ranked_expected_utility(
    path: &Path,
    instance: &Instance,
    p: &MarginalVector,
    k: usize,
) -> Result<f64, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let ids: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    if ids.len() < k {
        return Err(CliError::Input(format!(
            "{}: ranking lists {} candidates, need at least {k}",
            path.display(),
            ids.len()
        )));
    }
    if k == 0 {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for id in &ids[..k] {
        let slot = instance
            .intervals()
            .iter()
            .position(|iv| iv.id() == *id)
            .ok_or_else(|| {
                CliError::Input(format!("ranking names unknown candidate {id:?}"))
            })?;
        sum += p[slot];
    }
    Ok(sum / k as f64)
}

// ---------------------------------------------------------------- axioms

#[derive(Serialize)]
struct ViolationReport {
    id: String,
    budget: usize,
    before: f64,
    after: f64,
}

#[derive(Serialize)]
struct AxiomReport {
    method: &'static str,
    monotonicity_violations: Vec<ViolationReport>,
    /// Whether an epsilon-perturbation of one candidate flips the rule
    /// between deterministic and uniform on a ten-candidate family.
    maximally_unstable: bool,
    /// Only measured on two-candidate, budget-one instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    reversal_gap: Option<f64>,
}

fn cmd_axioms(args: AxiomsArgs) -> Result<(), CliError> {
    let instance = load_instance(&args.input, args.k, args.epsilon)?;
    let opts = SolveOptions { max_iters: args.max_iters, ..SolveOptions::default() };

    let mut reports = Vec::new();
    for &method in &args.methods {
        require_estimates(&instance, method)?;
        let rule = rule_with(method, &opts);

        let violations = check_budget_monotonicity(&instance, rule.as_ref())?;
        let shift = instability_shift(rule.as_ref(), 10, 3, 1e-4)?;
        let gap = if instance.n() == 2 && instance.budget() == 1 {
            Some(reversal_gap(&instance, rule.as_ref())?)
        } else {
            None
        };
        reports.push(AxiomReport {
            method: method.name(),
            monotonicity_violations: violations
                .into_iter()
                .map(|v| ViolationReport {
                    id: instance.interval(v.candidate).id().to_string(),
                    budget: v.budget,
                    before: v.before,
                    after: v.after,
                })
                .collect(),
            maximally_unstable: shift > AXIOM_TOL,
            reversal_gap: gap,
        });
    }

    let text = match args.format {
        Format::Json => {
            let mut text =
                serde_json::to_string_pretty(&reports).expect("reports always serialize");
            text.push('\n');
            text
        }
        Format::Csv => {
            let mut text =
                String::from("method,monotonicity_violations,maximally_unstable,reversal_gap\n");
            for r in &reports {
                let gap = r.reversal_gap.map(|g| g.to_string()).unwrap_or_default();
                text.push_str(&format!(
                    "{},{},{},{gap}\n",
                    r.method,
                    r.monotonicity_violations.len(),
                    r.maximally_unstable
                ));
            }
            text
        }
    };
    write_output(&args.out, &text)
}

// -------------------------------------------------------------- simulate

fn cmd_simulate(args: SimulateArgs) -> Result<(), CliError> {
    let mut gen = match args.regime {
        Regime::SmallPanel => MiscalParams::small_panel(args.bias_sd),
        Regime::LargePool => MiscalParams::large_pool(args.bias_sd),
    };
    if let Some(v) = args.proposals {
        gen.proposals = v;
    }
    if let Some(v) = args.reviewers {
        gen.reviewers = v;
    }
    if let Some(v) = args.reviews {
        gen.reviews_per_reviewer = v;
    }
    if let Some(v) = args.noise_sd {
        gen.noise_sd = v;
    }
    if let Some(v) = args.severity_sd {
        gen.severity_sd = v;
    }
    gen.validate().map_err(|e| CliError::Input(e.to_string()))?;

    let params = ComparisonParams {
        budget: args.k.unwrap_or(gen.proposals / 4),
        gen,
        trials: args.trials,
        master_seed: args.seed,
        methods: args.methods.clone(),
        aggregate: match args.aggregate {
            AggregateArg::Mean => Aggregate::Mean,
            AggregateArg::Median => Aggregate::Median,
        },
        bounds: match args.bounds {
            BoundsArg::Manski => BoundsKind::Manski,
            BoundsArg::Loo => BoundsKind::LeaveOneOut,
        },
    };

    let outcome = run_comparison(&params);
    for failure in &outcome.failures {
        eprintln!(
            "trial {} {}: {}",
            failure.trial,
            failure.method.name(),
            failure.error
        );
    }

    let mut rows_csv = Vec::new();
    write_rows_csv(&mut rows_csv, &outcome.rows)
        .expect("vec writers do not fail");
    write_output(&args.out, &String::from_utf8(rows_csv).expect("csv output is utf-8"))?;

    if let Some(summary_path) = &args.summary {
        let summary = bootstrap_summary(&outcome.rows, args.seed, args.resamples);
        let mut summary_csv = Vec::new();
        write_summary_csv(&mut summary_csv, &summary).expect("vec writers do not fail");
        write_output(
            &summary_path.display().to_string(),
            &String::from_utf8(summary_csv).expect("csv output is utf-8"),
        )?;
    }
    Ok(())
}

// ------------------------------------------------------------------ bench

fn cmd_bench(args: BenchArgs) -> Result<(), CliError> {
    let mut text = String::from("n,rate,k,millis,iterations,cuts,groups,chains,certified\n");
    for &n in &args.sizes {
        let instance = merit_core::datagen::bench_instance(n, 1, args.seed);
        for &rate in &args.rates {
            let k = ((n as f64 * rate).round() as usize).clamp(1, n);
            let instance = instance.with_budget(k).map_err(|e| CliError::Input(e.to_string()))?;
            let started = Instant::now();
            let rep = solve_ex_ante_with(&instance, &SolveOptions::default())
                .map_err(|e| CliError::Solver(format!("n={n} k={k}: {e}")))?;
            let millis = started.elapsed().as_secs_f64() * 1e3;
            text.push_str(&format!(
                "{n},{rate},{k},{millis:.3},{},{},{},{},{}\n",
                rep.iterations, rep.cuts, rep.groups, rep.chains, rep.certified
            ));
        }
    }
    write_output(&args.out, &text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tier_summary_splits_the_reference_marginals() {
        let p = MarginalVector::new(vec![1.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0]);
        let t = tier_summary(&p);
        assert_eq!((t.accept, t.lottery, t.reject), (1, 3, 0));
        assert!((t.accept_pct - 25.0).abs() < 1e-12);
        assert!((t.random_pct - 75.0).abs() < 1e-12);
        let range = t.p_range.unwrap();
        assert!((range[0] - 1.0 / 3.0).abs() < 1e-12 && (range[1] - 1.0 / 3.0).abs() < 1e-12);
    }

    #[test]
    fn tier_summary_handles_all_rejects() {
        let t = tier_summary(&MarginalVector::new(vec![0.0, 0.0]));
        assert_eq!((t.accept, t.lottery, t.reject), (0, 0, 2));
        assert!(t.p_range.is_none());
    }

    #[test]
    fn align_rejects_mismatched_ids() {
        let instance = Instance::new(
            vec![
                Interval::new("a", 0.0, 1.0).unwrap(),
                Interval::new("b", 0.0, 1.0).unwrap(),
            ],
            1,
        )
        .unwrap();
        let rows = vec![
            IdP { id: "a".into(), p: 0.5 },
            IdP { id: "z".into(), p: 0.5 },
        ];
        assert!(matches!(align(&rows, &instance), Err(CliError::Input(_))));
        let rows = vec![IdP { id: "a".into(), p: 0.5 }];
        assert!(matches!(align(&rows, &instance), Err(CliError::Input(_))));
    }
}
