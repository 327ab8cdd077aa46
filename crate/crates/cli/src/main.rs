use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};

use boundlab::code::{
    erasure_error_exact, poltyrev_bound, qsc_block_error_exact, repetition_bawgn_block_error, sphere_bound,
    union_bhattacharyya_bound, LinearCode, PoltyrevParams, SphereBoundParams,
};
use boundlab::figures::{figure, FigureId, FigureOptions, DEFAULT_POINTS, DEFAULT_P_LIST};
use boundlab::montecarlo::{simulate, ErrorEstimate, SimulationSpec, TieBreak};
use boundlab::thresholds::{
    johnson_radius, lsym_lower_bound, p_star, p_star_dual, rudra_uurtamo_p0, sigma2_star, tvz_upper_bound,
    ThresholdResult,
};
use boundlab::verify::{self, Suite};
use boundlab::{Channel, Error};

#[derive(Parser)]
#[command(name = "boundlab", version, about = "List-decoding and channel-threshold bounds for linear codes")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate a threshold or radius.
    Threshold(ThresholdArgs),
    /// Write the CSV curve behind a figure.
    Figure(FigureArgs),
    /// Run property suites; exits 1 on any violation.
    Verify(VerifyArgs),
    /// Estimate decoding error of a code by simulation.
    Simulate(SimulateArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ThresholdKind {
    Johnson,
    Pstar,
    PstarDual,
    Sigma2star,
    Lsym,
    Ru,
    Tvz,
}

#[derive(clap::Args)]
struct ThresholdArgs {
    kind: ThresholdKind,
    #[arg(long)]
    q: Option<u64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    delta: Option<f64>,
    /// Code rate (dual threshold only).
    #[arg(long = "R", alias = "rate")]
    rate: Option<f64>,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(clap::Args)]
struct FigureArgs {
    /// One of: pstar-vs-johnson, F-lambda, pstar-vs-lambda, pstar-vs-delta,
    /// qary-pstar, dual-compare, ru-q15, large-delta-zoom, all-bounds-q2pow20.
    id: String,
    /// Output path; standard output when omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_POINTS)]
    points: usize,
    /// Comma-separated crossover probabilities for F-lambda.
    #[arg(long, value_delimiter = ',')]
    p_list: Option<Vec<f64>>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteArg {
    Geometry,
    Exponents,
    Thresholds,
    Codes,
    Bounds,
    All,
}

#[derive(clap::Args)]
struct VerifyArgs {
    suite: SuiteArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChannelArg {
    Qsc,
    Qec,
    Bawgn,
}

#[derive(Clone, Copy, ValueEnum)]
enum TieBreakArg {
    Lexicographic,
    Uniform,
}

#[derive(clap::Args)]
struct SimulateArgs {
    /// Generator matrix file: "q n k" then k rows of n digits.
    code: PathBuf,
    #[arg(long, value_enum)]
    channel: ChannelArg,
    #[arg(long)]
    p: Option<f64>,
    #[arg(long)]
    lambda: Option<f64>,
    #[arg(long)]
    sigma2: Option<f64>,
    #[arg(long, default_value_t = 100_000)]
    trials: u64,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long, value_enum, default_value = "lexicographic")]
    tie_break: TieBreakArg,
    #[arg(long, value_enum, default_value = "text")]
    format: Format,
}

/// JSON schema of `threshold --format json`.
#[derive(Debug, Serialize, Deserialize, PartialEq)]
struct ThresholdOutput {
    kind: String,
    q: Option<u64>,
    lambda: Option<f64>,
    delta: Option<f64>,
    rate: Option<f64>,
    value: f64,
    bracket: (f64, f64),
    residual: f64,
    iterations: u32,
    boundary: bool,
}

/// JSON schema of `simulate --format json`.
#[derive(Debug, Serialize, Deserialize)]
struct SimulationOutput {
    code: String,
    channel: String,
    trials: u64,
    seed: u64,
    block: EstimateOutput,
    bit: EstimateOutput,
    ambiguity: Option<EstimateOutput>,
    analytic: Vec<(String, f64)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct EstimateOutput {
    p_hat: f64,
    lo: f64,
    hi: f64,
    errors: u64,
    trials: u64,
}

impl From<ErrorEstimate> for EstimateOutput {
    fn from(e: ErrorEstimate) -> Self {
        EstimateOutput { p_hat: e.p_hat, lo: e.ci95.0, hi: e.ci95.1, errors: e.errors_observed, trials: e.trials }
    }
}

/// Failure modes mapped to exit codes.
enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let result = match cli.command {
        Command::Threshold(a) => threshold(a),
        Command::Figure(a) => write_figure(a),
        Command::Verify(a) => run_verify(a),
        Command::Simulate(a) => run_simulate(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(value) = std::env::var("BOUNDS_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&t| t >= 1)
        .ok_or_else(|| format!("BOUNDS_THREADS must be a positive integer, got {value:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn need(v: Option<f64>, flag: &str) -> Result<f64, Failure> {
    v.ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
}

fn need_q(v: Option<u64>) -> Result<u64, Failure> {
    v.ok_or_else(|| Failure::Usage("--q is required".into()))
}

fn closed_form(value: f64) -> ThresholdResult {
    ThresholdResult { value, bracket: (value, value), residual: 0.0, iterations: 0, boundary: false }
}

fn threshold(a: ThresholdArgs) -> Result<(), Failure> {
    let (kind, r) = match a.kind {
        ThresholdKind::Johnson => ("johnson", closed_form(johnson_radius(need_q(a.q)?, need(a.delta, "delta")?)?)),
        ThresholdKind::Pstar => ("pstar", p_star(need_q(a.q)?, need(a.lambda, "lambda")?, need(a.delta, "delta")?)?),
        ThresholdKind::PstarDual => {
            ("pstar-dual", p_star_dual(need(a.lambda, "lambda")?, need(a.rate, "R")?, need(a.delta, "delta")?)?)
        }
        ThresholdKind::Sigma2star => ("sigma2star", sigma2_star(need(a.lambda, "lambda")?, need(a.delta, "delta")?)?),
        ThresholdKind::Lsym => ("lsym", closed_form(lsym_lower_bound(need_q(a.q)?, need(a.delta, "delta")?)?)),
        ThresholdKind::Ru => ("ru", closed_form(rudra_uurtamo_p0(need_q(a.q)?, need(a.delta, "delta")?)?)),
        ThresholdKind::Tvz => ("tvz", closed_form(tvz_upper_bound(need_q(a.q)?, need(a.delta, "delta")?)?)),
    };
    let out = ThresholdOutput {
        kind: kind.to_string(),
        q: a.q,
        lambda: a.lambda,
        delta: a.delta,
        rate: a.rate,
        value: r.value,
        bracket: r.bracket,
        residual: r.residual,
        iterations: r.iterations,
        boundary: r.boundary,
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Text => {
            println!("{kind} = {:.12}", out.value);
            println!("bracket = [{:.15}, {:.15}]", out.bracket.0, out.bracket.1);
            println!("residual = {:.3e}", out.residual);
            if out.boundary {
                println!("predicate holds at the left end of the search interval");
            }
        }
    }
    Ok(())
}

fn write_figure(a: FigureArgs) -> Result<(), Failure> {
    let id: FigureId = a.id.parse()?;
    let opts = FigureOptions { points: a.points, p_list: a.p_list.unwrap_or_else(|| DEFAULT_P_LIST.to_vec()) };
    let command: Vec<String> = std::env::args().skip(1).collect();
    let curve = figure(id, &opts)?.with_meta("command", format!("boundlab {}", command.join(" ")));
    let text = curve.to_csv_string();
    match a.output {
        Some(path) => fs::write(&path, text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?,
        None => io::stdout().write_all(text.as_bytes()).map_err(|e| Failure::Usage(e.to_string()))?,
    }
    Ok(())
}

fn run_verify(a: VerifyArgs) -> Result<(), Failure> {
    let suite = match a.suite {
        SuiteArg::Geometry => Suite::Geometry,
        SuiteArg::Exponents => Suite::Exponents,
        SuiteArg::Thresholds => Suite::Thresholds,
        SuiteArg::Codes => Suite::Codes,
        SuiteArg::Bounds => Suite::Bounds,
        SuiteArg::All => Suite::All,
    };
    let reports = verify::run(suite);
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&reports).expect("serializable")),
        Format::Text => {
            for r in &reports {
                println!("{r}");
            }
        }
    }
    if reports.iter().all(|r| r.passed()) {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn run_simulate(a: SimulateArgs) -> Result<(), Failure> {
    let text = fs::read_to_string(&a.code).map_err(|e| Failure::Usage(format!("{}: {e}", a.code.display())))?;
    let code = LinearCode::parse(&text)?;
    if a.trials == 0 {
        return Err(Failure::Usage("--trials must be at least 1".into()));
    }
    let q = code.q();
    let channel = match a.channel {
        ChannelArg::Qsc => Channel::qsc(q, need(a.p, "p")?)?,
        ChannelArg::Qec => Channel::qec(q, need(a.lambda, "lambda")?)?,
        ChannelArg::Bawgn => Channel::bawgn(need(a.sigma2, "sigma2")?)?,
    };
    let tie_break = match a.tie_break {
        TieBreakArg::Lexicographic => TieBreak::Lexicographic,
        TieBreakArg::Uniform => TieBreak::Uniform,
    };
    let spec = SimulationSpec::new(code.clone(), channel, a.trials, a.seed).with_tie_break(tie_break);
    let report = simulate(&spec)?;
    let out = SimulationOutput {
        code: format!("q={} n={} k={}", q, code.n(), code.k()),
        channel: describe(&channel),
        trials: a.trials,
        seed: a.seed,
        block: report.block.into(),
        bit: report.bit.into(),
        ambiguity: report.ambiguity.map(Into::into),
        analytic: analytic(&code, &channel),
    };
    match a.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&out).expect("serializable")),
        Format::Text => {
            println!("code     {}", out.code);
            println!("channel  {}", out.channel);
            println!("trials   {}  seed {}", out.trials, out.seed);
            print_estimate("block", &out.block);
            print_estimate("bit", &out.bit);
            if let Some(e) = &out.ambiguity {
                print_estimate("ambiguous", e);
            }
            for (name, v) in &out.analytic {
                println!("{name:<34} {v:.6e}");
            }
        }
    }
    Ok(())
}

fn print_estimate(name: &str, e: &EstimateOutput) {
    println!("{name:<10} {:.6e}  95% CI [{:.6e}, {:.6e}]  ({} / {})", e.p_hat, e.lo, e.hi, e.errors, e.trials);
}

fn describe(ch: &Channel) -> String {
    match *ch {
        Channel::Qsc { q, p } => format!("qSC(q={}, p={p})", q.get()),
        Channel::Qec { q, erasure } => format!("qEC(q={}, lambda={erasure})", q.get()),
        Channel::Bawgn { sigma2 } => format!("BAWGN(sigma2={sigma2})"),
    }
}

/// Exact values and bounds to print next to the estimates; anything that
/// does not apply (or exceeds its budget) is left out.
fn analytic(code: &LinearCode, ch: &Channel) -> Vec<(String, f64)> {
    let mut out = Vec::new();
    let weights = code.weight_distribution().ok();
    match *ch {
        Channel::Qsc { p, .. } => {
            if let Ok(e) = qsc_block_error_exact(code, p) {
                out.push(("exact block (lexicographic ties)".into(), e.zero_lexicographic));
                out.push(("exact block (ties as errors)".into(), e.pessimistic));
            }
            if let (Some(w), Ok(params)) = (&weights, PoltyrevParams::with_fraction(p, 0.5, code.n())) {
                if let Ok(b) = poltyrev_bound(w, params) {
                    out.push(("Poltyrev bound (alpha = 0.5)".into(), b.raw));
                }
            }
            let best = verify::LAMBDAS
                .iter()
                .filter_map(|&l| union_bhattacharyya_bound(code, ch, l).ok())
                .fold(f64::INFINITY, f64::min);
            if best.is_finite() {
                out.push(("union-Bhattacharyya bound".into(), best));
            }
        }
        Channel::Qec { erasure, .. } => {
            if let Ok(e) = erasure_error_exact(code, erasure) {
                out.push(("exact ambiguity".into(), e.ambiguity));
                out.push(("exact block (uniform choice)".into(), e.map_block));
                out.push(("exact bit (uniform choice)".into(), e.bit));
            }
        }
        Channel::Bawgn { sigma2 } => {
            if let Some(w) = &weights {
                let best = [0.5, 1.0, 2.0, 4.0]
                    .iter()
                    .filter_map(|&s| SphereBoundParams::new(sigma2, s).ok())
                    .filter_map(|params| sphere_bound(w, params, 1).ok())
                    .fold(f64::INFINITY, f64::min);
                if best.is_finite() {
                    out.push(("sphere bound".into(), best));
                }
            }
            if code.k() == 1 && code.generator()[0].iter().all(|&s| s == 1) {
                if let Ok(v) = repetition_bawgn_block_error(code.n(), sigma2) {
                    out.push(("exact block (repetition)".into(), v));
                }
            }
        }
    }
    out
}
