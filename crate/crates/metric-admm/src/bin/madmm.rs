//! Experiment CLI for the metric-ADMM solvers.
//!
//! Exit codes: 0 on success, 2 when a solve or oracle fails to converge,
//! 3 on degenerate data.

use std::path::PathBuf;
use std::process::ExitCode;
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};

use metric_admm::error::Error;
use metric_admm::harness::{
    self, bqp_round_trip, default_scalar_grid, generate, oracle_solve_refined, round_trip_csv,
    scalar_limit_search, sweep, GenConfig, Generated, ProblemKind, SweepConfig, SweepMode,
};
use metric_admm::qcqp::QcqpProblem;
use metric_admm::sdp::{Mode, SdpProblem, SolverConfig};
use metric_admm::tuner::{optimal_scalar, tune};

#[derive(Parser)]
#[command(name = "madmm", version, about = "Metric-equipped ADMM solvers for SDP and convexified QCQP")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate a seeded problem instance and write it in the text format.
    Generate(GenerateArgs),
    /// Solve a problem file with a scalar or tuned-metric configuration.
    Solve(SolveArgs),
    /// Tune the optimal metric from an oracle reference run.
    Tune(TuneArgs),
    /// Sweep the scalar step over a log grid and emit the full curve.
    ScalarLimit(ScalarLimitArgs),
    /// Iteration-complexity sweep across dimensions and solver modes.
    Sweep(SweepArgs),
    /// Generate, relax and round-trip Boolean instances against brute force.
    BqpRoundtrip(BqpArgs),
}

#[derive(Args)]
struct CommonGen {
    /// Problem family: matrix-fractional | bqp | standard-sdp.
    #[arg(long, default_value = "matrix-fractional")]
    kind: String,
    #[arg(long, default_value_t = 20)]
    n: usize,
    #[arg(long, default_value_t = 5)]
    m: usize,
    #[arg(long = "sigma-a", default_value_t = 1.0)]
    sigma_a: f64,
    #[arg(long = "sigma-b", default_value_t = 1.0)]
    sigma_b: f64,
    /// BQP observation noise standard deviation.
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

impl CommonGen {
    fn config(&self) -> Result<GenConfig, Error> {
        let kind = ProblemKind::from_str(&self.kind)?;
        Ok(GenConfig::new(kind, self.n, self.m, self.seed)
            .with_sigmas(self.sigma_a, self.sigma_b)
            .with_noise(self.noise))
    }
}

#[derive(Args)]
struct GenerateArgs {
    #[command(flatten)]
    gen: CommonGen,
    /// Output path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ProblemInput {
    /// Problem file to read; when omitted the instance is generated from the
    /// seeded configuration.
    #[arg(long)]
    problem: Option<PathBuf>,
    #[command(flatten)]
    gen: CommonGen,
}

impl ProblemInput {
    fn load(&self) -> Result<Generated, Error> {
        match &self.problem {
            None => generate(&self.gen.config()?),
            Some(path) => {
                let text = std::fs::read_to_string(path)?;
                let kind = ProblemKind::from_str(&self.gen.kind)?;
                Ok(match kind {
                    ProblemKind::StandardSdp => Generated::Sdp(SdpProblem::from_text(&text)?),
                    ProblemKind::MatrixFractional => {
                        Generated::Qcqp(QcqpProblem::from_text(&text)?)
                    }
                    ProblemKind::Bqp => {
                        let p = QcqpProblem::bqp_from_text(&text)?;
                        let a0 = p.a_list()[0].clone();
                        let b0 = p.b_list()[0].clone();
                        let n = p.dim();
                        Generated::Bqp { problem: p, a0, b0, planted: vec![1.0; n] }
                    }
                })
            }
        }
    }
}

#[derive(Args)]
struct SolverFlags {
    /// `scalar:<gamma>` / `gamma-star` / `metric-star`.
    #[arg(long, default_value = "scalar:1.0")]
    mode: String,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long = "max-iter", default_value_t = 200_000)]
    max_iter: u64,
    /// Displacement tolerance of the oracle run backing the star modes.
    #[arg(long = "eps-oracle", default_value_t = 1e-12)]
    eps_oracle: f64,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: ProblemInput,
    #[command(flatten)]
    solver: SolverFlags,
    /// Per-iteration report CSV path (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct TuneArgs {
    #[command(flatten)]
    input: ProblemInput,
    #[arg(long = "eps-oracle", default_value_t = 1e-12)]
    eps_oracle: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ScalarLimitArgs {
    #[command(flatten)]
    input: ProblemInput,
    #[command(flatten)]
    solver: SolverFlags,
    /// Grid points (log-spaced over [gamma*/100, 100*gamma*]).
    #[arg(long, default_value_t = 40)]
    points: usize,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[command(flatten)]
    gen: CommonGen,
    /// Comma-separated dimensions, e.g. 20,40,60,80.
    #[arg(long = "n-values", default_value = "20,40,60,80")]
    n_values: String,
    /// Comma-separated modes out of scalar-limit, gamma-star, metric-star.
    #[arg(long, default_value = "scalar-limit,gamma-star,metric-star")]
    modes: String,
    #[arg(long, default_value_t = 1e-8)]
    eps: f64,
    #[arg(long = "max-iter", default_value_t = 200_000)]
    max_iter: u64,
    #[arg(long = "eps-oracle", default_value_t = 1e-12)]
    eps_oracle: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BqpArgs {
    /// Comma-separated dimensions.
    #[arg(long = "n-values", default_value = "6,8,10")]
    n_values: String,
    /// Instances per dimension.
    #[arg(long, default_value_t = 7)]
    count: usize,
    #[arg(long, default_value_t = 0.0)]
    noise: f64,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 1e-10)]
    eps: f64,
    #[arg(long = "max-iter", default_value_t = 400_000)]
    max_iter: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn emit(out: &Option<PathBuf>, content: &str) -> Result<(), Error> {
    match out {
        Some(path) => std::fs::write(path, content)?,
        None => print!("{content}"),
    }
    Ok(())
}

fn parse_list<T: FromStr>(s: &str, what: &str) -> Result<Vec<T>, Error>
where
    T::Err: std::fmt::Display,
{
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<T>().map_err(|e| Error::Parse(format!("bad {what} {t:?}: {e}"))))
        .collect()
}

fn parse_modes(s: &str) -> Result<Vec<SweepMode>, Error> {
    s.split(',')
        .map(|t| t.trim())
        .filter(|t| !t.is_empty())
        .map(SweepMode::from_str)
        .collect()
}

/// Runs a solve per the `--mode` flag; star modes get their reference from a
/// refined oracle run first.
fn run_solve(problem: &Generated, flags: &SolverFlags) -> Result<metric_admm::SolveReport, Error> {
    let base = SolverConfig::scalar(1.0).with_eps(flags.eps).with_max_iter(flags.max_iter);
    if let Some(gamma) = flags.mode.strip_prefix("scalar:") {
        let gamma: f64 =
            gamma.parse().map_err(|_| Error::Parse(format!("bad scalar step {gamma:?}")))?;
        let mut cfg = base;
        cfg.mode = Mode::Scalar(gamma);
        return problem.solve(&cfg);
    }
    let oracle = oracle_solve_refined(problem, flags.eps_oracle)?;
    let mut cfg = base.with_reference(oracle.x.clone());
    match flags.mode.as_str() {
        "gamma-star" => {
            cfg.mode = Mode::Scalar(optimal_scalar(&oracle.pair)?);
        }
        "metric-star" => {
            let tuned = tune(&oracle.pair)?;
            cfg.mode = Mode::Metric(tuned.to_metric(problem.cone_dim())?);
        }
        other => return Err(Error::Parse(format!("unknown mode {other:?}"))),
    }
    problem.solve(&cfg)
}

fn run(cli: Cli) -> Result<bool, Error> {
    match cli.command {
        Command::Generate(args) => {
            let cfg = args.gen.config()?;
            let text = match generate(&cfg)? {
                Generated::Sdp(p) => p.to_text(),
                Generated::Qcqp(p) => p.to_text(),
                Generated::Bqp { a0, b0, .. } => QcqpProblem::bqp_to_text(&a0, &b0),
            };
            emit(&args.out, &text)?;
            Ok(true)
        }
        Command::Solve(args) => {
            let problem = args.input.load()?;
            let report = run_solve(&problem, &args.solver)?;
            emit(&args.out, &report.to_csv())?;
            eprintln!(
                "iterations={} converged={} wall_ms={:.1}",
                report.iterations, report.converged, report.wall_ms
            );
            Ok(report.converged)
        }
        Command::Tune(args) => {
            let problem = args.input.load()?;
            let oracle = oracle_solve_refined(&problem, args.eps_oracle)?;
            let tuned = tune(&oracle.pair)?;
            emit(&args.out, &tuned.to_csv())?;
            eprintln!(
                "k_star={} gamma1={:.6e} gamma2={:.6e} objective={:.6e}",
                tuned.k_star, tuned.gamma1, tuned.gamma2, tuned.objective
            );
            Ok(true)
        }
        Command::ScalarLimit(args) => {
            let problem = args.input.load()?;
            let oracle = oracle_solve_refined(&problem, args.solver.eps_oracle)?;
            let gamma_star = optimal_scalar(&oracle.pair)?;
            let grid = if args.points == 40 {
                default_scalar_grid(gamma_star)
            } else {
                harness::log_grid(gamma_star / 100.0, gamma_star * 100.0, args.points)
            };
            let base = SolverConfig::scalar(1.0)
                .with_eps(args.solver.eps)
                .with_max_iter(args.solver.max_iter)
                .with_reference(oracle.x.clone());
            let result = scalar_limit_search(&problem, &grid, &base, true)?;
            emit(&args.out, &result.curve_csv())?;
            eprintln!(
                "gamma_best={:.6e} iterations_best={} saturated={}",
                result.gamma_best, result.iterations_best, result.saturated
            );
            Ok(!result.saturated)
        }
        Command::Sweep(args) => {
            let kind = ProblemKind::from_str(&args.gen.kind)?;
            let cfg = SweepConfig {
                kind,
                n_values: parse_list(&args.n_values, "dimension")?,
                modes: parse_modes(&args.modes)?,
                m: args.gen.m,
                sigma_a: args.gen.sigma_a,
                sigma_b: args.gen.sigma_b,
                noise: args.gen.noise,
                seed: args.gen.seed,
                eps: args.eps,
                max_iter: args.max_iter,
                eps_oracle: args.eps_oracle,
            };
            let result = sweep(&cfg);
            emit(&args.out, &result.to_csv(&cfg))?;
            let ok = result.rows.iter().all(|r| r.error.is_none() && r.converged);
            Ok(ok)
        }
        Command::BqpRoundtrip(args) => {
            let n_values: Vec<usize> = parse_list(&args.n_values, "dimension")?;
            let cfg = SolverConfig::scalar(1.0).with_eps(args.eps).with_max_iter(args.max_iter);
            let mut rows = Vec::new();
            for (i, &n) in n_values.iter().enumerate() {
                for j in 0..args.count {
                    let seed = args
                        .seed
                        .wrapping_add((i * args.count + j) as u64)
                        .wrapping_mul(0x9E3779B97F4A7C15);
                    rows.push(bqp_round_trip(n, args.noise, seed, &cfg)?);
                }
            }
            emit(&args.out, &round_trip_csv(&rows, args.noise))?;
            let recovered = rows.iter().filter(|r| r.matches_planted).count();
            eprintln!("planted recovery {recovered}/{}", rows.len());
            Ok(rows.iter().all(|r| r.tight))
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(2),
        Err(Error::DegenerateData(msg)) => {
            eprintln!("degenerate data: {msg}");
            ExitCode::from(3)
        }
        Err(Error::OracleFailure { max_iter }) => {
            eprintln!("oracle failed to converge within {max_iter} iterations");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
