//! Benchmark harness for the `ssbroyden` optimizers.
//!
//! Three subcommands:
//!
//! - `run` — one (problem × optimizer × globalization) minimization with an
//!   optional per-iteration CSV trace;
//! - `table-rosenbrock` — the Rosenbrock benchmark table across dimensions
//!   and optimizers under a fixed protocol (start at all-0.5, Euclidean
//!   gradient tolerance 1e−6, iteration cap 5000, H₀ = I);
//! - `compare` — several optimizers on one problem, emitting a long-format
//!   CSV for loss-vs-iteration overlays.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime (numerical or I/O)
//! failure. All numbers in CSV output are serialized in shortest
//! round-trip form, so identical runs diff byte-for-byte.

use clap::{Args, Parser, Subcommand, ValueEnum};
use ssbroyden::linesearch::LineSearchConfig;
use ssbroyden::neuralnet::{
    poisson_pinnlite, regression_problem, sin_2pi, MlpProblem, DEFAULT_FD_H, DEFAULT_LAMBDA_BC,
    DEFAULT_LAMBDA_PDE, DEFAULT_N_COLLOC, DEFAULT_PINN_ARCH,
};
use ssbroyden::optimizers::{
    minimize, ConvergenceCriteria, Globalization, GradNorm, Method, OptimizerConfig, RunResult,
};
use ssbroyden::testfns::{quadratic_xy, rosenbrock, AnalyticProblem};
use ssbroyden::trace::{TraceRecord, CSV_HEADER};
use ssbroyden::{DenseVector, EvalCounters, Objective, Real};
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "ssbroyden",
    about = "Quasi-Newton optimization benchmarks: BFGS, SSBFGS, SSBroyden, L-BFGS, GD, Adam",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one optimization and optionally write its iteration trace as CSV.
    Run(RunArgs),
    /// Reproduce the Rosenbrock benchmark table across dimensions and optimizers.
    TableRosenbrock(TableArgs),
    /// Run several optimizers on one problem and emit overlay CSV data.
    Compare(CompareArgs),
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ProblemArg {
    Rosenbrock,
    QuadraticXy,
    Regression,
    PoissonPinnlite,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizerArg {
    Gd,
    Adam,
    Bfgs,
    #[value(name = "ssbfgs")]
    SsBfgs,
    #[value(name = "ssbroyden")]
    SsBroyden,
    Lbfgs,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GlobArg {
    Wolfe,
    Backtracking,
    TrustRegion,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum GnormArg {
    L2,
    Linf,
}

impl OptimizerArg {
    fn to_method(self) -> Method {
        match self {
            OptimizerArg::Gd => Method::Gd,
            OptimizerArg::Adam => Method::Adam,
            OptimizerArg::Bfgs => Method::Bfgs,
            OptimizerArg::SsBfgs => Method::SsBfgs,
            OptimizerArg::SsBroyden => Method::SsBroyden,
            OptimizerArg::Lbfgs => Method::Lbfgs,
        }
    }

    fn name(self) -> &'static str {
        match self {
            OptimizerArg::Gd => "gd",
            OptimizerArg::Adam => "adam",
            OptimizerArg::Bfgs => "bfgs",
            OptimizerArg::SsBfgs => "ssbfgs",
            OptimizerArg::SsBroyden => "ssbroyden",
            OptimizerArg::Lbfgs => "lbfgs",
        }
    }

    /// Label naming the optimizer together with its step-acceptance rule.
    fn label(self, glob: GlobArg) -> String {
        match self {
            OptimizerArg::Adam => "adam".to_string(),
            _ => format!("{}+{}", self.name(), glob.name()),
        }
    }
}

impl GlobArg {
    fn to_globalization(self) -> Globalization {
        match self {
            GlobArg::Wolfe => Globalization::Wolfe,
            GlobArg::Backtracking => Globalization::Backtracking,
            GlobArg::TrustRegion => Globalization::TrustRegion,
        }
    }

    fn name(self) -> &'static str {
        match self {
            GlobArg::Wolfe => "wolfe",
            GlobArg::Backtracking => "backtracking",
            GlobArg::TrustRegion => "trust-region",
        }
    }
}

/// Which function to minimize and where to start.
#[derive(Args)]
struct ProblemArgs {
    /// Test problem.
    #[arg(long, value_enum)]
    problem: ProblemArg,
    /// Dimension (rosenbrock only, ≥ 2; quadratic-xy is fixed at 2).
    #[arg(long)]
    dim: Option<usize>,
    /// Seed for the network initialization of the neural problems.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Start from a constant vector with this fill value.
    #[arg(long, conflicts_with = "x0", allow_hyphen_values = true)]
    x0_fill: Option<Real>,
    /// Start from this explicit comma-separated vector.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<Real>>,
}

/// Stopping rules (0 disables ftol/xtol).
#[derive(Args)]
struct CriteriaArgs {
    /// Gradient-norm tolerance.
    #[arg(long, default_value_t = 1e-6)]
    gtol: Real,
    /// Norm for the gradient tolerance.
    #[arg(long, value_enum, default_value = "l2")]
    gnorm: GnormArg,
    /// Stop when |f_k − f_{k−1}| falls below this (0 = disabled).
    #[arg(long, default_value_t = 0.0)]
    ftol: Real,
    /// Stop when the step length falls below this (0 = disabled).
    #[arg(long, default_value_t = 0.0)]
    xtol: Real,
    /// Iteration cap.
    #[arg(long, default_value_t = 5000)]
    max_iters: u64,
}

#[derive(Args)]
struct RunArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    criteria: CriteriaArgs,
    /// Optimizer.
    #[arg(long, value_enum, default_value = "bfgs")]
    optimizer: OptimizerArg,
    /// Step-acceptance strategy (ignored by adam).
    #[arg(long, value_enum, default_value = "wolfe")]
    globalization: GlobArg,
    /// History length for lbfgs.
    #[arg(long, default_value_t = 10)]
    lbfgs_memory: usize,
    /// Write the per-iteration trace to this CSV file.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Args)]
struct TableArgs {
    /// Dimensions to benchmark.
    #[arg(long, value_delimiter = ',', default_values_t = vec![2, 5, 10, 20])]
    dims: Vec<usize>,
    /// Optimizers to benchmark (quasi-Newtons run with Wolfe, gd with
    /// backtracking, adam standalone).
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = vec![OptimizerArg::Gd, OptimizerArg::Adam, OptimizerArg::Bfgs,
                                  OptimizerArg::SsBfgs, OptimizerArg::SsBroyden])]
    optimizers: Vec<OptimizerArg>,
    /// Write the table rows to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CompareArgs {
    #[command(flatten)]
    problem: ProblemArgs,
    #[command(flatten)]
    criteria: CriteriaArgs,
    /// Optimizers to overlay.
    #[arg(long, value_enum, value_delimiter = ',', required = true)]
    optimizers: Vec<OptimizerArg>,
    /// Step-acceptance strategy shared by all line-search optimizers.
    #[arg(long, value_enum, default_value = "wolfe")]
    globalization: GlobArg,
    /// History length for lbfgs.
    #[arg(long, default_value_t = 10)]
    lbfgs_memory: usize,
    /// Write the long-format overlay data to this CSV file.
    #[arg(long)]
    out: Option<PathBuf>,
}

enum CliError {
    Usage(String),
    Runtime(String),
}

impl CliError {
    fn usage(msg: impl Into<String>) -> Self {
        CliError::Usage(msg.into())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(format!("i/o error: {e}"))
    }
}

impl From<ssbroyden::optimizers::OptimizeError> for CliError {
    fn from(e: ssbroyden::optimizers::OptimizeError) -> Self {
        CliError::Runtime(format!("numerical failure: {e}"))
    }
}

/// One problem instance behind a single dispatchable type.
enum AnyProblem {
    Analytic(AnalyticProblem),
    Mlp(MlpProblem),
}

impl AnyProblem {
    fn describe(&self, args: &ProblemArgs) -> String {
        match args.problem {
            ProblemArg::Rosenbrock => format!("rosenbrock({})", self.dim()),
            ProblemArg::QuadraticXy => "quadratic-xy".to_string(),
            ProblemArg::Regression => format!("regression(seed {})", args.seed),
            ProblemArg::PoissonPinnlite => format!("poisson-pinnlite(seed {})", args.seed),
        }
    }
}

impl Objective for AnyProblem {
    fn dim(&self) -> usize {
        match self {
            AnyProblem::Analytic(p) => p.dim(),
            AnyProblem::Mlp(p) => p.dim(),
        }
    }

    fn value(&mut self, x: &DenseVector) -> Real {
        match self {
            AnyProblem::Analytic(p) => p.value(x),
            AnyProblem::Mlp(p) => p.value(x),
        }
    }

    fn gradient(&mut self, x: &DenseVector) -> DenseVector {
        match self {
            AnyProblem::Analytic(p) => p.gradient(x),
            AnyProblem::Mlp(p) => p.gradient(x),
        }
    }

    fn value_grad(&mut self, x: &DenseVector) -> (Real, DenseVector) {
        match self {
            AnyProblem::Analytic(p) => p.value_grad(x),
            AnyProblem::Mlp(p) => p.value_grad(x),
        }
    }

    fn counters(&self) -> EvalCounters {
        match self {
            AnyProblem::Analytic(p) => p.counters(),
            AnyProblem::Mlp(p) => p.counters(),
        }
    }

    fn reset_counters(&mut self) {
        match self {
            AnyProblem::Analytic(p) => p.reset_counters(),
            AnyProblem::Mlp(p) => p.reset_counters(),
        }
    }
}

fn build_problem(args: &ProblemArgs) -> Result<AnyProblem, CliError> {
    match args.problem {
        ProblemArg::Rosenbrock => {
            let dim = args.dim.unwrap_or(2);
            if dim < 2 {
                return Err(CliError::usage("--dim must be at least 2 for rosenbrock"));
            }
            Ok(AnyProblem::Analytic(rosenbrock(dim)))
        }
        ProblemArg::QuadraticXy => {
            if matches!(args.dim, Some(d) if d != 2) {
                return Err(CliError::usage("quadratic-xy has dimension 2"));
            }
            Ok(AnyProblem::Analytic(quadratic_xy()))
        }
        ProblemArg::Regression => {
            if args.dim.is_some() {
                return Err(CliError::usage(
                    "--dim does not apply to regression (architecture is fixed)",
                ));
            }
            Ok(AnyProblem::Mlp(regression_problem(
                &[1, 16, 1],
                32,
                sin_2pi,
                args.seed,
            )))
        }
        ProblemArg::PoissonPinnlite => {
            if args.dim.is_some() {
                return Err(CliError::usage(
                    "--dim does not apply to poisson-pinnlite (architecture is fixed)",
                ));
            }
            Ok(AnyProblem::Mlp(poisson_pinnlite(
                &DEFAULT_PINN_ARCH,
                DEFAULT_N_COLLOC,
                DEFAULT_FD_H,
                DEFAULT_LAMBDA_PDE,
                DEFAULT_LAMBDA_BC,
                args.seed,
            )))
        }
    }
}

fn build_x0(args: &ProblemArgs, problem: &AnyProblem) -> Result<DenseVector, CliError> {
    if let Some(values) = &args.x0 {
        if values.len() != problem.dim() {
            return Err(CliError::usage(format!(
                "--x0 has {} components but the problem has dimension {}",
                values.len(),
                problem.dim()
            )));
        }
        return Ok(DenseVector::new(values.clone()));
    }
    if let Some(fill) = args.x0_fill {
        return Ok(DenseVector::filled(problem.dim(), fill));
    }
    Ok(match problem {
        // Benchmark-protocol default start for the analytic problems.
        AnyProblem::Analytic(_) => DenseVector::filled(problem.dim(), 0.5),
        AnyProblem::Mlp(p) => p.initial_params(),
    })
}

fn build_config(
    optimizer: OptimizerArg,
    glob: GlobArg,
    criteria: &CriteriaArgs,
    lbfgs_memory: usize,
) -> OptimizerConfig {
    OptimizerConfig {
        method: optimizer.to_method(),
        globalization: glob.to_globalization(),
        criteria: ConvergenceCriteria {
            gtol: criteria.gtol,
            gnorm: match criteria.gnorm {
                GnormArg::L2 => GradNorm::L2,
                GnormArg::Linf => GradNorm::Linf,
            },
            ftol: criteria.ftol,
            xtol: criteria.xtol,
            max_iters: criteria.max_iters,
        },
        linesearch: LineSearchConfig::default(),
        lbfgs_memory,
        ..Default::default()
    }
}

fn write_trace(path: &PathBuf, trace: &[TraceRecord]) -> Result<(), CliError> {
    let mut out = String::with_capacity(64 * (trace.len() + 1));
    out.push_str(CSV_HEADER);
    out.push('\n');
    for record in trace {
        out.push_str(&record.csv_row());
        out.push('\n');
    }
    std::fs::write(path, out)?;
    Ok(())
}

fn summary_line(label: &str, problem_desc: &str, result: &RunResult) -> String {
    let (n_fev, n_gev, elapsed) = match result.trace.last() {
        Some(last) => (last.n_fev, last.n_gev, last.elapsed_s),
        None => (1, 1, 0.0), // converged at the initial evaluation
    };
    format!(
        "problem={} optimizer={} status={} iters={} f={} gnorm_l2={} n_fev={} n_gev={} elapsed_s={:.3}",
        problem_desc,
        label,
        result.status,
        result.iters(),
        result.f_star,
        result
            .trace
            .last()
            .map(|r| r.gnorm_l2)
            .unwrap_or(Real::NAN),
        n_fev,
        n_gev,
        elapsed
    )
}

fn cmd_run(args: &RunArgs) -> Result<(), CliError> {
    if args.optimizer == OptimizerArg::Adam && args.globalization == GlobArg::TrustRegion {
        return Err(CliError::usage("adam does not use a globalization"));
    }
    if matches!(args.optimizer, OptimizerArg::Gd | OptimizerArg::Lbfgs)
        && args.globalization == GlobArg::TrustRegion
    {
        return Err(CliError::usage(
            "trust-region requires a dense quasi-Newton optimizer (bfgs, ssbfgs, ssbroyden)",
        ));
    }
    let mut problem = build_problem(&args.problem)?;
    let x0 = build_x0(&args.problem, &problem)?;
    let config = build_config(
        args.optimizer,
        args.globalization,
        &args.criteria,
        args.lbfgs_memory,
    );
    let result = minimize(&mut problem, &config, &x0)?;
    if let Some(path) = &args.trace {
        write_trace(path, &result.trace)?;
    }
    let label = args.optimizer.label(args.globalization);
    println!(
        "{}",
        summary_line(&label, &problem.describe(&args.problem), &result)
    );
    if let AnyProblem::Mlp(p) = &problem {
        if args.problem.problem == ProblemArg::PoissonPinnlite {
            println!(
                "rel_l2_vs_exact={} (201-point grid, exact solution sin(pi x))",
                p.rel_l2_vs_exact(&result.x_star, 201)
            );
        }
    }
    Ok(())
}

struct BenchRow {
    dim: usize,
    label: String,
    iterations: u64,
    final_loss: Real,
    x_first: Real,
    x_last: Real,
    status: String,
}

impl BenchRow {
    fn csv(&self) -> String {
        format!(
            "{},{},{},{},{},{},{}",
            self.dim, self.label, self.iterations, self.final_loss, self.x_first, self.x_last,
            self.status
        )
    }
}

fn table_cell(dim: usize, optimizer: OptimizerArg) -> BenchRow {
    // Fixed benchmark protocol: start at all-0.5, Euclidean gradient-norm
    // tolerance 1e−6, cap 5000, H₀ = I. GD backtracks, the quasi-Newton
    // methods use Strong Wolfe, Adam runs standalone.
    let glob = match optimizer {
        OptimizerArg::Gd => GlobArg::Backtracking,
        _ => GlobArg::Wolfe,
    };
    let label = optimizer.label(glob);
    let mut problem = rosenbrock(dim);
    let config = OptimizerConfig {
        method: optimizer.to_method(),
        globalization: glob.to_globalization(),
        criteria: ConvergenceCriteria {
            gtol: 1e-6,
            gnorm: GradNorm::L2,
            max_iters: 5000,
            ..Default::default()
        },
        ..Default::default()
    };
    let x0 = DenseVector::filled(dim, 0.5);
    match minimize(&mut problem, &config, &x0) {
        Ok(result) => BenchRow {
            dim,
            label,
            iterations: result.iters(),
            final_loss: result.f_star,
            x_first: result.x_star[0],
            x_last: result.x_star[dim - 1],
            status: result.status.to_string(),
        },
        // A failed cell is reported in place; the rest of the table stands.
        Err(e) => BenchRow {
            dim,
            label,
            iterations: 0,
            final_loss: Real::NAN,
            x_first: Real::NAN,
            x_last: Real::NAN,
            status: format!("error: {e}"),
        },
    }
}

fn cmd_table(args: &TableArgs) -> Result<(), CliError> {
    if args.dims.iter().any(|&d| d < 2) {
        return Err(CliError::usage("rosenbrock dimensions must be at least 2"));
    }
    let mut rows = Vec::new();
    for &dim in &args.dims {
        for &optimizer in &args.optimizers {
            rows.push(table_cell(dim, optimizer));
        }
    }

    println!(
        "{:<5} {:<22} {:>7} {:>12} {:>14} {:>14}  {}",
        "dim", "optimizer", "iters", "final loss", "x[0]", "x[n-1]", "status"
    );
    for row in &rows {
        println!(
            "{:<5} {:<22} {:>7} {:>12.3e} {:>14.8} {:>14.8}  {}",
            row.dim, row.label, row.iterations, row.final_loss, row.x_first, row.x_last, row.status
        );
    }

    if let Some(path) = &args.out {
        let mut out = String::from("dim,optimizer,iterations,final_loss,x_first,x_last,status\n");
        for row in &rows {
            let _ = writeln!(out, "{}", row.csv());
        }
        std::fs::write(path, out)?;
    }
    Ok(())
}

fn cmd_compare(args: &CompareArgs) -> Result<(), CliError> {
    if args.optimizers.is_empty() {
        return Err(CliError::usage("--optimizers needs at least one entry"));
    }
    let mut csv = String::from("optimizer,iter,f,gnorm_l2\n");
    for &optimizer in &args.optimizers {
        let glob = match optimizer {
            OptimizerArg::Gd => GlobArg::Backtracking,
            _ => args.globalization,
        };
        let mut problem = build_problem(&args.problem)?;
        let x0 = build_x0(&args.problem, &problem)?;
        let config = build_config(optimizer, glob, &args.criteria, args.lbfgs_memory);
        let result = minimize(&mut problem, &config, &x0)?;
        let label = optimizer.label(glob);
        for record in &result.trace {
            let _ = writeln!(csv, "{},{},{},{}", label, record.iter, record.f, record.gnorm_l2);
        }
        println!(
            "{}",
            summary_line(&label, &problem.describe(&args.problem), &result)
        );
    }
    if let Some(path) = &args.out {
        std::fs::write(path, csv)?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Keep clap's rendered message but force our exit-code contract:
            // help/version print to stdout and succeed, anything else is a
            // usage error.
            let is_help = matches!(
                e.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            );
            let _ = e.print();
            return if is_help {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            };
        }
    };
    let outcome = match &cli.command {
        Command::Run(args) => cmd_run(args),
        Command::TableRosenbrock(args) => cmd_table(args),
        Command::Compare(args) => cmd_compare(args),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(CliError::Usage(msg)) => {
            eprintln!("usage error: {msg}");
            ExitCode::from(1)
        }
        Err(CliError::Runtime(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(2)
        }
    }
}
