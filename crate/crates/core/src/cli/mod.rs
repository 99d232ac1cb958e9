//! `goldeneq` command-line front end.
//!
//! Exit codes: 0 converged / success, 2 usage or parse error, 3 iteration
//! budget exhausted, 4 solver error, 5 failed condition check.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::bench;
use crate::error::Error;
use crate::linalg::{fmt_g17, parse_reals, Vector};
use crate::problems::conditions::{check_all, DEFAULT_SAMPLES, DEFAULT_SEED};
use crate::problems::instances::{builtin, start_preset, BUILTIN_NAMES, DEFAULT_GRID};
use crate::problems::{load_problem, ProblemInstance};
use crate::solvers::{admissible_step, run, SolverConfig, SolverKind, Status, StepSchedule};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_MAX_ITER: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_CHECK: i32 = 5;

#[derive(Debug, Parser)]
#[command(name = "goldeneq", version, about = "Golden-ratio and extragradient solvers for equilibrium problems")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run one solver on a problem and write its trace
    Run(RunArgs),
    /// Reproduce the GRA1 vs GEA comparison on the 5-dimensional affine problem
    Table1(TableArgs),
    /// Reproduce the GRA2 / Hieu / Popov comparison on the L^2 ball problem
    Table2(Table2Args),
    /// List built-in problems, solvers and starting-point presets
    List,
    /// Sample the structural conditions a problem declares
    Check(CheckArgs),
}

#[derive(Debug, Args)]
pub struct ProblemArg {
    /// Built-in problem name or path to a problem file
    pub problem: String,
    /// Grid size for L^2 problems
    #[arg(long)]
    pub grid: Option<usize>,
}

#[derive(Debug, Args)]
pub struct RunArgs {
    #[command(flatten)]
    pub problem: ProblemArg,
    /// gra1, gra2, gra3, graal-vi, gea, hieu or popov
    #[arg(long)]
    pub solver: String,
    /// Constant step size
    #[arg(long, conflicts_with = "schedule")]
    pub lambda: Option<f64>,
    /// `c`, `a/(k+1)` or `beta:b/(k+1)`
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long, default_value_t = 1e-6)]
    pub tol: f64,
    #[arg(long, default_value_t = 10_000)]
    pub max_iter: usize,
    /// Comma-separated coordinates or a preset (paper-x0-1, paper-x0-2)
    #[arg(long, allow_hyphen_values = true)]
    pub x0: Option<String>,
    /// Second starting point (y^1, or y^0 for popov); defaults to x0
    #[arg(long, allow_hyphen_values = true)]
    pub y1: Option<String>,
    /// First GEA step; defaults to the main step
    #[arg(long)]
    pub alpha: Option<f64>,
    /// Prox subproblem tolerance
    #[arg(long)]
    pub inner_tol: Option<f64>,
    /// Record the energy column against a high-accuracy reference solution
    #[arg(long)]
    pub energy: bool,
    /// Trace CSV path
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write all times as 0 so outputs are reproducible byte for byte
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Output directory
    #[arg(long, default_value = ".")]
    pub out_dir: PathBuf,
    #[arg(long)]
    pub no_timing: bool,
}

#[derive(Debug, Args)]
pub struct Table2Args {
    #[command(flatten)]
    pub common: TableArgs,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[command(flatten)]
    pub problem: ProblemArg,
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
}

struct Failure {
    code: i32,
    msg: String,
}

impl Failure {
    fn new(code: i32, msg: impl ToString) -> Self {
        Self {
            code,
            msg: msg.to_string(),
        }
    }
}

fn usage(e: impl ToString) -> Failure {
    Failure::new(EXIT_USAGE, e)
}

fn solver_err(e: impl ToString) -> Failure {
    Failure::new(EXIT_SOLVER, e)
}

/// Seed from `EQ_SEED`, else 42.
pub fn seed_from_env() -> Result<u64, String> {
    match std::env::var("EQ_SEED") {
        Ok(s) => s.trim().parse().map_err(|_| format!("EQ_SEED is not an integer: {s:?}")),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

fn load(arg: &ProblemArg) -> Result<ProblemInstance, Error> {
    let path = Path::new(&arg.problem);
    if BUILTIN_NAMES.contains(&arg.problem.as_str()) && !path.exists() {
        builtin(&arg.problem, arg.grid.unwrap_or(DEFAULT_GRID))
    } else if path.exists() {
        load_problem(path, arg.grid)
    } else {
        Err(Error::InvalidArgument(format!(
            "{:?} is neither a built-in problem ({}) nor a file",
            arg.problem,
            BUILTIN_NAMES.join(", ")
        )))
    }
}

fn parse_point(problem: &ProblemInstance, s: &str, flag: &str) -> Result<Vector, Failure> {
    if let Some(v) = start_preset(s.trim(), &problem.space) {
        return v.map_err(usage);
    }
    let coords = parse_reals(s).map_err(|m| usage(format!("--{flag}: {m}")))?;
    problem
        .vector(coords)
        .map_err(|e| usage(format!("--{flag}: {e}")))
}

fn default_schedule(solver: SolverKind, problem: &ProblemInstance) -> Result<StepSchedule, Failure> {
    Ok(match solver {
        SolverKind::Gra1 | SolverKind::GraalVi | SolverKind::Gea => {
            StepSchedule::Constant(admissible_step(problem).ok_or_else(|| {
                usage(format!("{solver} needs --lambda: the problem declares no Lipschitz-type constants"))
            })?)
        }
        SolverKind::Gra3 => StepSchedule::Adaptive { b: 1.0 },
        _ => StepSchedule::Diminishing { a: 1.0 },
    })
}

fn cmd_run(a: &RunArgs) -> Result<i32, Failure> {
    let problem = load(&a.problem).map_err(usage)?;
    let solver: SolverKind = a.solver.parse().map_err(usage)?;
    let schedule = match (a.lambda, &a.schedule) {
        (Some(l), _) => StepSchedule::Constant(l),
        (None, Some(s)) => s.parse().map_err(usage)?,
        (None, None) => default_schedule(solver, &problem)?,
    };
    let x0 = match &a.x0 {
        Some(s) => parse_point(&problem, s, "x0")?,
        None => problem.default_start().map_err(solver_err)?,
    };
    let mut cfg = SolverConfig::new(schedule, x0)
        .tol(a.tol)
        .max_iter(a.max_iter)
        .timing(!a.no_timing);
    if let Some(s) = &a.y1 {
        cfg = cfg.y1(parse_point(&problem, s, "y1")?);
    }
    if let Some(al) = a.alpha {
        cfg = cfg.alpha(al);
    }
    if let Some(t) = a.inner_tol {
        cfg = cfg.inner_tol(t);
    }
    if a.energy {
        let z = match &problem.known_solution {
            Some(z) => z.clone(),
            None => bench::reference_solution(&problem, bench::REFERENCE_BUDGET).map_err(solver_err)?,
        };
        cfg = cfg.energy_reference(z);
    }

    let trace = run(solver, &problem, &cfg).map_err(solver_err)?;
    if let Some(out) = &a.out {
        let f = fs::File::create(out).map_err(|e| solver_err(format!("{}: {e}", out.display())))?;
        trace
            .write_csv(std::io::BufWriter::new(f))
            .map_err(|e| solver_err(format!("{}: {e}", out.display())))?;
    }
    let residual = trace.final_residual().map(fmt_g17).unwrap_or_else(|| "nan".into());
    println!("iterations={} residual={residual} status={}", trace.iterations(), trace.status);
    if let Some(z) = &trace.solution {
        println!("solution={}", z.to_row());
    }
    match trace.status {
        Status::Converged => Ok(EXIT_OK),
        Status::MaxIter => Ok(EXIT_MAX_ITER),
        Status::Error => Err(solver_err(trace.error.unwrap_or_default())),
    }
}

fn emit(result: bench::ExperimentResult, args: &TableArgs) -> Result<i32, Failure> {
    bench::write_outputs(&result, &args.out_dir).map_err(solver_err)?;
    print!("{}", result.table.to_markdown());
    Ok(EXIT_OK)
}

fn cmd_check(a: &CheckArgs) -> Result<i32, Failure> {
    let seed = seed_from_env().map_err(usage)?;
    let problem = match load(&a.problem) {
        Ok(p) => p,
        Err(e @ (Error::Parse { .. } | Error::Io(_) | Error::InvalidArgument(_))) => return Err(usage(e)),
        Err(e) => return Err(Failure::new(EXIT_CHECK, format!("FAIL construction: {e}"))),
    };
    println!("{} (dim {}, set {}, seed {seed}, {} samples)", problem.name, problem.dim(), problem.set, a.samples);
    let reports = check_all(&problem, a.samples, seed);
    let failed: Vec<_> = reports.iter().filter(|r| !r.passed()).map(|r| r.condition.clone()).collect();
    for r in &reports {
        println!("{r}");
    }
    if failed.is_empty() {
        Ok(EXIT_OK)
    } else {
        Err(Failure::new(EXIT_CHECK, format!("violated: {}", failed.join("; "))))
    }
}

fn cmd_list() -> i32 {
    println!("problems:");
    for name in BUILTIN_NAMES {
        let p = builtin(name, DEFAULT_GRID).expect("built-in problem");
        println!("  {name:<10} dim {:<4} {}", p.dim(), p.set);
    }
    println!("solvers:");
    for k in SolverKind::ALL {
        println!("  {k}");
    }
    println!("starting-point presets (L^2 problems): paper-x0-1, paper-x0-2");
    println!("schedules: c | a/(k+1) | beta:b/(k+1)");
    EXIT_OK
}

pub fn execute(cli: &Cli) -> i32 {
    let result = match &cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Table1(a) => bench::table1(!a.no_timing).map_err(solver_err).and_then(|r| emit(r, a)),
        Command::Table2(a) => bench::table2(a.grid, !a.common.no_timing)
            .map_err(solver_err)
            .and_then(|r| emit(r, &a.common)),
        Command::List => Ok(cmd_list()),
        Command::Check(a) => cmd_check(a),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            f.code
        }
    }
}

pub fn main() -> i32 {
    match Cli::try_parse() {
        Ok(cli) => execute(&cli),
        Err(e) => {
            let _ = e.print();
            e.exit_code()
        }
    }
}
