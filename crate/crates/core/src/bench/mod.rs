//! The two comparison experiments, the reference solution used for energy
//! checks, and their file outputs.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use crate::error::{Error, Result};
use crate::linalg::{fmt_g17, Vector};
use crate::problems::conditions::{solution_certificate, DEFAULT_SEED};
use crate::problems::instances::{example61_starts, start_function_1, start_function_2, DEFAULT_GRID};
use crate::problems::{example61, example62, ProblemInstance};
use crate::solvers::{run, RunTrace, SolverConfig, SolverKind, Status, StepSchedule};

pub const TABLE1_STEP: f64 = 0.27;
pub const TABLE1_TOL: f64 = 1e-6;
pub const TABLE2_STEP: f64 = 40.0;
pub const TABLE2_TOL: f64 = 1e-3;
pub const REFERENCE_TOL: f64 = 1e-12;
pub const REFERENCE_INNER_TOL: f64 = 1e-14;
pub const REFERENCE_BUDGET: usize = 100_000;
/// Accepted `min_y f(z, y)` for a reference solution.
pub const REFERENCE_CERTIFICATE: f64 = -1e-8;

/// High-accuracy GEA solution, validated by sampling `f(z, .)` over `C`.
pub fn reference_solution(problem: &ProblemInstance, budget: usize) -> Result<Vector> {
    let lambda = match problem.bifunction.lipschitz() {
        Some((c1, c2)) => 0.25 / c1.max(c2),
        None => 0.1,
    };
    let cfg = SolverConfig::new(StepSchedule::Constant(lambda), problem.default_start()?)
        .tol(REFERENCE_TOL)
        .max_iter(budget)
        .inner_tol(REFERENCE_INNER_TOL)
        .timing(false);
    let trace = run(SolverKind::Gea, problem, &cfg)?;
    if trace.status != Status::Converged {
        return Err(Error::Reference(format!(
            "GEA stopped with status {} after {} iterations (residual {:e}){}",
            trace.status,
            trace.iterations(),
            trace.final_residual().unwrap_or(f64::NAN),
            trace.error.map(|e| format!(": {e}")).unwrap_or_default()
        )));
    }
    let z = trace.solution.expect("converged run has a solution");
    let cert = solution_certificate(problem, &z, 1000, DEFAULT_SEED);
    if cert < REFERENCE_CERTIFICATE {
        return Err(Error::Reference(format!("min f(z, y) = {cert:e} over sampled y")));
    }
    Ok(z)
}

#[derive(Debug, Clone)]
pub struct Start {
    pub id: String,
    pub label: String,
    pub point: Vector,
}

#[derive(Debug, Clone)]
pub struct Experiment {
    pub name: String,
    pub problem: ProblemInstance,
    pub solvers: Vec<(SolverKind, StepSchedule)>,
    pub starts: Vec<Start>,
    pub tol: f64,
    pub energy_reference: Option<Vector>,
    pub timing: bool,
}

#[derive(Debug, Clone)]
pub struct Cell {
    pub iterations: usize,
    pub seconds: f64,
    pub status: Status,
}

#[derive(Debug, Clone)]
pub struct ComparisonTable {
    pub name: String,
    pub title: String,
    pub starts: Vec<(String, String)>,
    pub rows: Vec<(SolverKind, Vec<Cell>)>,
}

impl ComparisonTable {
    pub fn iterations(&self, solver: SolverKind) -> Option<Vec<usize>> {
        self.rows
            .iter()
            .find(|(s, _)| *s == solver)
            .map(|(_, cells)| cells.iter().map(|c| c.iterations).collect())
    }

    pub fn to_markdown(&self) -> String {
        let mut s = format!("# {}\n\n| Solver |", self.title);
        for (_, label) in &self.starts {
            write!(s, " {label} Iter. | Sec. |").unwrap();
        }
        s.push_str("\n|---|");
        s.push_str(&"---:|---:|".repeat(self.starts.len()));
        s.push('\n');
        for (solver, cells) in &self.rows {
            write!(s, "| {solver} |").unwrap();
            for c in cells {
                let mark = if c.status == Status::Converged { "" } else { "*" };
                write!(s, " {}{mark} | {:.3} |", c.iterations, c.seconds).unwrap();
            }
            s.push('\n');
        }
        if self.rows.iter().flat_map(|(_, c)| c).any(|c| c.status != Status::Converged) {
            s.push_str("\n\\* did not converge\n");
        }
        s
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("solver,x0,iterations,seconds,status\n");
        for (solver, cells) in &self.rows {
            for ((id, _), c) in self.starts.iter().zip(cells) {
                writeln!(s, "{solver},{id},{},{},{}", c.iterations, fmt_g17(c.seconds), c.status).unwrap();
            }
        }
        s
    }
}

#[derive(Debug, Clone)]
pub struct ExperimentResult {
    pub table: ComparisonTable,
    /// `(solver, start id, trace)` in table order.
    pub traces: Vec<(SolverKind, String, RunTrace)>,
}

impl ExperimentResult {
    pub fn trace(&self, solver: SolverKind, start: &str) -> Option<&RunTrace> {
        self.traces
            .iter()
            .find(|(s, id, _)| *s == solver && id == start)
            .map(|(_, _, t)| t)
    }
}

pub fn run_experiment(exp: &Experiment, title: &str) -> Result<ExperimentResult> {
    let jobs: Vec<(SolverKind, &StepSchedule, &Start)> = exp
        .solvers
        .iter()
        .flat_map(|(k, s)| exp.starts.iter().map(move |st| (*k, s, st)))
        .collect();
    // Runs are independent; fan out and join in table order.
    let results: Vec<Result<RunTrace>> = std::thread::scope(|scope| {
        let handles: Vec<_> = jobs
            .iter()
            .map(|&(solver, schedule, start)| {
                scope.spawn(move || {
                    let mut cfg = SolverConfig::new(*schedule, start.point.clone())
                        .tol(exp.tol)
                        .timing(exp.timing);
                    if let (true, Some(z)) = (solver.is_golden(), &exp.energy_reference) {
                        cfg = cfg.energy_reference(z.clone());
                    }
                    run(solver, &exp.problem, &cfg)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("solver thread panicked")).collect()
    });

    let mut traces = Vec::with_capacity(jobs.len());
    for ((solver, _, start), r) in jobs.iter().zip(results) {
        let t = r?;
        if t.status == Status::Error {
            return Err(Error::Reference(format!(
                "{solver} from {}: {}",
                start.id,
                t.error.clone().unwrap_or_default()
            )));
        }
        traces.push((*solver, start.id.clone(), t));
    }
    let rows = exp
        .solvers
        .iter()
        .map(|(solver, _)| {
            let cells = traces
                .iter()
                .filter(|(s, _, _)| s == solver)
                .map(|(_, _, t)| Cell {
                    iterations: t.iterations(),
                    seconds: t.seconds,
                    status: t.status,
                })
                .collect();
            (*solver, cells)
        })
        .collect();
    Ok(ExperimentResult {
        table: ComparisonTable {
            name: exp.name.clone(),
            title: title.into(),
            starts: exp.starts.iter().map(|s| (s.id.clone(), s.label.clone())).collect(),
            rows,
        },
        traces,
    })
}

pub fn table1_experiment(timing: bool) -> Result<Experiment> {
    let problem = example61();
    let z = reference_solution(&problem, REFERENCE_BUDGET)?;
    let starts = example61_starts()
        .iter()
        .enumerate()
        .map(|(i, s)| {
            let label = format!(
                "x0=({})",
                s.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
            );
            Ok(Start {
                id: format!("x0-{}", i + 1),
                label,
                point: problem.vector(s.to_vec())?,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    let lam = StepSchedule::Constant(TABLE1_STEP);
    Ok(Experiment {
        name: "table1".into(),
        solvers: vec![(SolverKind::Gra1, lam), (SolverKind::Gea, lam)],
        starts,
        tol: TABLE1_TOL,
        energy_reference: Some(z),
        timing,
        problem,
    })
}

/// GRA1 against GEA on the 5-dimensional affine problem.
pub fn table1(timing: bool) -> Result<ExperimentResult> {
    let exp = table1_experiment(timing)?;
    run_experiment(&exp, "example61: GRA1 vs GEA, lambda = 0.27, tol 1e-6")
}

pub fn table2_experiment(n: usize, timing: bool) -> Result<Experiment> {
    let problem = example62(n)?;
    let starts = vec![
        Start {
            id: "x0-1".into(),
            label: "x0=(sin(-3t)+cos(-10t))/200".into(),
            point: start_function_1(&problem.space)?,
        },
        Start {
            id: "x0-2".into(),
            label: "x0=(t^3+1)e^(5t)/85".into(),
            point: start_function_2(&problem.space)?,
        },
    ];
    let lam = StepSchedule::Diminishing { a: TABLE2_STEP };
    Ok(Experiment {
        name: "table2".into(),
        solvers: vec![(SolverKind::Gra2, lam), (SolverKind::Hieu, lam), (SolverKind::Popov, lam)],
        starts,
        tol: TABLE2_TOL,
        energy_reference: problem.known_solution.clone(),
        timing,
        problem,
    })
}

/// GRA2 against Hieu's and Popov's methods on the `L^2` ball problem.
pub fn table2(n: usize, timing: bool) -> Result<ExperimentResult> {
    let exp = table2_experiment(n, timing)?;
    run_experiment(
        &exp,
        &format!("example62: GRA2 vs Hieu vs Popov, lambda_k = 40/(k+1), tol 1e-3, N = {n}"),
    )
}

pub fn table2_default(timing: bool) -> Result<ExperimentResult> {
    table2(DEFAULT_GRID, timing)
}

/// Two-column `k,residual` series.
pub fn residual_csv(trace: &RunTrace) -> String {
    let mut s = String::from("k,residual\n");
    for r in &trace.records {
        writeln!(s, "{},{}", r.k, fmt_g17(r.residual)).unwrap();
    }
    s
}

/// Writes `traces/<solver>_<start>.csv` under `dir`.
pub fn convergence_csv(result: &ExperimentResult, dir: &Path) -> Result<()> {
    let traces = dir.join("traces");
    fs::create_dir_all(&traces)?;
    for (solver, start, trace) in &result.traces {
        fs::write(traces.join(format!("{solver}_{start}.csv")), residual_csv(trace))?;
    }
    Ok(())
}

/// Writes `<name>.md`, `<name>.csv` and the traces.
pub fn write_outputs(result: &ExperimentResult, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    let name = &result.table.name;
    fs::write(dir.join(format!("{name}.md")), result.table.to_markdown())?;
    fs::write(dir.join(format!("{name}.csv")), result.table.to_csv())?;
    convergence_csv(result, dir)
}
