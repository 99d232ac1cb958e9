use std::fmt;
use std::io::Write;
use std::str::FromStr;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::linalg::{fmt_g17, Vector};
use crate::problems::ProblemInstance;
use crate::prox::DEFAULT_INNER_TOL;
use crate::solvers::baselines::{gea_step, hieu_step, popov_step};
use crate::solvers::golden::{gra1_step, gra2_step, gra3_step, graal_vi_step, GoldenState, GoldenStep};
use crate::solvers::StepSchedule;
use crate::PHI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SolverKind {
    Gra1,
    Gra2,
    Gra3,
    GraalVi,
    Gea,
    Hieu,
    Popov,
}

impl SolverKind {
    pub const ALL: [SolverKind; 7] = [
        SolverKind::Gra1,
        SolverKind::Gra2,
        SolverKind::Gra3,
        SolverKind::GraalVi,
        SolverKind::Gea,
        SolverKind::Hieu,
        SolverKind::Popov,
    ];

    pub fn id(self) -> &'static str {
        match self {
            SolverKind::Gra1 => "gra1",
            SolverKind::Gra2 => "gra2",
            SolverKind::Gra3 => "gra3",
            SolverKind::GraalVi => "graal-vi",
            SolverKind::Gea => "gea",
            SolverKind::Hieu => "hieu",
            SolverKind::Popov => "popov",
        }
    }

    pub fn is_golden(self) -> bool {
        matches!(
            self,
            SolverKind::Gra1 | SolverKind::Gra2 | SolverKind::Gra3 | SolverKind::GraalVi
        )
    }

    fn accepts(self, schedule: &StepSchedule) -> bool {
        use StepSchedule::*;
        match self {
            SolverKind::Gra1 | SolverKind::GraalVi => matches!(schedule, Constant(_)),
            SolverKind::Gra2 => matches!(schedule, Diminishing { .. }),
            SolverKind::Gra3 => matches!(schedule, Adaptive { .. }),
            SolverKind::Gea | SolverKind::Hieu | SolverKind::Popov => !matches!(schedule, Adaptive { .. }),
        }
    }

    fn schedule_requirement(self) -> &'static str {
        match self {
            SolverKind::Gra1 | SolverKind::GraalVi => "a constant step",
            SolverKind::Gra2 => "a diminishing schedule a/(k+1)",
            SolverKind::Gra3 => "an adaptive schedule beta:b/(k+1)",
            _ => "a constant or diminishing step",
        }
    }
}

impl fmt::Display for SolverKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SolverKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SolverKind::ALL
            .into_iter()
            .find(|k| k.id() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown solver {s:?}")))
    }
}

#[derive(Debug, Clone)]
pub struct SolverConfig {
    pub schedule: StepSchedule,
    pub tol: f64,
    pub max_iter: usize,
    pub x0: Vector,
    /// `y^1` for the golden-ratio solvers, `y^0` for Popov; defaults to `x0`.
    pub y1: Option<Vector>,
    /// First GEA step; defaults to the schedule's step.
    pub alpha: Option<f64>,
    /// Reference solution `z` for the energy column.
    pub energy_reference: Option<Vector>,
    pub inner_tol: f64,
    /// Record wall-clock times; when off every time is written as 0.
    pub timing: bool,
}

impl SolverConfig {
    pub fn new(schedule: StepSchedule, x0: Vector) -> Self {
        Self {
            schedule,
            tol: 1e-6,
            max_iter: 10_000,
            x0,
            y1: None,
            alpha: None,
            energy_reference: None,
            inner_tol: DEFAULT_INNER_TOL,
            timing: true,
        }
    }

    pub fn tol(mut self, tol: f64) -> Self {
        self.tol = tol;
        self
    }

    pub fn max_iter(mut self, n: usize) -> Self {
        self.max_iter = n;
        self
    }

    pub fn y1(mut self, y1: Vector) -> Self {
        self.y1 = Some(y1);
        self
    }

    pub fn alpha(mut self, alpha: f64) -> Self {
        self.alpha = Some(alpha);
        self
    }

    pub fn energy_reference(mut self, z: Vector) -> Self {
        self.energy_reference = Some(z);
        self
    }

    pub fn inner_tol(mut self, t: f64) -> Self {
        self.inner_tol = t;
        self
    }

    pub fn timing(mut self, on: bool) -> Self {
        self.timing = on;
        self
    }

    fn validate(&self, solver: SolverKind, problem: &ProblemInstance) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::InvalidArgument(format!("tol must be positive, got {}", self.tol)));
        }
        if !(self.inner_tol > 0.0) {
            return Err(Error::InvalidArgument(format!(
                "inner tolerance must be positive, got {}",
                self.inner_tol
            )));
        }
        self.schedule.validate()?;
        if !solver.accepts(&self.schedule) {
            return Err(Error::Unsupported {
                solver: solver.id(),
                requirement: solver.schedule_requirement(),
            });
        }
        if let Some(a) = self.alpha {
            if !(a >= 0.0) || !a.is_finite() {
                return Err(Error::InvalidArgument(format!("alpha must be nonnegative, got {a}")));
            }
        }
        let named = [("x0", Some(&self.x0)), ("y1", self.y1.as_ref()), ("z", self.energy_reference.as_ref())];
        for (name, v) in named {
            let Some(v) = v else { continue };
            if v.space().as_ref() != problem.space.as_ref() {
                return Err(Error::DimensionMismatch {
                    expected: problem.dim(),
                    got: v.dim(),
                });
            }
            if name != "z" && !problem.set.contains(v) {
                return Err(Error::Infeasible(format!("{name} is not in {}", problem.set)));
            }
        }
        if solver == SolverKind::GraalVi && problem.bifunction.operator(&self.x0).is_none() {
            return Err(Error::Unsupported {
                solver: solver.id(),
                requirement: "a variational-inequality bifunction",
            });
        }
        if let (SolverKind::Gra1 | SolverKind::GraalVi, StepSchedule::Constant(lambda)) = (solver, self.schedule) {
            if let Some(bound) = admissible_step(problem) {
                if lambda > bound {
                    return Err(Error::InadmissibleStep { lambda, bound });
                }
            }
        }
        Ok(())
    }
}

/// `phi / (4 max(c1, c2))`, which is `phi / (2L)` for an operator with
/// Lipschitz constant `L`.
pub fn admissible_step(problem: &ProblemInstance) -> Option<f64> {
    problem
        .bifunction
        .lipschitz()
        .map(|(c1, c2)| PHI / (4.0 * c1.max(c2)))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    MaxIter,
    Error,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Converged => "converged",
            Status::MaxIter => "max_iter",
            Status::Error => "error",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceRecord {
    /// Step number, starting at 1.
    pub k: usize,
    pub residual: f64,
    pub energy: Option<f64>,
    /// Milliseconds since the start of the run, at the end of this step.
    pub wall_ms: f64,
}

#[derive(Debug, Clone)]
pub struct RunTrace {
    pub solver: SolverKind,
    pub records: Vec<TraceRecord>,
    pub status: Status,
    /// Last solution estimate; `None` only when no step ran.
    pub solution: Option<Vector>,
    pub error: Option<String>,
    pub seconds: f64,
}

impl RunTrace {
    pub fn iterations(&self) -> usize {
        self.records.len()
    }

    pub fn final_residual(&self) -> Option<f64> {
        self.records.last().map(|r| r.residual)
    }

    pub fn residuals(&self) -> Vec<f64> {
        self.records.iter().map(|r| r.residual).collect()
    }

    pub fn write_csv<W: Write>(&self, mut w: W) -> std::io::Result<()> {
        writeln!(w, "k,residual,energy,wall_ms")?;
        for r in &self.records {
            let energy = r.energy.map(fmt_g17).unwrap_or_default();
            writeln!(w, "{},{},{},{}", r.k, fmt_g17(r.residual), energy, fmt_g17(r.wall_ms))?;
        }
        Ok(())
    }

    pub fn to_csv(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("ascii output")
    }
}

enum Iterate {
    Golden(GoldenState),
    Gea(Vector),
    Hieu(Vector),
    Popov { x: Vector, y: Vector },
}

struct Stepped {
    residual: f64,
    energy: Option<f64>,
    solution: Vector,
}

impl Iterate {
    fn step(&mut self, solver: SolverKind, problem: &ProblemInstance, cfg: &SolverConfig, i: usize) -> Result<Stepped> {
        let lambda = cfg.schedule.at(i);
        let tol = cfg.inner_tol;
        match self {
            Iterate::Golden(state) => {
                let energy = cfg.energy_reference.as_ref().map(|z| state.energy(z));
                let GoldenStep { state: next, residual, .. } = match solver {
                    SolverKind::Gra1 => gra1_step(state, problem, lambda, tol)?,
                    SolverKind::Gra2 => gra2_step(state, problem, lambda, tol)?,
                    SolverKind::Gra3 => gra3_step(state, problem, lambda)?,
                    SolverKind::GraalVi => graal_vi_step(state, problem, lambda)?,
                    _ => unreachable!("golden state for a baseline"),
                };
                let solution = next.y.clone();
                *state = next;
                Ok(Stepped { residual, energy, solution })
            }
            Iterate::Gea(x) => {
                let s = gea_step(problem, x, cfg.alpha.unwrap_or(lambda), lambda, tol)?;
                *x = s.x_next.clone();
                Ok(Stepped { residual: s.residual, energy: None, solution: s.x_next })
            }
            Iterate::Hieu(x) => {
                let s = hieu_step(problem, x, lambda, tol)?;
                *x = s.x_next;
                Ok(Stepped { residual: s.residual, energy: None, solution: s.y })
            }
            Iterate::Popov { x, y } => {
                let s = popov_step(problem, x, y, lambda, tol)?;
                *x = s.x_next;
                *y = s.y_next.clone();
                Ok(Stepped { residual: s.residual, energy: None, solution: s.y_next })
            }
        }
    }
}

/// Iterates until the solver's residual drops below `tol` or `max_iter`
/// steps have run. Invalid configurations are errors; failures inside a
/// step end the run with [`Status::Error`].
pub fn run(solver: SolverKind, problem: &ProblemInstance, cfg: &SolverConfig) -> Result<RunTrace> {
    cfg.validate(solver, problem)?;
    let y1 = cfg.y1.clone().unwrap_or_else(|| cfg.x0.clone());
    let mut iterate = match solver {
        s if s.is_golden() => Iterate::Golden(GoldenState::new(cfg.x0.clone(), y1)?),
        SolverKind::Gea => Iterate::Gea(cfg.x0.clone()),
        SolverKind::Hieu => Iterate::Hieu(cfg.x0.clone()),
        _ => Iterate::Popov { x: cfg.x0.clone(), y: y1 },
    };

    let start = Instant::now();
    let elapsed_ms = || if cfg.timing { start.elapsed().as_secs_f64() * 1e3 } else { 0.0 };
    let mut trace = RunTrace {
        solver,
        records: Vec::new(),
        status: Status::MaxIter,
        solution: None,
        error: None,
        seconds: 0.0,
    };
    for i in 0..cfg.max_iter {
        match iterate.step(solver, problem, cfg, i) {
            Ok(s) => {
                trace.records.push(TraceRecord {
                    k: i + 1,
                    residual: s.residual,
                    energy: s.energy,
                    wall_ms: elapsed_ms(),
                });
                trace.solution = Some(s.solution);
                if !s.residual.is_finite() {
                    trace.status = Status::Error;
                    trace.error = Some(Error::NonFinite("residual").to_string());
                    break;
                }
                if s.residual < cfg.tol {
                    trace.status = Status::Converged;
                    break;
                }
            }
            Err(e) => {
                trace.status = Status::Error;
                trace.error = Some(e.to_string());
                break;
            }
        }
    }
    trace.seconds = elapsed_ms() / 1e3;
    Ok(trace)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problems::{example61, example62, vi_linear};

    fn start(p: &ProblemInstance) -> Vector {
        p.vector(vec![-1.0, 3.0, 1.0, 1.0, 2.0]).unwrap()
    }

    #[test]
    fn solver_ids_round_trip() {
        for k in SolverKind::ALL {
            assert_eq!(k.id().parse::<SolverKind>().unwrap(), k);
        }
        assert!("gra4".parse::<SolverKind>().is_err());
    }

    #[test]
    fn huge_tolerance_stops_after_one_step() {
        let p = example61();
        let cfg = SolverConfig::new(StepSchedule::Constant(0.27), start(&p)).tol(1e9);
        let t = run(SolverKind::Gra1, &p, &cfg).unwrap();
        assert_eq!((t.iterations(), t.status), (1, Status::Converged));
    }

    #[test]
    fn zero_budget_gives_empty_trace() {
        let p = example61();
        let cfg = SolverConfig::new(StepSchedule::Constant(0.27), start(&p)).max_iter(0);
        let t = run(SolverKind::Gra1, &p, &cfg).unwrap();
        assert_eq!((t.iterations(), t.status), (0, Status::MaxIter));
        assert!(t.solution.is_none());
        assert_eq!(t.to_csv(), "k,residual,energy,wall_ms\n");
    }

    #[test]
    fn configuration_errors() {
        let p = example61();
        let x0 = start(&p);
        let c = |s| SolverConfig::new(s, x0.clone());
        let lam = StepSchedule::Constant(0.27);
        assert!(matches!(
            run(SolverKind::Gra1, &p, &c(StepSchedule::Constant(0.3))),
            Err(Error::InadmissibleStep { .. })
        ));
        assert!(matches!(run(SolverKind::Gra2, &p, &c(lam)), Err(Error::Unsupported { .. })));
        assert!(matches!(run(SolverKind::GraalVi, &p, &c(lam)), Err(Error::Unsupported { .. })));
        let outside = p.vector(vec![6.0, 0.0, 0.0, 0.0, 0.0]).unwrap();
        assert!(matches!(
            run(SolverKind::Gea, &p, &SolverConfig::new(lam, outside)),
            Err(Error::Infeasible(_))
        ));
        assert!(run(SolverKind::Gra1, &p, &c(lam).tol(0.0)).is_err());
        let q = vi_linear();
        let wrong = SolverConfig::new(lam, q.vector(vec![0.0; 4]).unwrap());
        assert!(matches!(run(SolverKind::Gea, &p, &wrong), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn step_failures_are_recorded() {
        let mut p = vi_linear();
        let nan: crate::problems::Operator = std::sync::Arc::new(|x: &Vector| x.map(|_| f64::NAN));
        p.bifunction = std::sync::Arc::new(crate::problems::vi_bifunction(nan, None, None));
        let cfg = SolverConfig::new(StepSchedule::Constant(0.1), p.vector(vec![0.0; 4]).unwrap());
        let t = run(SolverKind::GraalVi, &p, &cfg).unwrap();
        assert_eq!((t.status, t.iterations()), (Status::Error, 0));
        assert!(t.error.unwrap().contains("non-finite"));
    }

    #[test]
    fn csv_layout() {
        let p = example62(101).unwrap();
        let x0 = crate::problems::instances::start_function_2(&p.space).unwrap();
        let z = Vector::zeros(&p.space);
        let cfg = SolverConfig::new(StepSchedule::Diminishing { a: 40.0 }, x0)
            .tol(1e-3)
            .energy_reference(z)
            .timing(false);
        let t = run(SolverKind::Gra2, &p, &cfg).unwrap();
        let csv = t.to_csv();
        let lines: Vec<_> = csv.lines().collect();
        assert_eq!(lines.len(), t.iterations() + 1);
        assert!(lines[1].starts_with("1,"));
        assert!(lines[1].ends_with(",0"));
        assert_eq!(lines[1].split(',').count(), 4);

        let cfg = SolverConfig::new(StepSchedule::Diminishing { a: 40.0 }, t.solution.unwrap()).max_iter(2);
        let h = run(SolverKind::Hieu, &p, &cfg).unwrap();
        assert!(h.to_csv().lines().nth(1).unwrap().contains(",,"));
    }
}
