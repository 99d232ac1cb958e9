//! Sampling checks of the structural conditions the solvers rely on.
//!
//! Each check draws points of `C` from a seeded generator and reports the
//! worst violation it saw. Pairs and triples mix independent draws with
//! local perturbations and rescalings `P_C(t x + noise)`, since independent
//! draws in high dimension are nearly orthogonal and would rarely exercise
//! the `f(x, y) >= 0` branch of the pseudomonotonicity tests.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::Vector;
use crate::problems::ProblemInstance;

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_SAMPLES: usize = 1000;
pub const A1_MARGIN: f64 = 1e-12;
pub const MARGIN: f64 = 1e-10;

#[derive(Debug, Clone)]
pub struct ConditionReport {
    pub condition: String,
    /// Number of samples for which the implication's premise held.
    pub tested: usize,
    /// Largest violation seen (negative or zero means none).
    pub worst: f64,
    pub margin: f64,
    pub witness: Option<String>,
}

impl ConditionReport {
    pub fn passed(&self) -> bool {
        self.worst <= self.margin
    }
}

impl fmt::Display for ConditionReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = if self.passed() { "pass" } else { "FAIL" };
        write!(
            f,
            "{verdict} {} (tested {}, worst violation {:.3e}, margin {:.0e})",
            self.condition, self.tested, self.worst, self.margin
        )?;
        if let (false, Some(w)) = (self.passed(), &self.witness) {
            write!(f, "\n    witness: {w}")?;
        }
        Ok(())
    }
}

struct Tracker {
    report: ConditionReport,
}

impl Tracker {
    fn new(condition: impl Into<String>, margin: f64) -> Self {
        Self {
            report: ConditionReport {
                condition: condition.into(),
                tested: 0,
                worst: f64::NEG_INFINITY,
                margin,
                witness: None,
            },
        }
    }

    fn record(&mut self, violation: f64, witness: impl FnOnce() -> String) {
        self.report.tested += 1;
        if violation > self.report.worst {
            self.report.worst = violation;
            if violation > self.report.margin {
                self.report.witness = Some(witness());
            }
        }
    }

    fn finish(mut self) -> ConditionReport {
        if self.report.tested == 0 {
            self.report.worst = 0.0;
        }
        self.report
    }
}

struct Sampler<'a> {
    problem: &'a ProblemInstance,
    rng: ChaCha8Rng,
    draws: usize,
}

impl<'a> Sampler<'a> {
    fn new(problem: &'a ProblemInstance, seed: u64) -> Self {
        Self {
            problem,
            rng: ChaCha8Rng::seed_from_u64(seed),
            draws: 0,
        }
    }

    fn point(&mut self) -> Vector {
        self.problem.set.sample(&self.problem.space, &mut self.rng)
    }

    /// A point related to `x`: independent, rescaled, or a local perturbation.
    fn near(&mut self, x: &Vector) -> Vector {
        self.draws += 1;
        let u = self.point();
        let y = match self.draws % 3 {
            0 => return u,
            1 => {
                let t = self.rng.random_range(0.0..2.0);
                x.scale(t).axpy(0.1, &u)
            }
            _ => x.axpy(0.05, &u),
        };
        self.problem
            .set
            .project(&y)
            .expect("projection onto a shipped set")
    }
}

fn show(v: &Vector) -> String {
    if v.dim() <= 8 {
        format!("[{}]", v.to_row())
    } else {
        format!("<{}-point function, norm {:.6}>", v.dim(), v.norm())
    }
}

/// `f(x, x) = 0`.
pub fn check_a1(problem: &ProblemInstance, samples: usize, seed: u64) -> ConditionReport {
    let mut s = Sampler::new(problem, seed);
    let mut t = Tracker::new("A1 f(x,x)=0", A1_MARGIN);
    for _ in 0..samples {
        let x = s.point();
        let v = problem.bifunction.eval(&x, &x).abs();
        t.record(v, || format!("x = {}", show(&x)));
    }
    t.finish()
}

/// Pseudomonotonicity: `f(x,y) >= 0 => f(y,x) <= 0`.
pub fn check_a2(problem: &ProblemInstance, samples: usize, seed: u64) -> ConditionReport {
    strong_pseudomonotone(problem, samples, seed, 0.0, "A2 pseudomonotone".into())
}

/// Strong pseudomonotonicity: `f(x,y) >= 0 => f(y,x) <= -gamma |x-y|^2`.
pub fn check_a9(problem: &ProblemInstance, gamma: f64, samples: usize, seed: u64) -> ConditionReport {
    strong_pseudomonotone(problem, samples, seed, gamma, format!("A9 gamma={gamma}"))
}

fn strong_pseudomonotone(
    problem: &ProblemInstance,
    samples: usize,
    seed: u64,
    gamma: f64,
    label: String,
) -> ConditionReport {
    let f = &problem.bifunction;
    let mut s = Sampler::new(problem, seed);
    let mut t = Tracker::new(label, MARGIN);
    for _ in 0..samples {
        let x = s.point();
        let y = s.near(&x);
        if f.eval(&x, &y) >= 0.0 {
            let v = f.eval(&y, &x) + gamma * x.dist(&y).powi(2);
            t.record(v, || format!("x = {}, y = {}", show(&x), show(&y)));
        }
    }
    t.finish()
}

/// Subgradient inequality `f(x,y) >= f(x,y0) + <g, y - y0>`, `g = partial_subgrad(x, y0)`.
pub fn check_a4(problem: &ProblemInstance, samples: usize, seed: u64) -> ConditionReport {
    let f = &problem.bifunction;
    let mut s = Sampler::new(problem, seed);
    let mut t = Tracker::new("A4 subgradient inequality", MARGIN);
    for _ in 0..samples {
        let x = s.point();
        let y0 = s.near(&x);
        let y = s.near(&y0);
        let g = f.partial_subgrad(&x, &y0);
        let v = f.eval(&x, &y0) + g.inner(&(&y - &y0)) - f.eval(&x, &y);
        t.record(v, || format!("x = {}, y0 = {}, y = {}", show(&x), show(&y0), show(&y)));
    }
    t.finish()
}

/// Lipschitz-type inequality `f(x,y) + f(y,z) >= f(x,z) - c1 |x-y|^2 - c2 |y-z|^2`.
pub fn check_a5(problem: &ProblemInstance, c1: f64, c2: f64, samples: usize, seed: u64) -> ConditionReport {
    let f = &problem.bifunction;
    let mut s = Sampler::new(problem, seed);
    let mut t = Tracker::new(format!("A5 c1={c1} c2={c2}"), MARGIN);
    for _ in 0..samples {
        let x = s.point();
        let y = s.near(&x);
        let z = s.near(&y);
        let lhs = f.eval(&x, &y) + f.eval(&y, &z);
        let rhs = f.eval(&x, &z) - c1 * x.dist(&y).powi(2) - c2 * y.dist(&z).powi(2);
        t.record(rhs - lhs, || {
            format!("x = {}, y = {}, z = {}", show(&x), show(&y), show(&z))
        });
    }
    t.finish()
}

/// `min_y f(z, y) >= -tol` over sampled `y`, i.e. `z` is an approximate solution.
pub fn solution_certificate(
    problem: &ProblemInstance,
    z: &Vector,
    samples: usize,
    seed: u64,
) -> f64 {
    let mut s = Sampler::new(problem, seed);
    (0..samples)
        .map(|_| {
            let y = s.point();
            problem.bifunction.eval(z, &y)
        })
        .fold(f64::INFINITY, f64::min)
}

/// Runs every condition the instance declares.
pub fn check_all(problem: &ProblemInstance, samples: usize, seed: u64) -> Vec<ConditionReport> {
    let mut reports = vec![
        check_a1(problem, samples, seed),
        check_a2(problem, samples, seed),
        check_a4(problem, samples, seed),
    ];
    if let Some((c1, c2)) = problem.bifunction.lipschitz() {
        reports.push(check_a5(problem, c1, c2, samples, seed));
    }
    if let Some(gamma) = problem.bifunction.strong_modulus() {
        reports.push(check_a9(problem, gamma, samples, seed));
    }
    if let Some(z) = &problem.known_solution {
        let worst = -solution_certificate(problem, z, samples, seed);
        reports.push(ConditionReport {
            condition: "known solution f(z,y)>=0".into(),
            tested: samples,
            worst,
            margin: 1e-6,
            witness: None,
        });
    }
    reports
}
