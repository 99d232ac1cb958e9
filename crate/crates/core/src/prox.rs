//! Projections onto the shipped convex sets and the strongly convex prox
//! subproblem
//!
//! ```text
//! argmin { lambda * f(anchor, y) + 1/2 |y - center|^2 : y in C }
//! ```
//!
//! solved by projected gradient with the fixed step `1 / (1 + lambda * H)`,
//! `H` being the curvature bound of `f(anchor, .)`. For variational
//! inequality bifunctions `H = 0`, the step is one, and the first iterate is
//! already `P_C(center - lambda * A anchor)`.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::problems::{Bifunction, FeasibleSet};

pub const DEFAULT_INNER_TOL: f64 = 1e-10;
pub const PROX_MAX_ITER: usize = 100_000;
pub const DYKSTRA_TOL: f64 = 1e-12;
pub const DYKSTRA_MAX_SWEEPS: usize = 10_000;

pub fn project_box(x: &Vector, lo: f64, hi: f64) -> Result<Vector> {
    if lo > hi || lo.is_nan() || hi.is_nan() {
        return Err(Error::InvalidArgument(format!("empty box [{lo}, {hi}]")));
    }
    Ok(x.map(|c| c.clamp(lo, hi)))
}

pub fn project_ball(x: &Vector, radius: f64) -> Result<Vector> {
    if radius.is_nan() || radius <= 0.0 {
        return Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")));
    }
    let n = x.norm();
    if n <= radius {
        Ok(x.clone())
    } else {
        Ok(x.scale(radius / n))
    }
}

/// Projection onto `{ y : <a, y> >= b }`.
pub fn project_halfspace(x: &Vector, a: &Vector, b: f64) -> Result<Vector> {
    let aa = a.norm_sq();
    if aa == 0.0 {
        return Err(Error::InvalidArgument("halfspace normal is zero".into()));
    }
    let ax = a.inner(x);
    if ax >= b {
        Ok(x.clone())
    } else {
        Ok(x.axpy((b - ax) / aa, a))
    }
}

#[derive(Debug, Clone)]
pub struct PolytopeProjection {
    pub point: Vector,
    pub sweeps: usize,
    /// Last successive-iterate change, or feasibility gap, whichever is larger.
    pub certificate: f64,
}

/// Dykstra's alternating projection onto `[lo, hi]^n ∩ { <a, y> >= b }`.
pub fn project_polytope(x: &Vector, lo: f64, hi: f64, a: &Vector, b: f64) -> Result<PolytopeProjection> {
    project_polytope_with(x, lo, hi, a, b, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS)
}

pub fn project_polytope_with(
    x: &Vector,
    lo: f64,
    hi: f64,
    a: &Vector,
    b: f64,
    tol: f64,
    max_sweeps: usize,
) -> Result<PolytopeProjection> {
    let in_box = x.coords().iter().all(|&c| c >= lo && c <= hi);
    if in_box && a.inner(x) >= b {
        return Ok(PolytopeProjection {
            point: x.clone(),
            sweeps: 0,
            certificate: 0.0,
        });
    }
    let mut y = x.clone();
    let mut p = Vector::zeros(x.space());
    let mut q = Vector::zeros(x.space());
    let mut certificate = f64::INFINITY;
    for sweep in 1..=max_sweeps {
        let z = project_box(&(&y + &p), lo, hi)?;
        p = &(&y + &p) - &z;
        let w = &z + &q;
        let y_next = project_halfspace(&w, a, b)?;
        q = &w - &y_next;
        let change = y_next.dist(&y);
        let gap = y_next.dist(&z);
        certificate = change.max(gap);
        y = y_next;
        if certificate < tol {
            // the last halfspace step may leave y a hair outside the box
            let y = project_box(&y, lo, hi)?;
            return Ok(PolytopeProjection {
                point: y,
                sweeps: sweep,
                certificate,
            });
        }
    }
    Err(Error::ProjectionBudget {
        sweeps: max_sweeps,
        certificate,
    })
}

/// The subproblem `argmin { lambda f(anchor, y) + 1/2 |y - center|^2 : y in C }`.
#[derive(Clone, Copy)]
pub struct ProxProblem<'a> {
    pub anchor: &'a Vector,
    pub center: &'a Vector,
    pub lambda: f64,
    pub bifunction: &'a dyn Bifunction,
    pub set: &'a FeasibleSet,
}

impl ProxProblem<'_> {
    /// The objective `h(y)`.
    pub fn objective(&self, y: &Vector) -> f64 {
        self.lambda * self.bifunction.eval(self.anchor, y) + 0.5 * y.dist(self.center).powi(2)
    }

    fn gradient(&self, y: &Vector) -> Vector {
        let g = self.bifunction.partial_subgrad(self.anchor, y);
        (y - self.center).axpy(self.lambda, &g)
    }
}

#[derive(Debug, Clone)]
pub struct ProxResult {
    pub minimizer: Vector,
    pub inner_iterations: usize,
    /// Upper bound on the unit-step fixed-point residual
    /// `|y - P_C(y - grad h(y))|` at the returned point's predecessor.
    pub certificate: f64,
}

pub fn solve_prox(problem: &ProxProblem<'_>, inner_tol: f64) -> Result<ProxResult> {
    solve_prox_with_budget(problem, inner_tol, PROX_MAX_ITER)
}

pub fn solve_prox_with_budget(
    problem: &ProxProblem<'_>,
    inner_tol: f64,
    max_iter: usize,
) -> Result<ProxResult> {
    if !(problem.lambda > 0.0) || !problem.lambda.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "prox step must be positive, got {}",
            problem.lambda
        )));
    }
    if !(inner_tol > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "inner tolerance must be positive, got {inner_tol}"
        )));
    }
    let step = 1.0 / (1.0 + problem.lambda * problem.bifunction.curvature_bound());
    let mut y = problem.set.project(problem.center)?;
    let mut certificate = f64::INFINITY;
    for it in 1..=max_iter {
        let g = problem.gradient(&y);
        let next = problem.set.project(&y.axpy(-step, &g))?;
        if !next.is_finite() {
            return Err(Error::NonFinite("solve_prox"));
        }
        // |y - P(y - s g)| / s is nonincreasing in s, so for s <= 1 this
        // bounds the unit-step residual from above.
        certificate = next.dist(&y) / step;
        if certificate <= inner_tol {
            return Ok(ProxResult {
                minimizer: next,
                inner_iterations: it,
                certificate,
            });
        }
        y = next;
    }
    Err(Error::ProxBudget {
        iterations: max_iter,
        certificate,
    })
}
