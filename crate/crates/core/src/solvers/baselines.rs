//! Extragradient-type baselines: two or three prox solves per iteration.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::problems::ProblemInstance;
use crate::prox::{solve_prox, ProxProblem};

/// `argmin { lambda f(anchor, y) + 1/2 |y - center|^2 : y in C }`
pub fn prox(
    problem: &ProblemInstance,
    anchor: &Vector,
    center: &Vector,
    lambda: f64,
    inner_tol: f64,
) -> Result<Vector> {
    let p = ProxProblem {
        anchor,
        center,
        lambda,
        bifunction: problem.bifunction.as_ref(),
        set: &problem.set,
    };
    let y = solve_prox(&p, inner_tol)?.minimizer;
    if !y.is_finite() {
        return Err(Error::NonFinite("prox"));
    }
    Ok(y)
}

#[derive(Debug, Clone)]
pub struct GeaStep {
    pub x_bar: Vector,
    pub x_tilde: Vector,
    pub x_next: Vector,
    /// `|x_tilde - x_bar|`
    pub residual: f64,
}

/// ```text
/// x_bar   = prox(anchor x,       center x,       alpha)
/// x_tilde = prox(anchor x_bar,   center x_bar,   beta)
/// x_next  = prox(anchor x_tilde, center x,       beta)
/// ```
/// With `alpha = 0` the first solve is skipped (`x_bar = x`) and the last
/// two are the classical extragradient pair.
pub fn gea_step(problem: &ProblemInstance, x: &Vector, alpha: f64, beta: f64, inner_tol: f64) -> Result<GeaStep> {
    if !(alpha >= 0.0) {
        return Err(Error::InvalidArgument(format!("alpha must be nonnegative, got {alpha}")));
    }
    let x_bar = if alpha == 0.0 {
        x.clone()
    } else {
        prox(problem, x, x, alpha, inner_tol)?
    };
    let x_tilde = prox(problem, &x_bar, &x_bar, beta, inner_tol)?;
    let x_next = prox(problem, &x_tilde, x, beta, inner_tol)?;
    Ok(GeaStep {
        residual: x_tilde.dist(&x_bar),
        x_bar,
        x_tilde,
        x_next,
    })
}

#[derive(Debug, Clone)]
pub struct HieuStep {
    pub y: Vector,
    pub x_next: Vector,
    /// `|x - y|`
    pub residual: f64,
}

/// `y = prox(anchor x, center x, lambda)`, `x_next = prox(anchor y, center x, lambda)`.
pub fn hieu_step(problem: &ProblemInstance, x: &Vector, lambda: f64, inner_tol: f64) -> Result<HieuStep> {
    let y = prox(problem, x, x, lambda, inner_tol)?;
    let x_next = prox(problem, &y, x, lambda, inner_tol)?;
    Ok(HieuStep {
        residual: x.dist(&y),
        y,
        x_next,
    })
}

#[derive(Debug, Clone)]
pub struct PopovStep {
    pub x_next: Vector,
    pub y_next: Vector,
    /// `|y_next - x| + |y - x|`
    pub residual: f64,
}

/// `x_next = prox(anchor y, center x, lambda)`, `y_next = prox(anchor y, center x_next, lambda)`.
pub fn popov_step(problem: &ProblemInstance, x: &Vector, y: &Vector, lambda: f64, inner_tol: f64) -> Result<PopovStep> {
    let x_next = prox(problem, y, x, lambda, inner_tol)?;
    let y_next = prox(problem, y, &x_next, lambda, inner_tol)?;
    Ok(PopovStep {
        residual: y_next.dist(x) + y.dist(x),
        x_next,
        y_next,
    })
}
