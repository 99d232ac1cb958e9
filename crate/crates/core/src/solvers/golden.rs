//! The golden-ratio iterations. Each keeps `x^{k-1}`, `y^k` and the average
//! `x^k = ((phi - 1) y^k + x^{k-1}) / phi`, then takes one prox (or one
//! projection) step anchored at `y^k` and centered at `x^k`.

use crate::error::{Error, Result};
use crate::linalg::Vector;
use crate::problems::ProblemInstance;
use crate::prox::{solve_prox, ProxProblem};
use crate::PHI;

#[derive(Debug, Clone)]
pub struct GoldenState {
    /// `x^{k-1}`
    pub x_prev: Vector,
    /// `y^{k-1}`, absent at `k = 1`.
    pub y_prev: Option<Vector>,
    /// `y^k`
    pub y: Vector,
    /// `x^k`
    pub x: Vector,
    pub k: usize,
}

pub(crate) fn average(y: &Vector, x_prev: &Vector) -> Vector {
    x_prev.axpy(PHI - 1.0, y).scale(1.0 / PHI)
}

impl GoldenState {
    /// State at `k = 1` from `x^0` and `y^1`.
    pub fn new(x0: Vector, y1: Vector) -> Result<Self> {
        if !x0.same_space(&y1) {
            return Err(Error::SpaceMismatch);
        }
        let x = average(&y1, &x0);
        Ok(Self {
            x_prev: x0,
            y_prev: None,
            y: y1,
            x,
            k: 1,
        })
    }

    /// `|(y - x_prev) - phi (y - x)|`, zero in exact arithmetic.
    pub fn identity_defect(&self) -> f64 {
        let lhs = &self.y - &self.x_prev;
        let rhs = (&self.y - &self.x).scale(PHI);
        lhs.dist(&rhs)
    }

    /// `E_k = (1 + phi) |x^k - z|^2 + (phi / 2) |y^{k-1} - y^k|^2`, taking
    /// `y^0 = y^1`.
    pub fn energy(&self, z: &Vector) -> f64 {
        let drift = self.y_prev.as_ref().map_or(0.0, |yp| yp.dist(&self.y).powi(2));
        (1.0 + PHI) * self.x.dist(z).powi(2) + 0.5 * PHI * drift
    }

    fn advance(&self, y_next: Vector) -> Result<Self> {
        if !y_next.is_finite() {
            return Err(Error::NonFinite("golden-ratio step"));
        }
        let x_next = average(&y_next, &self.x);
        Ok(Self {
            x_prev: self.x.clone(),
            y_prev: Some(self.y.clone()),
            y: y_next,
            x: x_next,
            k: self.k + 1,
        })
    }
}

#[derive(Debug, Clone)]
pub struct GoldenStep {
    pub state: GoldenState,
    pub residual: f64,
    /// The step size actually used.
    pub lambda: f64,
}

fn prox_from(state: &GoldenState, problem: &ProblemInstance, lambda: f64, inner_tol: f64) -> Result<Vector> {
    let p = ProxProblem {
        anchor: &state.y,
        center: &state.x,
        lambda,
        bifunction: problem.bifunction.as_ref(),
        set: &problem.set,
    };
    Ok(solve_prox(&p, inner_tol)?.minimizer)
}

/// Fixed-step iteration; residual `|y^{k+1} - y^k| + |y^k - x^k|`.
pub fn gra1_step(state: &GoldenState, problem: &ProblemInstance, lambda: f64, inner_tol: f64) -> Result<GoldenStep> {
    let y_next = prox_from(state, problem, lambda, inner_tol)?;
    let residual = y_next.dist(&state.y) + state.y.dist(&state.x);
    Ok(GoldenStep {
        state: state.advance(y_next)?,
        residual,
        lambda,
    })
}

/// Same update as [`gra1_step`] with a diminishing step; residual
/// `|y^{k+1} - x^k| + |y^k - x^k|`.
pub fn gra2_step(state: &GoldenState, problem: &ProblemInstance, lambda: f64, inner_tol: f64) -> Result<GoldenStep> {
    let y_next = prox_from(state, problem, lambda, inner_tol)?;
    let residual = y_next.dist(&state.x) + state.y.dist(&state.x);
    Ok(GoldenStep {
        state: state.advance(y_next)?,
        residual,
        lambda,
    })
}

/// Subgradient-projection variant: `g in d f(y^k, .)(y^k)`,
/// `lambda = beta / max(1, |g|)`, `y^{k+1} = P_C(x^k - lambda g)`.
pub fn gra3_step(state: &GoldenState, problem: &ProblemInstance, beta: f64) -> Result<GoldenStep> {
    let g = problem.bifunction.partial_subgrad(&state.y, &state.y);
    let eta = g.norm().max(1.0);
    let lambda = beta / eta;
    let y_next = problem.set.project(&state.x.axpy(-lambda, &g))?;
    let residual = y_next.dist(&state.x) + state.y.dist(&state.x);
    Ok(GoldenStep {
        state: state.advance(y_next)?,
        residual,
        lambda,
    })
}

/// Operator form `y^{k+1} = P_C(x^k - lambda A y^k)`; residual as in
/// [`gra1_step`].
pub fn graal_vi_step(state: &GoldenState, problem: &ProblemInstance, lambda: f64) -> Result<GoldenStep> {
    let ay = problem.bifunction.operator(&state.y).ok_or(Error::Unsupported {
        solver: "graal-vi",
        requirement: "a variational-inequality bifunction",
    })?;
    let y_next = problem.set.project(&state.x.axpy(-lambda, &ay))?;
    let residual = y_next.dist(&state.y) + state.y.dist(&state.x);
    Ok(GoldenStep {
        state: state.advance(y_next)?,
        residual,
        lambda,
    })
}
