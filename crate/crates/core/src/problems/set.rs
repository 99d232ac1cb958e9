use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::linalg::{InnerProductSpace, Vector};
use crate::prox;

/// Membership tolerance.
pub const MEMBERSHIP_TOL: f64 = 1e-9;

/// The closed convex sets the solvers know how to project onto.
#[derive(Debug, Clone, PartialEq)]
pub enum FeasibleSet {
    /// `[lo, hi]^n`
    Box { lo: f64, hi: f64 },
    /// `{ x : |x| <= radius }` in the ambient norm.
    Ball { radius: f64 },
    /// `[lo, hi]^n ∩ { x : x_1 + ... + x_n >= level }`
    BoxHalfspace { lo: f64, hi: f64, level: f64 },
}

impl fmt::Display for FeasibleSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FeasibleSet::Box { lo, hi } => write!(f, "box({lo}, {hi})"),
            FeasibleSet::Ball { radius } => write!(f, "ball({radius})"),
            FeasibleSet::BoxHalfspace { lo, hi, level } => {
                write!(f, "box_halfspace({lo}, {hi}, {level})")
            }
        }
    }
}

impl FeasibleSet {
    pub fn validate(&self) -> Result<()> {
        match *self {
            FeasibleSet::Box { lo, hi } | FeasibleSet::BoxHalfspace { lo, hi, .. } if !(lo <= hi) => {
                Err(Error::InvalidArgument(format!("empty box [{lo}, {hi}]")))
            }
            FeasibleSet::Ball { radius } if !(radius > 0.0) => {
                Err(Error::InvalidArgument(format!("ball radius must be positive, got {radius}")))
            }
            _ => Ok(()),
        }
    }

    /// Normal `a` with `<a, x> = x_1 + ... + x_n` in the space's inner product.
    pub fn sum_normal(space: &Arc<InnerProductSpace>) -> Vector {
        Vector::from_raw(space, space.weights().iter().map(|w| 1.0 / w).collect())
    }

    pub fn project(&self, x: &Vector) -> Result<Vector> {
        match *self {
            FeasibleSet::Box { lo, hi } => prox::project_box(x, lo, hi),
            FeasibleSet::Ball { radius } => prox::project_ball(x, radius),
            FeasibleSet::BoxHalfspace { lo, hi, level } => {
                let a = Self::sum_normal(x.space());
                prox::project_polytope(x, lo, hi, &a, level).map(|p| p.point)
            }
        }
    }

    pub fn contains(&self, x: &Vector) -> bool {
        let in_box = |lo: f64, hi: f64| {
            x.coords()
                .iter()
                .all(|&c| c >= lo - MEMBERSHIP_TOL && c <= hi + MEMBERSHIP_TOL)
        };
        match *self {
            FeasibleSet::Box { lo, hi } => in_box(lo, hi),
            FeasibleSet::Ball { radius } => x.norm() <= radius + MEMBERSHIP_TOL,
            FeasibleSet::BoxHalfspace { lo, hi, level } => {
                in_box(lo, hi) && x.coords().iter().sum::<f64>() >= level - MEMBERSHIP_TOL
            }
        }
    }

    /// Draws a point of the set. Boxes: uniform per coordinate, with
    /// rejection on the sum constraint. Balls: Gaussian direction scaled by a
    /// uniform radius.
    pub fn sample<R: Rng + ?Sized>(&self, space: &Arc<InnerProductSpace>, rng: &mut R) -> Vector {
        let n = space.dim();
        match *self {
            FeasibleSet::Box { lo, hi } => {
                Vector::from_raw(space, (0..n).map(|_| rng.random_range(lo..=hi)).collect())
            }
            FeasibleSet::BoxHalfspace { lo, hi, level } => loop {
                let coords: Vec<f64> = (0..n).map(|_| rng.random_range(lo..=hi)).collect();
                if coords.iter().sum::<f64>() >= level {
                    break Vector::from_raw(space, coords);
                }
            },
            FeasibleSet::Ball { radius } => loop {
                let dir = Vector::from_raw(
                    space,
                    (0..n).map(|_| StandardNormal.sample(&mut *rng)).collect(),
                );
                let norm = dir.norm();
                if norm > 0.0 {
                    let r = radius * rng.random::<f64>();
                    break dir.scale(r / norm);
                }
            },
        }
    }
}
