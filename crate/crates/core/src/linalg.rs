//! Dense vectors over a weighted inner product.
//!
//! Two spaces are supported: plain Euclidean `R^n` (all weights one) and the
//! trapezoid-rule discretization of `L^2([0,1])` on a uniform grid, where
//! `<a, b> = sum_i w_i a_i b_i` with `w = h * (1/2, 1, ..., 1, 1/2)` and
//! `h = 1 / (n - 1)`.
//!
//! Gradients and subgradients handed around the crate are Riesz
//! representers in the active inner product, so a projected-gradient step
//! `y - s * g` is meaningful in either space without extra scaling.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SpaceKind {
    Euclidean,
    Trapezoid,
}

#[derive(Debug, Clone)]
pub struct InnerProductSpace {
    kind: SpaceKind,
    weights: Vec<f64>,
}

impl PartialEq for InnerProductSpace {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind && self.weights.len() == other.weights.len()
    }
}

impl InnerProductSpace {
    pub fn euclidean(dim: usize) -> Result<Arc<Self>> {
        if dim == 0 {
            return Err(Error::InvalidArgument("dimension must be positive".into()));
        }
        Ok(Arc::new(Self {
            kind: SpaceKind::Euclidean,
            weights: vec![1.0; dim],
        }))
    }

    /// Uniform grid on `[0,1]` with `n >= 2` nodes and trapezoid weights.
    pub fn trapezoid(n: usize) -> Result<Arc<Self>> {
        if n < 2 {
            return Err(Error::InvalidArgument(format!(
                "quadrature grid needs at least 2 nodes, got {n}"
            )));
        }
        let h = 1.0 / (n - 1) as f64;
        let mut weights = vec![h; n];
        weights[0] = 0.5 * h;
        weights[n - 1] = 0.5 * h;
        Ok(Arc::new(Self {
            kind: SpaceKind::Trapezoid,
            weights,
        }))
    }

    pub fn dim(&self) -> usize {
        self.weights.len()
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Grid nodes `t_i = i / (n - 1)`; for Euclidean spaces the index itself.
    pub fn nodes(&self) -> Vec<f64> {
        let n = self.dim();
        match self.kind {
            SpaceKind::Euclidean => (0..n).map(|i| i as f64).collect(),
            SpaceKind::Trapezoid => {
                let h = 1.0 / (n - 1) as f64;
                (0..n).map(|i| i as f64 * h).collect()
            }
        }
    }
}

/// An element of an [`InnerProductSpace`]. Cheap to clone the space handle;
/// coordinates are owned.
#[derive(Clone)]
pub struct Vector {
    coords: Vec<f64>,
    space: Arc<InnerProductSpace>,
}

impl fmt::Debug for Vector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Vector")
            .field("space", &self.space.kind)
            .field("coords", &self.coords)
            .finish()
    }
}

impl PartialEq for Vector {
    fn eq(&self, other: &Self) -> bool {
        self.space == other.space && self.coords == other.coords
    }
}

impl Vector {
    pub fn new(space: &Arc<InnerProductSpace>, coords: Vec<f64>) -> Result<Self> {
        if coords.len() != space.dim() {
            return Err(Error::DimensionMismatch {
                expected: space.dim(),
                got: coords.len(),
            });
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite("Vector::new"));
        }
        Ok(Self {
            coords,
            space: Arc::clone(space),
        })
    }

    pub fn zeros(space: &Arc<InnerProductSpace>) -> Self {
        Self {
            coords: vec![0.0; space.dim()],
            space: Arc::clone(space),
        }
    }

    /// Samples `g(t)` on the grid nodes of `space`.
    pub fn from_fn(space: &Arc<InnerProductSpace>, g: impl Fn(f64) -> f64) -> Result<Self> {
        let coords = space.nodes().into_iter().map(g).collect();
        Self::new(space, coords)
    }

    pub(crate) fn from_raw(space: &Arc<InnerProductSpace>, coords: Vec<f64>) -> Self {
        debug_assert_eq!(coords.len(), space.dim());
        Self {
            coords,
            space: Arc::clone(space),
        }
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn into_coords(self) -> Vec<f64> {
        self.coords
    }

    pub fn space(&self) -> &Arc<InnerProductSpace> {
        &self.space
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn is_finite(&self) -> bool {
        self.coords.iter().all(|c| c.is_finite())
    }

    pub fn same_space(&self, other: &Vector) -> bool {
        self.space == other.space
    }

    fn check(&self, other: &Vector) -> Result<()> {
        if self.space.kind != other.space.kind {
            return Err(Error::SpaceMismatch);
        }
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(())
    }

    fn assert_compatible(&self, other: &Vector) {
        if let Err(e) = self.check(other) {
            panic!("incompatible vectors: {e}");
        }
    }

    /// Inner product. Panics if the operands live in different spaces; use
    /// [`dot`] for the checked form.
    pub fn inner(&self, other: &Vector) -> f64 {
        self.assert_compatible(other);
        self.space
            .weights
            .iter()
            .zip(self.coords.iter().zip(&other.coords))
            .map(|(w, (a, b))| w * a * b)
            .sum()
    }

    pub fn norm_sq(&self) -> f64 {
        self.inner(self)
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist(&self, other: &Vector) -> f64 {
        self.assert_compatible(other);
        self.space
            .weights
            .iter()
            .zip(self.coords.iter().zip(&other.coords))
            .map(|(w, (a, b))| w * (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// `self + s * other`
    pub fn axpy(&self, s: f64, other: &Vector) -> Vector {
        self.assert_compatible(other);
        let coords = self
            .coords
            .iter()
            .zip(&other.coords)
            .map(|(a, b)| a + s * b)
            .collect();
        Vector::from_raw(&self.space, coords)
    }

    pub fn scale(&self, s: f64) -> Vector {
        Vector::from_raw(&self.space, self.coords.iter().map(|a| s * a).collect())
    }

    pub fn map(&self, f: impl Fn(f64) -> f64) -> Vector {
        Vector::from_raw(&self.space, self.coords.iter().map(|&a| f(a)).collect())
    }

    /// Comma-separated `%.17g` row.
    pub fn to_row(&self) -> String {
        self.coords
            .iter()
            .map(|&c| fmt_g17(c))
            .collect::<Vec<_>>()
            .join(",")
    }

    pub fn parse_row(space: &Arc<InnerProductSpace>, row: &str) -> Result<Self> {
        let coords = parse_reals(row).map_err(|msg| Error::Parse { line: 1, msg })?;
        Self::new(space, coords)
    }
}

/// Checked inner product.
pub fn dot(a: &Vector, b: &Vector) -> Result<f64> {
    a.check(b)?;
    Ok(a.inner(b))
}

pub fn norm(a: &Vector) -> f64 {
    a.norm()
}

/// `t * a + (1 - t) * b`
pub fn combine(t: f64, a: &Vector, b: &Vector) -> Result<Vector> {
    a.check(b)?;
    let coords = a
        .coords
        .iter()
        .zip(&b.coords)
        .map(|(x, y)| t * x + (1.0 - t) * y)
        .collect();
    Ok(Vector::from_raw(&a.space, coords))
}

impl Add for &Vector {
    type Output = Vector;
    fn add(self, rhs: &Vector) -> Vector {
        self.axpy(1.0, rhs)
    }
}

impl Sub for &Vector {
    type Output = Vector;
    fn sub(self, rhs: &Vector) -> Vector {
        self.axpy(-1.0, rhs)
    }
}

impl Mul<&Vector> for f64 {
    type Output = Vector;
    fn mul(self, rhs: &Vector) -> Vector {
        rhs.scale(self)
    }
}

impl Neg for &Vector {
    type Output = Vector;
    fn neg(self) -> Vector {
        self.scale(-1.0)
    }
}

/// Parses comma- and/or whitespace-separated decimals. Semicolons are
/// accepted as separators too, so matrices can be written row by row.
pub fn parse_reals(s: &str) -> std::result::Result<Vec<f64>, String> {
    s.split(|c: char| c == ',' || c == ';' || c.is_whitespace())
        .filter(|tok| !tok.is_empty())
        .map(|tok| {
            tok.parse::<f64>()
                .map_err(|_| format!("not a number: {tok:?}"))
                .and_then(|v| {
                    if v.is_finite() {
                        Ok(v)
                    } else {
                        Err(format!("non-finite value: {tok:?}"))
                    }
                })
        })
        .collect()
}

/// Formats like C's `printf("%.17g", v)`.
pub fn fmt_g17(v: f64) -> String {
    const PREC: i32 = 17;
    if v.is_nan() {
        return "nan".into();
    }
    if v.is_infinite() {
        return if v > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if v == 0.0 {
        return if v.is_sign_negative() { "-0".into() } else { "0".into() };
    }
    let sci = format!("{:.*e}", (PREC - 1) as usize, v);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if !(-4..PREC).contains(&exp) {
        let mantissa = strip_zeros(mantissa);
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{mantissa}e{sign}{:02}", exp.abs())
    } else {
        let decimals = (PREC - 1 - exp).max(0) as usize;
        strip_zeros(&format!("{:.*}", decimals, v)).to_string()
    }
}

fn strip_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}
