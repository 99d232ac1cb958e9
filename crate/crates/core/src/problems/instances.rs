use std::fmt;
use std::sync::Arc;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::linalg::{InnerProductSpace, Vector};
use crate::problems::bifunction::{
    affine_bifunction, damped_radial, linear_operator, saturating_radial, spectral_norm,
    vi_bifunction, Bifunction,
};
use crate::problems::set::FeasibleSet;

/// Default grid size for the `L^2([0,1])` instances.
pub const DEFAULT_GRID: usize = 101;

/// An equilibrium problem: find `x in C` with `f(x, y) >= 0` for all `y in C`.
#[derive(Clone)]
pub struct ProblemInstance {
    pub name: String,
    pub bifunction: Arc<dyn Bifunction>,
    pub set: FeasibleSet,
    pub space: Arc<InnerProductSpace>,
    pub known_solution: Option<Vector>,
}

impl fmt::Debug for ProblemInstance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("ProblemInstance")
            .field("name", &self.name)
            .field("set", &self.set)
            .field("dim", &self.space.dim())
            .field("space", &self.space.kind())
            .field("bifunction", &self.bifunction)
            .finish()
    }
}

impl ProblemInstance {
    pub fn dim(&self) -> usize {
        self.space.dim()
    }

    /// `P_C(0)`, used when no starting point is given.
    pub fn default_start(&self) -> Result<Vector> {
        self.set.project(&Vector::zeros(&self.space))
    }

    pub fn vector(&self, coords: Vec<f64>) -> Result<Vector> {
        Vector::new(&self.space, coords)
    }

    pub fn with_known_solution(mut self, z: Vector) -> Self {
        self.known_solution = Some(z);
        self
    }
}

pub fn example61_matrices() -> (DMatrix<f64>, DMatrix<f64>) {
    #[rustfmt::skip]
    let p = DMatrix::from_row_slice(5, 5, &[
        3.1, 2.0, 0.0, 0.0, 0.0,
        2.0, 3.6, 0.0, 0.0, 0.0,
        0.0, 0.0, 3.5, 2.0, 0.0,
        0.0, 0.0, 2.0, 3.3, 0.0,
        0.0, 0.0, 0.0, 0.0, 3.0,
    ]);
    #[rustfmt::skip]
    let q = DMatrix::from_row_slice(5, 5, &[
        1.6, 1.0, 0.0, 0.0, 0.0,
        1.0, 1.6, 0.0, 0.0, 0.0,
        0.0, 0.0, 1.5, 1.0, 0.0,
        0.0, 0.0, 1.0, 1.5, 0.0,
        0.0, 0.0, 0.0, 0.0, 2.0,
    ]);
    (p, q)
}

pub fn example61_shift(space: &Arc<InnerProductSpace>) -> Vector {
    Vector::new(space, vec![1.0, -2.0, -1.0, 2.0, -1.0]).expect("5-dimensional space")
}

/// The 5-dimensional affine equilibrium problem on
/// `{ x : sum x_i >= -1, -5 <= x_i <= 5 }`.
pub fn example61() -> ProblemInstance {
    let space = InnerProductSpace::euclidean(5).expect("positive dimension");
    let (p, q) = example61_matrices();
    let f = affine_bifunction(p, q, &example61_shift(&space))
        .expect("shipped matrices satisfy the PSD/NSD conditions");
    ProblemInstance {
        name: "example61".into(),
        bifunction: Arc::new(f),
        set: FeasibleSet::BoxHalfspace { lo: -5.0, hi: 5.0, level: -1.0 },
        space,
        known_solution: None,
    }
}

/// `f(x,y) = <(3/2 - |x|) x, y - x>` on the unit ball of `L^2([0,1])`.
/// Strongly pseudomonotone with modulus 1/2, Lipschitz-type with
/// `c1 = c2 = 7/4`; the unique solution is 0.
pub fn example62(n: usize) -> Result<ProblemInstance> {
    let space = InnerProductSpace::trapezoid(n)?;
    let f = vi_bifunction(damped_radial(), Some(3.5), Some(0.5)).with_label("damped_radial");
    Ok(ProblemInstance {
        name: "example62".into(),
        bifunction: Arc::new(f),
        set: FeasibleSet::Ball { radius: 1.0 },
        known_solution: Some(Vector::zeros(&space)),
        space,
    })
}

/// `f(x,y) = <x / (1 + |x|^2), y - x>` on the unit ball of `L^2([0,1])`.
/// Strongly pseudomonotone with modulus 1/2 but not monotone; the operator
/// is 1-Lipschitz.
pub fn example21(n: usize) -> Result<ProblemInstance> {
    let space = InnerProductSpace::trapezoid(n)?;
    let f = vi_bifunction(saturating_radial(), Some(1.0), Some(0.5)).with_label("saturating_radial");
    Ok(ProblemInstance {
        name: "example21".into(),
        bifunction: Arc::new(f),
        set: FeasibleSet::Ball { radius: 1.0 },
        known_solution: Some(Vector::zeros(&space)),
        space,
    })
}

/// A monotone affine variational inequality `A x = M x + m` on `[-1, 1]^4`
/// with Lipschitz constant `|M|_2`.
pub fn vi_linear() -> ProblemInstance {
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        1.0,  2.0, 0.0, 0.0,
       -2.0,  1.0, 0.0, 0.0,
        0.0,  0.0, 0.5, 1.0,
        0.0,  0.0, -1.0, 0.5,
    ]);
    let shift = vec![1.0, -1.0, 0.5, 2.0];
    linear_vi_instance("vi-linear", m, shift, FeasibleSet::Box { lo: -1.0, hi: 1.0 })
        .expect("square matrix")
}

pub fn linear_vi_instance(
    name: &str,
    m: DMatrix<f64>,
    shift: Vec<f64>,
    set: FeasibleSet,
) -> Result<ProblemInstance> {
    let n = shift.len();
    if m.nrows() != n || m.ncols() != n {
        return Err(Error::InvalidBifunction(format!(
            "operator matrix is {}x{}, expected {n}x{n}",
            m.nrows(),
            m.ncols()
        )));
    }
    let space = InnerProductSpace::euclidean(n)?;
    let l = spectral_norm(&m);
    let f = vi_bifunction(linear_operator(m, shift), Some(l), None).with_label("linear");
    Ok(ProblemInstance {
        name: name.into(),
        bifunction: Arc::new(f),
        set,
        space,
        known_solution: None,
    })
}

pub const BUILTIN_NAMES: [&str; 4] = ["example61", "example62", "example21", "vi-linear"];

/// Looks up a shipped instance by name; `grid` applies to the quadrature ones.
pub fn builtin(name: &str, grid: usize) -> Result<ProblemInstance> {
    match name {
        "example61" => Ok(example61()),
        "example62" => example62(grid),
        "example21" => example21(grid),
        "vi-linear" => Ok(vi_linear()),
        other => Err(Error::InvalidArgument(format!("unknown problem {other:?}"))),
    }
}

/// The three starting points of the `example61` comparison table.
pub fn example61_starts() -> [[f64; 5]; 3] {
    [
        [-1.0, 3.0, 1.0, 1.0, 2.0],
        [1.0, 1.0, 1.0, 1.0, 1.0],
        [-1.0, 0.0, 0.0, 0.0, 0.0],
    ]
}

/// `x0(t) = (sin(-3t) + cos(-10t)) / 200`
pub fn start_function_1(space: &Arc<InnerProductSpace>) -> Result<Vector> {
    Vector::from_fn(space, |t| ((-3.0 * t).sin() + (-10.0 * t).cos()) / 200.0)
}

/// `x0(t) = (t^3 + 1) e^{5t} / 85`
pub fn start_function_2(space: &Arc<InnerProductSpace>) -> Result<Vector> {
    Vector::from_fn(space, |t| (t.powi(3) + 1.0) * (5.0 * t).exp() / 85.0)
}

/// Resolves the named quadrature starting points `paper-x0-1`, `paper-x0-2`.
pub fn start_preset(name: &str, space: &Arc<InnerProductSpace>) -> Option<Result<Vector>> {
    match name {
        "paper-x0-1" => Some(start_function_1(space)),
        "paper-x0-2" => Some(start_function_2(space)),
        _ => None,
    }
}
