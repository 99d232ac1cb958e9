//! Bifunctions, feasible sets, and the shipped problem instances.

mod bifunction;
pub mod conditions;
pub mod file;
pub mod instances;
mod set;

pub use bifunction::{
    affine_bifunction, damped_radial, linear_operator, saturating_radial, spectral_norm,
    vi_bifunction, AffineBifunction, Bifunction, Operator, ViBifunction, SPECTRAL_TOL,
};
pub use file::{load_problem, parse_problem};
pub use instances::{builtin, example21, example61, example62, vi_linear, ProblemInstance};
pub use set::{FeasibleSet, MEMBERSHIP_TOL};
