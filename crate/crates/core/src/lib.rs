//! Golden-ratio and extragradient solvers for pseudomonotone equilibrium
//! problems: find `x in C` with `f(x, y) >= 0` for every `y in C`.
//!
//! ```
//! use goldeneq::problems::example61;
//! use goldeneq::solvers::{run, SolverConfig, SolverKind, StepSchedule, Status};
//!
//! let p = example61();
//! let x0 = p.vector(vec![-1.0, 3.0, 1.0, 1.0, 2.0]).unwrap();
//! let cfg = SolverConfig::new(StepSchedule::Constant(0.27), x0).tol(1e-6);
//! let trace = run(SolverKind::Gra1, &p, &cfg).unwrap();
//! assert_eq!(trace.status, Status::Converged);
//! ```

pub mod bench;
pub mod cli;
pub mod error;
pub mod linalg;
pub mod problems;
pub mod prox;
pub mod solvers;

pub use error::{Error, Result};
pub use linalg::{InnerProductSpace, Vector};

/// The golden ratio `(1 + sqrt 5) / 2`.
pub const PHI: f64 = 1.618_033_988_749_895;
