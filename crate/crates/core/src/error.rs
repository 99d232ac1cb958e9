use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("vectors belong to different inner-product spaces")]
    SpaceMismatch,

    #[error("non-finite value produced by {0}")]
    NonFinite(&'static str),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid bifunction: {0}")]
    InvalidBifunction(String),

    #[error("parse error (line {line}): {msg}")]
    Parse { line: usize, msg: String },

    #[error("projection did not converge within {sweeps} sweeps (certificate {certificate:e})")]
    ProjectionBudget { sweeps: usize, certificate: f64 },

    #[error("prox subproblem did not converge within {iterations} iterations (certificate {certificate:e})")]
    ProxBudget { iterations: usize, certificate: f64 },

    #[error("step size {lambda} exceeds the admissible bound {bound}")]
    InadmissibleStep { lambda: f64, bound: f64 },

    #[error("point is not feasible: {0}")]
    Infeasible(String),

    #[error("solver {solver} requires {requirement}")]
    Unsupported { solver: &'static str, requirement: &'static str },

    #[error("reference solution failed: {0}")]
    Reference(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
