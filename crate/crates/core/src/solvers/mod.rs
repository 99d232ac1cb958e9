//! Golden-ratio algorithms and extragradient baselines.

mod baselines;
mod golden;
mod run;
mod schedule;

pub use baselines::{gea_step, hieu_step, popov_step, prox, GeaStep, HieuStep, PopovStep};
pub use golden::{gra1_step, gra2_step, gra3_step, graal_vi_step, GoldenState, GoldenStep};
pub use run::{admissible_step, run, RunTrace, SolverConfig, SolverKind, Status, TraceRecord};
pub use schedule::StepSchedule;
