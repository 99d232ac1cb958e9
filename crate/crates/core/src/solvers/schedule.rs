use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

/// Step sizes indexed by the step number `i = 0, 1, 2, ...`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StepSchedule {
    /// `lambda`
    Constant(f64),
    /// `lambda_i = a / (i + 1)`
    Diminishing { a: f64 },
    /// `beta_i = b / (i + 1)`, later divided by `max(1, |g|)`.
    Adaptive { b: f64 },
}

impl StepSchedule {
    pub fn at(&self, i: usize) -> f64 {
        match *self {
            StepSchedule::Constant(l) => l,
            StepSchedule::Diminishing { a } => a / (i + 1) as f64,
            StepSchedule::Adaptive { b } => b / (i + 1) as f64,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let v = match *self {
            StepSchedule::Constant(v) => v,
            StepSchedule::Diminishing { a } => a,
            StepSchedule::Adaptive { b } => b,
        };
        if v > 0.0 && v.is_finite() {
            Ok(())
        } else {
            Err(Error::InvalidArgument(format!("step parameter must be positive, got {v}")))
        }
    }
}

impl fmt::Display for StepSchedule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StepSchedule::Constant(l) => write!(f, "{l}"),
            StepSchedule::Diminishing { a } => write!(f, "{a}/(k+1)"),
            StepSchedule::Adaptive { b } => write!(f, "beta:{b}/(k+1)"),
        }
    }
}

/// Accepts `c`, `a/(k+1)` and `beta:b/(k+1)`.
impl FromStr for StepSchedule {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let bad = || Error::Parse {
            line: 1,
            msg: format!("unrecognized schedule {s:?} (expected `c`, `a/(k+1)` or `beta:b/(k+1)`)"),
        };
        let (adaptive, body) = match compact.strip_prefix("beta:") {
            Some(rest) => (true, rest),
            None => (false, compact.as_str()),
        };
        let schedule = match body.strip_suffix("/(k+1)") {
            Some(num) => {
                let v: f64 = num.parse().map_err(|_| bad())?;
                if adaptive {
                    StepSchedule::Adaptive { b: v }
                } else {
                    StepSchedule::Diminishing { a: v }
                }
            }
            None if !adaptive => StepSchedule::Constant(body.parse().map_err(|_| bad())?),
            None => return Err(bad()),
        };
        schedule.validate().map_err(|e| Error::Parse {
            line: 1,
            msg: e.to_string(),
        })?;
        Ok(schedule)
    }
}
