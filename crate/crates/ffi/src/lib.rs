//! C ABI over `goldeneq`.
//!
//! Problems and traces are opaque heap handles created by `geq_*` functions
//! and released with the matching `*_free`. Every fallible call returns a
//! [`GeqStatus`]; on failure `geq_last_error` returns a message for the
//! calling thread, valid until the next failing call on that thread.

use std::cell::RefCell;
use std::ffi::{c_char, CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::ptr;

use goldeneq::problems::instances::start_preset;
use goldeneq::problems::{builtin, parse_problem, ProblemInstance};
use goldeneq::solvers::{admissible_step, run, RunTrace, SolverConfig, SolverKind, Status, StepSchedule};
use goldeneq::Error;

/// Opaque problem handle.
pub struct GeqProblem(ProblemInstance);

/// Opaque run-trace handle.
pub struct GeqTrace(RunTrace);

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeqStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidArgument = 2,
    ParseError = 3,
    SolverError = 4,
    IoError = 5,
    BufferTooSmall = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeqRunStatus {
    Converged = 0,
    MaxIter = 1,
    Error = 2,
}

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_error(msg: impl Into<String>) {
    let msg = msg.into().replace('\0', " ");
    LAST_ERROR.with(|e| *e.borrow_mut() = CString::new(msg).ok());
}

fn fail(status: GeqStatus, msg: impl Into<String>) -> GeqStatus {
    set_error(msg);
    status
}

fn from_error(e: Error) -> GeqStatus {
    let status = match &e {
        Error::Parse { .. } => GeqStatus::ParseError,
        Error::Io(_) => GeqStatus::IoError,
        Error::InvalidArgument(_) | Error::DimensionMismatch { .. } | Error::Infeasible(_) => {
            GeqStatus::InvalidArgument
        }
        _ => GeqStatus::SolverError,
    };
    fail(status, e.to_string())
}

fn guard(f: impl FnOnce() -> GeqStatus) -> GeqStatus {
    catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|_| fail(GeqStatus::Panic, "internal panic"))
}

unsafe fn str_arg<'a>(s: *const c_char, what: &str) -> Result<&'a str, GeqStatus> {
    if s.is_null() {
        return Err(fail(GeqStatus::NullPointer, format!("{what} is null")));
    }
    CStr::from_ptr(s)
        .to_str()
        .map_err(|_| fail(GeqStatus::InvalidArgument, format!("{what} is not UTF-8")))
}

fn grid_arg(grid: usize) -> Option<usize> {
    (grid != 0).then_some(grid)
}

unsafe fn emit_problem(p: ProblemInstance, out: *mut *mut GeqProblem) -> GeqStatus {
    *out = Box::into_raw(Box::new(GeqProblem(p)));
    GeqStatus::Ok
}

/// Creates a built-in problem (`example61`, `example62`, `example21`,
/// `vi-linear`). `grid = 0` selects the default grid for `L^2` problems.
///
/// # Safety
/// `name` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn geq_problem_builtin(
    name: *const c_char,
    grid: usize,
    out: *mut *mut GeqProblem,
) -> GeqStatus {
    guard(|| {
        if out.is_null() {
            return fail(GeqStatus::NullPointer, "out is null");
        }
        let name = match str_arg(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match builtin(name, grid_arg(grid).unwrap_or(goldeneq::problems::instances::DEFAULT_GRID)) {
            Ok(p) => emit_problem(p, out),
            Err(e) => from_error(e),
        }
    })
}

/// Parses a problem definition in the key-value text format. `grid = 0`
/// keeps the file's `dim`.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn geq_problem_parse(
    text: *const c_char,
    grid: usize,
    out: *mut *mut GeqProblem,
) -> GeqStatus {
    guard(|| {
        if out.is_null() {
            return fail(GeqStatus::NullPointer, "out is null");
        }
        let text = match str_arg(text, "text") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match parse_problem(text, grid_arg(grid)) {
            Ok(p) => emit_problem(p, out),
            Err(e) => from_error(e),
        }
    })
}

/// Dimension of the problem's space; 0 for a null handle.
///
/// # Safety
/// `problem` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn geq_problem_dim(problem: *const GeqProblem) -> usize {
    problem.as_ref().map_or(0, |p| p.0.dim())
}

/// # Safety
/// `problem` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn geq_problem_free(problem: *mut GeqProblem) {
    if !problem.is_null() {
        drop(Box::from_raw(problem));
    }
}

/// Runs `solver` on `problem`.
///
/// `schedule` is `c`, `a/(k+1)` or `beta:b/(k+1)`; null picks the CLI
/// default. `x0` may be null (start at the projection of 0) or point to
/// `x0_len` coordinates. A trace is produced whenever the configuration is
/// valid, including runs that stop on a step error; check
/// `geq_trace_status`.
///
/// # Safety
/// Pointers must be valid for the stated lengths; strings NUL-terminated.
#[no_mangle]
pub unsafe extern "C" fn geq_run(
    problem: *const GeqProblem,
    solver: *const c_char,
    schedule: *const c_char,
    tol: f64,
    max_iter: usize,
    x0: *const f64,
    x0_len: usize,
    out: *mut *mut GeqTrace,
) -> GeqStatus {
    guard(|| {
        let Some(problem) = problem.as_ref().map(|p| &p.0) else {
            return fail(GeqStatus::NullPointer, "problem is null");
        };
        if out.is_null() {
            return fail(GeqStatus::NullPointer, "out is null");
        }
        let kind: SolverKind = match str_arg(solver, "solver").map(str::parse) {
            Ok(Ok(k)) => k,
            Ok(Err(e)) => return from_error(e),
            Err(s) => return s,
        };
        let schedule = if schedule.is_null() {
            match kind {
                SolverKind::Gra3 => StepSchedule::Adaptive { b: 1.0 },
                SolverKind::Gra2 | SolverKind::Hieu | SolverKind::Popov => StepSchedule::Diminishing { a: 1.0 },
                _ => match admissible_step(problem) {
                    Some(l) => StepSchedule::Constant(l),
                    None => return fail(GeqStatus::InvalidArgument, "schedule required: no Lipschitz-type constants"),
                },
            }
        } else {
            match str_arg(schedule, "schedule").map(str::parse::<StepSchedule>) {
                Ok(Ok(s)) => s,
                Ok(Err(e)) => return from_error(e),
                Err(s) => return s,
            }
        };
        let start = if x0.is_null() {
            problem.default_start()
        } else {
            problem.vector(std::slice::from_raw_parts(x0, x0_len).to_vec())
        };
        let start = match start {
            Ok(v) => v,
            Err(e) => return from_error(e),
        };
        let cfg = SolverConfig::new(schedule, start).tol(tol).max_iter(max_iter);
        match run(kind, problem, &cfg) {
            Ok(t) => {
                if let Some(msg) = &t.error {
                    set_error(msg.clone());
                }
                *out = Box::into_raw(Box::new(GeqTrace(t)));
                GeqStatus::Ok
            }
            Err(e) => from_error(e),
        }
    })
}

/// Samples a named starting function (`paper-x0-1`, `paper-x0-2`) on the
/// problem's grid into `buf`.
///
/// # Safety
/// `name` must be NUL-terminated and `buf` valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn geq_start_preset(
    problem: *const GeqProblem,
    name: *const c_char,
    buf: *mut f64,
    len: usize,
) -> GeqStatus {
    guard(|| {
        let Some(problem) = problem.as_ref().map(|p| &p.0) else {
            return fail(GeqStatus::NullPointer, "problem is null");
        };
        let name = match str_arg(name, "name") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match start_preset(name, &problem.space) {
            None => fail(GeqStatus::InvalidArgument, format!("unknown preset {name:?}")),
            Some(Err(e)) => from_error(e),
            Some(Ok(v)) => copy_out(v.coords(), buf, len),
        }
    })
}

/// Number of recorded iterations; 0 for a null handle.
///
/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_len(trace: *const GeqTrace) -> usize {
    trace.as_ref().map_or(0, |t| t.0.iterations())
}

/// # Safety
/// `trace` must be null or a live handle.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_status(trace: *const GeqTrace) -> GeqRunStatus {
    match trace.as_ref().map(|t| t.0.status) {
        Some(Status::Converged) => GeqRunStatus::Converged,
        Some(Status::MaxIter) => GeqRunStatus::MaxIter,
        _ => GeqRunStatus::Error,
    }
}

unsafe fn copy_out(src: &[f64], buf: *mut f64, len: usize) -> GeqStatus {
    if len < src.len() {
        return fail(
            GeqStatus::BufferTooSmall,
            format!("buffer holds {len} values, {} needed", src.len()),
        );
    }
    if !src.is_empty() {
        if buf.is_null() {
            return fail(GeqStatus::NullPointer, "buffer is null");
        }
        ptr::copy_nonoverlapping(src.as_ptr(), buf, src.len());
    }
    GeqStatus::Ok
}

/// Copies the residual series (`geq_trace_len` values) into `buf`.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_residuals(trace: *const GeqTrace, buf: *mut f64, len: usize) -> GeqStatus {
    guard(|| match trace.as_ref() {
        None => fail(GeqStatus::NullPointer, "trace is null"),
        Some(t) => copy_out(&t.0.residuals(), buf, len),
    })
}

/// Copies the final solution estimate (problem dimension values) into
/// `buf`. Fails with `InvalidArgument` if no step ran.
///
/// # Safety
/// `buf` must be valid for `len` writes.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_solution(trace: *const GeqTrace, buf: *mut f64, len: usize) -> GeqStatus {
    guard(|| match trace.as_ref() {
        None => fail(GeqStatus::NullPointer, "trace is null"),
        Some(t) => match &t.0.solution {
            None => fail(GeqStatus::InvalidArgument, "no iterations were run"),
            Some(z) => copy_out(z.coords(), buf, len),
        },
    })
}

/// Writes the trace CSV (`k,residual,energy,wall_ms`) to `path`.
///
/// # Safety
/// `path` must be a NUL-terminated string.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_write_csv(trace: *const GeqTrace, path: *const c_char) -> GeqStatus {
    guard(|| {
        let Some(t) = trace.as_ref() else {
            return fail(GeqStatus::NullPointer, "trace is null");
        };
        let path = match str_arg(path, "path") {
            Ok(s) => s,
            Err(s) => return s,
        };
        match std::fs::write(Path::new(path), t.0.to_csv()) {
            Ok(()) => GeqStatus::Ok,
            Err(e) => fail(GeqStatus::IoError, format!("{path}: {e}")),
        }
    })
}

/// # Safety
/// `trace` must be null or a handle not yet freed.
#[no_mangle]
pub unsafe extern "C" fn geq_trace_free(trace: *mut GeqTrace) {
    if !trace.is_null() {
        drop(Box::from_raw(trace));
    }
}

/// Message for the last failure on this thread, or null.
#[no_mangle]
pub extern "C" fn geq_last_error() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |s| s.as_ptr()))
}
