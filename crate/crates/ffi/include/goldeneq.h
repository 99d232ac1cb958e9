#ifndef GOLDENEQ_H
#define GOLDENEQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum GeqStatus {
  GEQ_STATUS_OK = 0,
  GEQ_STATUS_NULL_POINTER = 1,
  GEQ_STATUS_INVALID_ARGUMENT = 2,
  GEQ_STATUS_PARSE_ERROR = 3,
  GEQ_STATUS_SOLVER_ERROR = 4,
  GEQ_STATUS_IO_ERROR = 5,
  GEQ_STATUS_BUFFER_TOO_SMALL = 6,
  GEQ_STATUS_PANIC = 7,
} GeqStatus;

typedef enum GeqRunStatus {
  GEQ_RUN_STATUS_CONVERGED = 0,
  GEQ_RUN_STATUS_MAX_ITER = 1,
  GEQ_RUN_STATUS_ERROR = 2,
} GeqRunStatus;

/**
 * Opaque problem handle.
 */
typedef struct GeqProblem GeqProblem;

/**
 * Opaque run-trace handle.
 */
typedef struct GeqTrace GeqTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a built-in problem (`example61`, `example62`, `example21`,
 * `vi-linear`). `grid = 0` selects the default grid for `L^2` problems.
 *
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GeqStatus geq_problem_builtin(const char *name, size_t grid, struct GeqProblem **out);

/**
 * Parses a problem definition in the key-value text format. `grid = 0`
 * keeps the file's `dim`.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer.
 */
enum GeqStatus geq_problem_parse(const char *text, size_t grid, struct GeqProblem **out);

/**
 * Dimension of the problem's space; 0 for a null handle.
 *
 * # Safety
 * `problem` must be null or a live handle.
 */
size_t geq_problem_dim(const struct GeqProblem *problem);

/**
 * # Safety
 * `problem` must be null or a handle not yet freed.
 */
void geq_problem_free(struct GeqProblem *problem);

/**
 * Runs `solver` on `problem`.
 *
 * `schedule` is `c`, `a/(k+1)` or `beta:b/(k+1)`; null picks the CLI
 * default. `x0` may be null (start at the projection of 0) or point to
 * `x0_len` coordinates. A trace is produced whenever the configuration is
 * valid, including runs that stop on a step error; check
 * `geq_trace_status`.
 *
 * # Safety
 * Pointers must be valid for the stated lengths; strings NUL-terminated.
 */
enum GeqStatus geq_run(const struct GeqProblem *problem,
                       const char *solver,
                       const char *schedule,
                       double tol,
                       size_t max_iter,
                       const double *x0,
                       size_t x0_len,
                       struct GeqTrace **out);

/**
 * Samples a named starting function (`paper-x0-1`, `paper-x0-2`) on the
 * problem's grid into `buf`.
 *
 * # Safety
 * `name` must be NUL-terminated and `buf` valid for `len` writes.
 */
enum GeqStatus geq_start_preset(const struct GeqProblem *problem,
                                const char *name,
                                double *buf,
                                size_t len);

/**
 * Number of recorded iterations; 0 for a null handle.
 *
 * # Safety
 * `trace` must be null or a live handle.
 */
size_t geq_trace_len(const struct GeqTrace *trace);

/**
 * # Safety
 * `trace` must be null or a live handle.
 */
enum GeqRunStatus geq_trace_status(const struct GeqTrace *trace);

/**
 * Copies the residual series (`geq_trace_len` values) into `buf`.
 *
 * # Safety
 * `buf` must be valid for `len` writes.
 */
enum GeqStatus geq_trace_residuals(const struct GeqTrace *trace, double *buf, size_t len);

/**
 * Copies the final solution estimate (problem dimension values) into
 * `buf`. Fails with `InvalidArgument` if no step ran.
 *
 * # Safety
 * `buf` must be valid for `len` writes.
 */
enum GeqStatus geq_trace_solution(const struct GeqTrace *trace, double *buf, size_t len);

/**
 * Writes the trace CSV (`k,residual,energy,wall_ms`) to `path`.
 *
 * # Safety
 * `path` must be a NUL-terminated string.
 */
enum GeqStatus geq_trace_write_csv(const struct GeqTrace *trace, const char *path);

/**
 * # Safety
 * `trace` must be null or a handle not yet freed.
 */
void geq_trace_free(struct GeqTrace *trace);

/**
 * Message for the last failure on this thread, or null.
 */
const char *geq_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GOLDENEQ_H */
