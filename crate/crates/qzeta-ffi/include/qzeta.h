/* C interface to the qzeta evaluators. */

#ifndef QZETA_H
#define QZETA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes. Everything except `Ok` leaves out-parameters untouched.
typedef enum QzetaStatus {
  QZETA_STATUS_OK = 0,
  // bad pointer, q outside (0,1), non-finite input, invalid tolerance
  QZETA_STATUS_INVALID_ARGUMENT = 1,
  // evaluation point within the hard margin of the pole lattice
  QZETA_STATUS_POLE_PROXIMITY = 2,
  // term budget exhausted before the tolerance was met
  QZETA_STATUS_BUDGET = 3,
  // cancellation beyond double-double rescue at the requested tolerance
  QZETA_STATUS_PRECISION_LOSS = 4,
  // aggregation had fewer usable rows than required
  QZETA_STATUS_INSUFFICIENT_DATA = 5,
  // panic inside the library (a bug; please report)
  QZETA_STATUS_INTERNAL = 6,
} QzetaStatus;

// Which evaluator produced a result.
typedef enum QzetaMethod {
  QZETA_METHOD_DIRECT = 0,
  QZETA_METHOD_CONTINUATION = 1,
} QzetaMethod;

// Opaque evaluation context: deformation parameter plus tolerances.
typedef struct QzetaQ QzetaQ;

// One evaluation outcome. `value_re`/`value_im` are meaningful only when
// `has_value` is true (the magnitude may overflow f64 while the log form
// `log_abs`/`arg` stays finite).
typedef struct QzetaEval {
  double value_re;
  double value_im;
  double log_abs;
  double arg;
  uint64_t terms_used;
  double tail_bound;
  double pole_margin;
  enum QzetaMethod method;
  bool has_value;
} QzetaEval;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Create an evaluation context with default tolerances.
//
// # Safety
// `out` must be a valid pointer to writable memory for one `*mut QzetaQ`.
// On `Ok` it receives a handle that must be released with [`qzeta_q_free`].
enum QzetaStatus qzeta_q_new(double q, struct QzetaQ **out);

// Create an evaluation context with explicit tolerances.
//
// # Safety
// Same contract as [`qzeta_q_new`].
enum QzetaStatus qzeta_q_new_with_tol(double q,
                                      double rel_tol,
                                      uint64_t max_terms,
                                      struct QzetaQ **out);

// Release a context created by [`qzeta_q_new`]. A null pointer is a no-op.
//
// # Safety
// `ptr` must be null or a pointer previously returned through
// `qzeta_q_new`/`qzeta_q_new_with_tol` that has not been freed yet.
void qzeta_q_free(struct QzetaQ *ptr);

// Evaluate zeta_q(s, t), choosing direct summation or the analytic
// continuation automatically.
//
// # Safety
// `h` must be a live handle; `out` must point to writable memory for one
// `QzetaEval`.
enum QzetaStatus qzeta_eval_two(const struct QzetaQ *h,
                                double s_re,
                                double s_im,
                                double t_re,
                                double t_im,
                                struct QzetaEval *out);

// Evaluate zeta_q(s, t) through the continuation identity at truncation
// level `n` (n >= 1).
//
// # Safety
// Same contract as [`qzeta_eval_two`].
enum QzetaStatus qzeta_eval_continued(const struct QzetaQ *h,
                                      double s_re,
                                      double s_im,
                                      double t_re,
                                      double t_im,
                                      uint32_t n,
                                      struct QzetaEval *out);

// Evaluate the single-variable zeta_q(s) = zeta_q(s, s-1).
//
// # Safety
// Same contract as [`qzeta_eval_two`].
enum QzetaStatus qzeta_eval_single(const struct QzetaQ *h,
                                   double s_re,
                                   double s_im,
                                   struct QzetaEval *out);

// Truncation level prescribed by the growth analysis for height `abs_v`.
//
// # Safety
// `h` must be a live handle; `out` must point to writable memory for one
// `uint32_t`.
enum QzetaStatus qzeta_choose_n(const struct QzetaQ *h, double re_t, double abs_v, uint32_t *out);

// Distance from t to the continuation's pole lattice:
// inf_{r >= r_min} |1 - q^{t+r}|.
//
// # Safety
// `h` must be a live handle; `out` must point to writable memory for one
// `double`.
enum QzetaStatus qzeta_epsilon_margin(const struct QzetaQ *h,
                                      double t_re,
                                      double t_im,
                                      int64_t r_min,
                                      double *out);

// Riemann zeta for comparison targets (Re s > -1, s != 1).
//
// # Safety
// `out_re` and `out_im` must each point to writable memory for one `double`.
enum QzetaStatus qzeta_classical_zeta(double s_re, double s_im, double *out_re, double *out_im);

// Static description of a status code. Never null.
const char *qzeta_status_message(enum QzetaStatus status);

// Library version as a static nul-terminated string.
const char *qzeta_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QZETA_H */
