#ifndef WELLPOISED_H
#define WELLPOISED_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum WpStatus {
  WP_STATUS_OK = 0,
  WP_STATUS_NULL_POINTER = 1,
  WP_STATUS_INVALID_ARGUMENT = 2,
  WP_STATUS_NOT_CONVERGED = 3,
  WP_STATUS_BUFFER_TOO_SMALL = 4,
  WP_STATUS_PANIC = 5,
} WpStatus;

// Precision and tolerance shared by evaluations.
typedef struct WpContext WpContext;

// An exact linear form `q0 + sum_s q_s zeta(s)`.
typedef struct WpLinearForm WpLinearForm;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Copies the last error message of this thread into `buf`.
//
// # Safety
// `buf` must be writable for `len` bytes; `needed` may be NULL.
enum WpStatus wp_last_error(char *buf, size_t len, size_t *needed);

// Creates a context with `precision_bits` bits and relative tolerance `rel_tol`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum WpStatus wp_context_new(uint32_t precision_bits, double rel_tol, struct WpContext **out);

// # Safety
// `ctx` must come from [`wp_context_new`] and not be used afterwards. NULL is ignored.
void wp_context_free(struct WpContext *ctx);

// Sums the series with parameters `h[0] = h0, h[1..n]`. The value is stored
// in `value`; if `buf` is not NULL the full-precision decimal is copied too.
//
// # Safety
// `h` must point to `n` doubles, `value` must be writable, `buf` must be
// NULL or writable for `len` bytes, and `needed` may be NULL.
enum WpStatus wp_eval_series(const struct WpContext *ctx,
                             const double *h,
                             size_t n,
                             double *value,
                             char *buf,
                             size_t len,
                             size_t *needed);

// The multiple integral `J_k` by tensor quadrature with `nodes` coarse nodes per dimension.
//
// # Safety
// `a` and `b` must point to `k` doubles; `value` and `rel_err` must be writable.
enum WpStatus wp_eval_integral(const struct WpContext *ctx,
                               double a0,
                               const double *a,
                               const double *b,
                               size_t k,
                               size_t nodes,
                               double *value,
                               double *rel_err);

// Monte Carlo estimate of `J_k`; deterministic for fixed `(samples, seed, chunks)`.
//
// # Safety
// `a` and `b` must point to `k` doubles; `estimate` and `stderr_out` must be writable.
enum WpStatus wp_eval_integral_mc(double a0,
                                  const double *a,
                                  const double *b,
                                  size_t k,
                                  uint64_t samples,
                                  uint64_t seed,
                                  uint32_t chunks,
                                  double *estimate,
                                  double *stderr_out);

// Evaluates both sides of the series/integral identity at `h`.
//
// # Safety
// `h` must point to `n` doubles; the three outputs must be writable.
enum WpStatus wp_verify_theorem(const struct WpContext *ctx,
                                const double *h,
                                size_t n,
                                double *lhs,
                                double *rhs,
                                bool *pass);

// The contour-integral form of the one-dimensional integral at `z`.
//
// # Safety
// `value` must be writable.
enum WpStatus wp_barnes(const struct WpContext *ctx,
                        double a0,
                        double a,
                        double b,
                        double z,
                        double *value);

// Builds the exact linear form of the specialised series for `(k, n, r)`.
//
// # Safety
// `out` must be a valid pointer to a handle slot.
enum WpStatus wp_linear_form_new(size_t k, uint64_t n, uint64_t r, struct WpLinearForm **out);

// # Safety
// `form` must come from [`wp_linear_form_new`] and not be used afterwards. NULL is ignored.
void wp_linear_form_free(struct WpLinearForm *form);

// Copies the coefficient of `zeta(s)` as `"p/q"`; `s = 0` selects the rational part.
//
// # Safety
// `form` must be a live handle; see the module notes for the buffer contract.
enum WpStatus wp_linear_form_coeff(const struct WpLinearForm *form,
                                   uint32_t s,
                                   char *buf,
                                   size_t len,
                                   size_t *needed);

// Copies the form as JSON, e.g. `{"q0":"0","zeta":{"3":"2"}}`.
//
// # Safety
// `form` must be a live handle; see the module notes for the buffer contract.
enum WpStatus wp_linear_form_json(const struct WpLinearForm *form,
                                  char *buf,
                                  size_t len,
                                  size_t *needed);

// Numerical value of the form at the context precision.
//
// # Safety
// `form` and `ctx` must be live handles; `value` must be writable.
enum WpStatus wp_linear_form_value(const struct WpLinearForm *form,
                                   const struct WpContext *ctx,
                                   double *value);

// Whether `D_n^{k+1} Phi_n^{-1} J_{k,n}` has integer coefficients (odd `k >= 3`).
//
// # Safety
// `included` must be writable.
enum WpStatus wp_inclusion_check(size_t k, uint64_t n, bool *included);

// `ln(Phi_n) / n`.
//
// # Safety
// `value` must be writable.
enum WpStatus wp_phi_growth(uint64_t n, double *value);

// Order of the group generated by the parameter permutations, with the
// involution added when `with_involution` is set (`k` in {2, 3} only).
//
// # Safety
// `order` must be writable.
enum WpStatus wp_group_order(size_t k, bool with_involution, size_t *order);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* WELLPOISED_H */
