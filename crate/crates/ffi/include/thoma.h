#ifndef THOMA_H
#define THOMA_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

enum ThomaStatus
#if defined(__cplusplus) || __STDC_VERSION__ >= 202311L
  : int32_t
#endif // defined(__cplusplus) || __STDC_VERSION__ >= 202311L
 {
  THOMA_STATUS_OK = 0,
  THOMA_STATUS_NULL_POINTER = 1,
  THOMA_STATUS_PARSE = 2,
  THOMA_STATUS_NOT_ADMISSIBLE = 3,
  THOMA_STATUS_INVALID = 4,
  THOMA_STATUS_DEGREE_TOO_LARGE = 5,
  THOMA_STATUS_TAIL_NOT_CONVERGED = 6,
  THOMA_STATUS_CONTEXT_MISMATCH = 7,
  THOMA_STATUS_DEFECTIVE = 8,
  THOMA_STATUS_PANIC = 9,
};
#ifndef __cplusplus
#if __STDC_VERSION__ >= 202311L
typedef enum ThomaStatus ThomaStatus;
#else
typedef int32_t ThomaStatus;
#endif // __STDC_VERSION__ >= 202311L
#endif // __cplusplus

/**
 * Cached exact evaluator for the truncated density.
 */
typedef struct ThomaDensity ThomaDensity;

/**
 * Validated `(z, z', θ)`.
 */
typedef struct ThomaParams ThomaParams;

/**
 * Point of the Thoma simplex.
 */
typedef struct ThomaPoint ThomaPoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated).
 *
 * Returns the full message length excluding the terminator; a return value
 * `>= len` means the message was truncated.
 *
 * # Safety
 * `buf` must be valid for `len` bytes or null with `len == 0`.
 */
size_t thoma_last_error_message(char *buf, size_t len);

/**
 * Validates `(z, z', θ)` given as rational strings.
 *
 * # Safety
 * String arguments must be NUL-terminated; `out` must be writable.
 */
ThomaStatus thoma_params_new(const char *z_re,
                             const char *z_im,
                             const char *zp_re,
                             const char *zp_im,
                             const char *theta,
                             struct ThomaParams **out);

/**
 * # Safety
 * `p` must come from [`thoma_params_new`] or be null.
 */
void thoma_params_free(struct ThomaParams *p);

/**
 * `c = zz'/θ` as a double.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_params_c(const struct ThomaParams *p, double *out);

/**
 * Eigenvalue `α_m = m(m - 1 + c)`.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_params_alpha(const struct ThomaParams *p, size_t m, double *out);

/**
 * Builds a point from `n_alpha` and `n_beta` rational strings.
 *
 * # Safety
 * Arrays must hold the stated number of NUL-terminated strings.
 */
ThomaStatus thoma_point_new(const char *const *alpha,
                            size_t n_alpha,
                            const char *const *beta,
                            size_t n_beta,
                            struct ThomaPoint **out);

/**
 * # Safety
 * `w` must come from [`thoma_point_new`] or be null.
 */
void thoma_point_free(struct ThomaPoint *w);

/**
 * Prepares exact evaluation of the truncated density up to degree `max_degree`.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_density_new(const struct ThomaParams *p,
                              size_t max_degree,
                              struct ThomaDensity **out);

/**
 * # Safety
 * `d` must come from [`thoma_density_new`] or be null.
 */
void thoma_density_free(struct ThomaDensity *d);

/**
 * Truncated density at `(t, σ, ω)` and its rigorous truncation bound.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_density_eval(const struct ThomaDensity *d,
                               double t,
                               const struct ThomaPoint *sigma,
                               const struct ThomaPoint *omega,
                               double *value,
                               double *tail);

/**
 * Uniform bound on the error of truncating the density after degree `max_degree`.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_tail_bound(const struct ThomaParams *p, double t, size_t max_degree, double *out);

/**
 * Crude and refined total-variation bounds at time `t`.
 *
 * # Safety
 * Pointers must be valid.
 */
ThomaStatus thoma_tv_bound(const struct ThomaParams *p,
                           double t,
                           size_t max_degree,
                           double *crude,
                           double *refined);

/**
 * Laguerre function `𝔏_λ` as JSON `{"Q_mu": coefficient, …}` with exact string coefficients.
 *
 * The returned string is released with [`thoma_string_free`].
 *
 * # Safety
 * `parts` must hold `n_parts` entries; `out` must be writable.
 */
ThomaStatus thoma_laguerre_json(const struct ThomaParams *p,
                                const size_t *parts,
                                size_t n_parts,
                                char **out);

/**
 * # Safety
 * `s` must come from this library or be null.
 */
void thoma_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* THOMA_H */
