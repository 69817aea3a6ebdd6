#ifndef K3ATLAS_H
#define K3ATLAS_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum K3Status {
  K3_STATUS_OK = 0,
  K3_STATUS_NULL_POINTER = 1,
  K3_STATUS_INVALID_ARGUMENT = 2,
  K3_STATUS_DOMAIN = 3,
  K3_STATUS_PRECISION = 4,
  K3_STATUS_PARSE = 5,
  K3_STATUS_HUMBERT = 6,
  K3_STATUS_IDENTITY = 7,
  K3_STATUS_PANIC = 8,
} K3Status;

/**
 * Polynomial with rational coefficients.
 */
typedef struct K3Poly K3Poly;

typedef struct K3Complex {
  double re;
  double im;
} K3Complex;

/**
 * E4, E6, C5, C10, C12 at one period point.
 */
typedef struct K3Forms {
  struct K3Complex e4;
  struct K3Complex e6;
  struct K3Complex c5;
  struct K3Complex c10;
  struct K3Complex c12;
} K3Forms;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Copies the last error message of this thread into `buf` (NUL-terminated,
 * truncated to `len`). Returns the full message length without the NUL, 0 if none.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t k3_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *k3_version(void);

/**
 * Modular forms at κ = [[τ, z], [z, u]].
 *
 * # Safety
 * `out` must point to a writable `K3Forms`.
 */
enum K3Status k3_forms(struct K3Complex tau,
                       struct K3Complex z,
                       struct K3Complex u,
                       double eps,
                       struct K3Forms *out);

/**
 * Writes [α, β, γ, δ] (unnormalized) to `out_params[0..4]` and the H1 flag to `out_h1`.
 *
 * # Safety
 * `out_params` must point to 4 writable values; `out_h1` may be null.
 */
enum K3Status k3_inverse_period(struct K3Complex tau,
                                struct K3Complex z,
                                struct K3Complex u,
                                double eps,
                                struct K3Complex *out_params,
                                bool *out_h1);

/**
 * Igusa-Clebsch invariants of weights (2, 4, 6, 10) from [α, β, γ, δ].
 *
 * # Safety
 * `params` must point to 4 readable values and `out` to 4 writable ones.
 */
enum K3Status k3_igusa_clebsch(const struct K3Complex *params, struct K3Complex *out);

/**
 * The j-pair (j(i) = 1728) of the product case γ = 0, sorted.
 *
 * # Safety
 * `params` must point to 4 readable values and `out` to 2 writable ones.
 */
enum K3Status k3_split_j(const struct K3Complex *params, struct K3Complex *out);

/**
 * Parses `src` over the whitespace-separated variable list `vars`.
 *
 * # Safety
 * `src` and `vars` must be NUL-terminated strings; `out` must be writable.
 */
enum K3Status k3_poly_parse(const char *src, const char *vars, struct K3Poly **out);

/**
 * Number of variables, 0 for a null handle.
 *
 * # Safety
 * `p` must be null or a live handle.
 */
size_t k3_poly_nvars(const struct K3Poly *p);

/**
 * Evaluates at `point[0..n]`, where `n` must equal the number of variables.
 *
 * # Safety
 * `p` must be a live handle, `point` must hold `n` values, `out` must be writable.
 */
enum K3Status k3_poly_eval(const struct K3Poly *p,
                           const struct K3Complex *point,
                           size_t n,
                           struct K3Complex *out);

/**
 * Product of two polynomials over the same variables.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` writable.
 */
enum K3Status k3_poly_mul(const struct K3Poly *a, const struct K3Poly *b, struct K3Poly **out);

/**
 * Canonical text form; release with [`k3_string_free`].
 *
 * # Safety
 * `p` must be a live handle and `out` writable.
 */
enum K3Status k3_poly_to_string(const struct K3Poly *p, char **out);

/**
 * # Safety
 * `p` must be null or a handle from this library not yet freed.
 */
void k3_poly_free(struct K3Poly *p);

/**
 * # Safety
 * `s` must be null or a string from this library not yet freed.
 */
void k3_string_free(char *s);

/**
 * Runs the exact identity suite; `jobs` = 0 uses one thread per core.
 * Returns `K3_STATUS_IDENTITY` if any identity fails.
 *
 * # Safety
 * `passed` and `total` must be writable.
 */
enum K3Status k3_verify_exact(size_t jobs, size_t *passed, size_t *total);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* K3ATLAS_H */
