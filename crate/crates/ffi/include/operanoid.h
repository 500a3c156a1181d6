#ifndef OPERANOID_H
#define OPERANOID_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum OperanoidStatus {
  OPERANOID_STATUS_OK = 0,
  OPERANOID_STATUS_NULL_POINTER = 1,
  OPERANOID_STATUS_INVALID_INPUT = 2,
  OPERANOID_STATUS_DIMENSION_MISMATCH = 3,
  /**
   * Eigensolver or quadrature failure.
   */
  OPERANOID_STATUS_NUMERICAL = 4,
  /**
   * Malformed JSON or a string that is not UTF-8.
   */
  OPERANOID_STATUS_PARSE = 5,
  /**
   * A Rust panic was caught; the handle involved should be treated as unusable.
   */
  OPERANOID_STATUS_PANIC = 6,
} OperanoidStatus;

/**
 * Opaque operatope handle.
 */
typedef struct OperanoidOperatope OperanoidOperatope;

/**
 * Opaque Monte Carlo sampler handle.
 */
typedef struct OperanoidSampler OperanoidSampler;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *operanoid_version(void);

/**
 * Copies the calling thread's last error message into `buf` (truncated and
 * always NUL-terminated when `len > 0`). Returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to `len` writable bytes.
 */
size_t operanoid_last_error(char *buf, size_t len);

/**
 * Parses an operatope from its JSON file format.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OperanoidStatus operanoid_operatope_from_json(const char *json,
                                                   struct OperanoidOperatope **out);

/**
 * # Safety
 * `z` must be null or a handle from [`operanoid_operatope_from_json`] not yet freed.
 */
void operanoid_operatope_free(struct OperanoidOperatope *z);

/**
 * # Safety
 * `z` must be a live handle and `out` a valid pointer.
 */
enum OperanoidStatus operanoid_operatope_dim(const struct OperanoidOperatope *z, size_t *out);

/**
 * Support function at `u` (length `len`, which must equal the dimension).
 *
 * # Safety
 * `z` must be a live handle, `u` must point to `len` doubles and `out` be valid.
 */
enum OperanoidStatus operanoid_operatope_support(const struct OperanoidOperatope *z,
                                                 const double *u,
                                                 size_t len,
                                                 double *out);

/**
 * A boundary point maximizing `⟨·, u⟩`, written to `point[0..len]`.
 *
 * # Safety
 * `z` must be a live handle; `u` and `point` must each hold `len` doubles.
 */
enum OperanoidStatus operanoid_operatope_boundary_point(const struct OperanoidOperatope *z,
                                                        const double *u,
                                                        size_t len,
                                                        double *point);

/**
 * Builds a sampler from an ensemble spec in JSON; `normalized` divides each
 * draw by its matrix size.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum OperanoidStatus operanoid_sampler_from_json(const char *json,
                                                 bool normalized,
                                                 struct OperanoidSampler **out);

/**
 * # Safety
 * `s` must be null or a handle from [`operanoid_sampler_from_json`] not yet freed.
 */
void operanoid_sampler_free(struct OperanoidSampler *s);

/**
 * Monte Carlo support value over draws `0..n` of `seed`, with its standard error.
 *
 * # Safety
 * `s` must be a live handle, `u` must point to `len` doubles, and
 * `value`/`std_error` must be valid pointers.
 */
enum OperanoidStatus operanoid_sampler_support(const struct OperanoidSampler *s,
                                               const double *u,
                                               size_t len,
                                               size_t n,
                                               uint64_t seed,
                                               double *value,
                                               double *std_error);

/**
 * Trace norm of the Hermitian `m × m` matrix with row-major real part `re`
 * and imaginary part `im` (null for a real symmetric matrix).
 *
 * # Safety
 * `re` (and `im` when not null) must point to `m * m` doubles; `out` must be valid.
 */
enum OperanoidStatus operanoid_trace_norm(const double *re,
                                          const double *im,
                                          size_t m,
                                          double *out);

/**
 * Support function of the free zonoid of `(Y - κ^{-1/2}, βS)` with `Y` the
 * Marchenko–Pastur limit of aspect `κ` and `S` standard semicircular.
 *
 * # Safety
 * `u` must point to two doubles and `out` must be valid.
 */
enum OperanoidStatus operanoid_mp_semicircle_support(double kappa,
                                                     double beta,
                                                     const double *u,
                                                     double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* OPERANOID_H */
