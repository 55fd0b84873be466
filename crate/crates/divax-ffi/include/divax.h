#ifndef DIVAX_H
#define DIVAX_H

/* Generated by cbindgen from divax-ffi; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum DivaxStatus {
  DIVAX_STATUS_OK = 0,
  DIVAX_STATUS_NULL_POINTER = 1,
  DIVAX_STATUS_INVALID_ARGUMENT = 2,
  DIVAX_STATUS_DOMAIN_ERROR = 3,
} DivaxStatus;

/**
 * Domain selector for distribution handles.
 */
typedef enum DivaxDomain {
  DIVAX_DOMAIN_OPEN = 0,
  DIVAX_DOMAIN_CLOSED = 1,
} DivaxDomain;

/**
 * Opaque validated probability vector.
 */
typedef struct DivaxDistribution DivaxDistribution;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Validate `entries[0..len]` as a probability vector on the given domain
 * and hand back an owned handle.
 *
 * # Safety
 * `entries` must point to `len` readable doubles; `out` must be a valid
 * pointer to a handle slot.
 */
enum DivaxStatus divax_distribution_create(const double *entries,
                                           size_t len,
                                           enum DivaxDomain domain,
                                           struct DivaxDistribution **out);

/**
 * Release a handle from `divax_distribution_create`. Null is a no-op.
 *
 * # Safety
 * `dist` must be null or a handle not yet freed.
 */
void divax_distribution_free(struct DivaxDistribution *dist);

/**
 * Number of entries in the distribution.
 *
 * # Safety
 * `dist` must be a live handle.
 */
size_t divax_distribution_len(const struct DivaxDistribution *dist);

/**
 * The deformed logarithm `ln_alpha(x)`; requires `x > 0` and finite alpha.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum DivaxStatus divax_ln_alpha(double x, double alpha, double *out);

/**
 * Relative entropy of `p` against `q` at the given alpha. The handles must
 * share length and domain; evaluation follows the handles' domain. On the
 * closed domain at alpha = 1 the value may be +infinity, reported through
 * `out_finite = 0` with `out_value` set to INFINITY.
 *
 * # Safety
 * `p` and `q` must be live handles; `out_value` and `out_finite` valid
 * pointers.
 */
enum DivaxStatus divax_relative_entropy(const struct DivaxDistribution *p,
                                        const struct DivaxDistribution *q,
                                        double alpha,
                                        double *out_value,
                                        int32_t *out_finite);

/**
 * Run the axiom suite for the closed-domain divergence family at one alpha
 * and return the JSON report (same schema as the CLI). The returned string
 * must be released with `divax_string_free`.
 *
 * # Safety
 * `out_json` must be a valid pointer.
 */
enum DivaxStatus divax_axiom_suite_json(double alpha,
                                        uint64_t seed,
                                        uint32_t trials,
                                        uint32_t n_max,
                                        char **out_json);

/**
 * Release a string returned by `divax_axiom_suite_json`. Null is a no-op.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void divax_string_free(char *s);

/**
 * Description of the most recent failure on this thread. Valid until the
 * next failing call from the same thread; never null.
 */
const char *divax_last_error_message(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* DIVAX_H */
