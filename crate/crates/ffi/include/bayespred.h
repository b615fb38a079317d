#ifndef BAYESPRED_H
#define BAYESPRED_H

/* Generated by cbindgen; do not edit. */

#include <stddef.h>
#include <stdint.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum BpStatus {
  BP_STATUS_OK = 0,
  BP_STATUS_NULL_POINTER = 1,
  BP_STATUS_INVALID_ARGUMENT = 2,
  BP_STATUS_DOMAIN = 3,
  BP_STATUS_NUMERICAL = 4,
  BP_STATUS_TOO_MANY_FAILURES = 5,
  BP_STATUS_PANIC = 6,
} BpStatus;

/**
 * A parametric family with its prior.
 */
typedef struct BpModel BpModel;

/**
 * The posterior predictive after some observed sample.
 */
typedef struct BpPredictive BpPredictive;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *bp_version(void);

/**
 * Message of the last failed call on this thread; empty after a success.
 * Valid until the next call into the library on the same thread.
 */
const char *bp_last_error(void);

/**
 * Builds a model from a family name and `n_hyper` key/value pairs.
 *
 * # Safety
 * `family` must be a NUL-terminated string; `keys` and `values` must point
 * to `n_hyper` entries; `out` must be writable.
 */
enum BpStatus bp_model_new(const char *family,
                           const char *const *keys,
                           const double *values,
                           size_t n_hyper,
                           struct BpModel **out);

/**
 * # Safety
 * `model` must come from [`bp_model_new`] and not be freed twice. Null is ignored.
 */
void bp_model_free(struct BpModel *model);

/**
 * Posterior predictive of `model` after observing `data[0..n]`.
 *
 * # Safety
 * `model` must be a live handle; `data` must point to `n` doubles; `out`
 * must be writable.
 */
enum BpStatus bp_predictive_new(const struct BpModel *model,
                                const double *data,
                                size_t n,
                                struct BpPredictive **out);

/**
 * # Safety
 * `pred` must come from [`bp_predictive_new`] and not be freed twice. Null is ignored.
 */
void bp_predictive_free(struct BpPredictive *pred);

/**
 * Predictive density (or mass) at `x`.
 *
 * # Safety
 * `pred` must be a live handle and `out` writable.
 */
enum BpStatus bp_predictive_density(const struct BpPredictive *pred, double x, double *out);

/**
 * Predictive distribution function at `t`.
 *
 * # Safety
 * `pred` must be a live handle and `out` writable.
 */
enum BpStatus bp_predictive_cdf(const struct BpPredictive *pred, double t, double *out);

/**
 * Posterior mean of the parameter.
 *
 * # Safety
 * `pred` must be a live handle and `out` writable.
 */
enum BpStatus bp_posterior_mean(const struct BpPredictive *pred, double *out);

/**
 * Monte Carlo Bayes risk of an estimator under a loss, both given by name
 * (e.g. `"PosteriorPredictive"`, `"SquaredTV"`).
 *
 * # Safety
 * `model` must be a live handle, the names NUL-terminated strings and the
 * out pointers writable.
 */
enum BpStatus bp_bayes_risk(const struct BpModel *model,
                            const char *estimator,
                            const char *loss,
                            size_t n,
                            size_t reps,
                            uint64_t seed,
                            double *mean,
                            double *std_error,
                            size_t *failures);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* BAYESPRED_H */
