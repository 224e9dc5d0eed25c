/* C interface to the chaosbench dynamical-systems library. */

#ifndef CHAOSBENCH_H
#define CHAOSBENCH_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible entry point.
 */
typedef enum ChaosStatus {
  /**
   * Success.
   */
  CHAOS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  CHAOS_NULL_POINTER = 1,
  /**
   * A string argument was not valid UTF-8.
   */
  CHAOS_INVALID_UTF8 = 2,
  /**
   * No registered system has the requested name.
   */
  CHAOS_UNKNOWN_SYSTEM = 3,
  /**
   * An argument was out of range or inconsistent.
   */
  CHAOS_INVALID_ARGUMENT = 4,
  /**
   * The computation failed numerically (divergence, non-convergence...).
   */
  CHAOS_NUMERICAL_FAILURE = 5,
  /**
   * The supplied buffer is too small.
   */
  CHAOS_BUFFER_TOO_SMALL = 6,
  /**
   * The system carries no precomputed annotations.
   */
  CHAOS_MISSING_ANNOTATION = 7,
} ChaosStatus;

/**
 * Opaque handle to a registered dynamical system.
 */
typedef struct ChaosSystem ChaosSystem;

/**
 * Opaque handle to a uniformly sampled trajectory.
 */
typedef struct ChaosTrajectory ChaosTrajectory;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static NUL-terminated string.
 */
const char *chaos_version(void);

/**
 * Message of the last error raised on this thread (empty if none). The
 * pointer is valid until the next failing call on the same thread.
 */
const char *chaos_last_error_message(void);

/**
 * Number of registered systems.
 */
uintptr_t chaos_system_count(void);

/**
 * Name of the system at `index` (registry order), or null when out of
 * range. The pointer is static.
 */
const char *chaos_system_name_at(uintptr_t index);

/**
 * Look a system up by name. On success `*out` owns a new handle that must
 * be released with `chaos_system_free`.
 *
 * # Safety
 * `name` must be a valid NUL-terminated string and `out` a valid pointer.
 */
enum ChaosStatus chaos_system_lookup(const char *name, struct ChaosSystem **out);

/**
 * Release a system handle. Null is a no-op.
 *
 * # Safety
 * `system` must come from `chaos_system_lookup` and not be freed twice.
 */
void chaos_system_free(struct ChaosSystem *system);

/**
 * State-space dimension, or 0 for a null handle.
 *
 * # Safety
 * `system` must be a live handle or null.
 */
uintptr_t chaos_system_dimension(const struct ChaosSystem *system);

/**
 * Recommended integration timestep.
 *
 * # Safety
 * `system` must be a live handle or null.
 */
double chaos_system_dt(const struct ChaosSystem *system);

/**
 * Dominant timescale (time units).
 *
 * # Safety
 * `system` must be a live handle or null.
 */
double chaos_system_period(const struct ChaosSystem *system);

/**
 * Copy the default initial condition into `buffer` (length
 * `buffer_len` doubles; must be >= the system dimension).
 *
 * # Safety
 * `system` must be live; `buffer` must point to `buffer_len` doubles.
 */
enum ChaosStatus chaos_system_initial_condition(const struct ChaosSystem *system,
                                                double *buffer,
                                                uintptr_t buffer_len);

/**
 * Annotated largest Lyapunov exponent, written to `*out`.
 *
 * # Safety
 * `system` must be live; `out` must be a valid pointer.
 */
enum ChaosStatus chaos_system_largest_lyapunov(const struct ChaosSystem *system, double *out);

/**
 * Integrate with the fixed-step RK4 scheme from `ic` (length `dim`):
 * `n_steps` steps of size `dt`, producing `n_steps + 1` samples. On
 * success `*out` owns a trajectory handle.
 *
 * # Safety
 * `system` must be live; `ic` must point to `dim` doubles; `out` must be
 * a valid pointer.
 */
enum ChaosStatus chaos_integrate_fixed(const struct ChaosSystem *system,
                                       const double *ic,
                                       uintptr_t dim,
                                       double dt,
                                       uintptr_t n_steps,
                                       struct ChaosTrajectory **out);

/**
 * Release a trajectory handle. Null is a no-op.
 *
 * # Safety
 * `trajectory` must come from this library and not be freed twice.
 */
void chaos_trajectory_free(struct ChaosTrajectory *trajectory);

/**
 * Number of samples in a trajectory (0 for null).
 *
 * # Safety
 * `trajectory` must be a live handle or null.
 */
uintptr_t chaos_trajectory_len(const struct ChaosTrajectory *trajectory);

/**
 * State-space dimension of a trajectory (0 for null).
 *
 * # Safety
 * `trajectory` must be a live handle or null.
 */
uintptr_t chaos_trajectory_dim(const struct ChaosTrajectory *trajectory);

/**
 * Copy the sample times (length `len`) into `buffer`.
 *
 * # Safety
 * `trajectory` must be live; `buffer` must point to `buffer_len` doubles.
 */
enum ChaosStatus chaos_trajectory_times(const struct ChaosTrajectory *trajectory,
                                        double *buffer,
                                        uintptr_t buffer_len);

/**
 * Copy the row-major `len * dim` state matrix into `buffer`.
 *
 * # Safety
 * `trajectory` must be live; `buffer` must point to `buffer_len` doubles.
 */
enum ChaosStatus chaos_trajectory_states(const struct ChaosTrajectory *trajectory,
                                         double *buffer,
                                         uintptr_t buffer_len);

/**
 * Estimate the Lyapunov spectrum and copy it into `buffer` (length
 * `buffer_len` doubles, must be >= the system dimension). Runs the same
 * replicated estimator as the library's characterization module.
 *
 * # Safety
 * `system` must be live; `buffer` must point to `buffer_len` doubles.
 */
enum ChaosStatus chaos_lyapunov_spectrum(const struct ChaosSystem *system,
                                         uintptr_t n_periods,
                                         uintptr_t replicates,
                                         uint64_t seed,
                                         double tolerance,
                                         double *buffer,
                                         uintptr_t buffer_len);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CHAOSBENCH_H */
