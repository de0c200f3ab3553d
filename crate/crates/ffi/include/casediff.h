/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef CASEDIFF_H
#define CASEDIFF_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum CdStatus {
  CD_STATUS_OK = 0,
  CD_STATUS_NULL_POINTER = 1,
  CD_STATUS_INVALID_UTF8 = 2,
  /**
   * Malformed or incomplete TOML configuration.
   */
  CD_STATUS_CONFIG = 3,
  /**
   * The configuration parsed but describes an invalid instance.
   */
  CD_STATUS_VALIDATION = 4,
  CD_STATUS_SIMULATION = 5,
  CD_STATUS_OUT_OF_RANGE = 6,
  /**
   * The individual never adopts within the simulated horizon.
   */
  CD_STATUS_NOT_ADOPTED = 7,
  CD_STATUS_COMPARISON = 8,
  CD_STATUS_PANIC = 99,
} CdStatus;

/**
 * A validated instance together with the run settings from its config.
 */
typedef struct CdInstance CdInstance;

typedef struct CdTrace CdTrace;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses a TOML config and builds its instance.
 *
 * `seed` may be null; otherwise it overrides the generator seed.
 *
 * # Safety
 * `toml` must be a nul-terminated string, `seed` null or valid, and `out`
 * a valid location for the new handle.
 */
enum CdStatus cd_instance_from_toml(const char *toml,
                                    const uint64_t *seed,
                                    struct CdInstance **out);

/**
 * # Safety
 * `instance` must be null or a handle from [`cd_instance_from_toml`] not yet freed.
 */
void cd_instance_free(struct CdInstance *instance);

/**
 * Number of individuals in the instance.
 *
 * # Safety
 * `instance` must be a live handle and `out` valid.
 */
enum CdStatus cd_instance_size(const struct CdInstance *instance, size_t *out);

/**
 * Runs the diffusion. A `horizon` of 0 uses the horizon from the config.
 *
 * # Safety
 * `instance` must be a live handle and `out` a valid location.
 */
enum CdStatus cd_simulate(const struct CdInstance *instance,
                          uint64_t horizon,
                          struct CdTrace **out);

/**
 * # Safety
 * `trace` must be null or a handle from [`cd_simulate`] not yet freed.
 */
void cd_trace_free(struct CdTrace *trace);

/**
 * Adopters by the end of `period`.
 *
 * # Safety
 * `trace` must be a live handle and `out` valid.
 */
enum CdStatus cd_trace_cumulative_at(const struct CdTrace *trace, uint64_t period, size_t *out);

/**
 * Period in which `individual` (0-based) adopts.
 *
 * # Safety
 * `trace` must be a live handle and `out` valid.
 */
enum CdStatus cd_trace_adoption_period(const struct CdTrace *trace,
                                       size_t individual,
                                       uint64_t *out);

/**
 * Per-period CSV with thresholds, as written by `casediff run`.
 *
 * # Safety
 * `trace` must be a live handle and `out` valid.
 */
enum CdStatus cd_trace_csv(const struct CdTrace *trace, char **out);

/**
 * Terminal summary as JSON.
 *
 * # Safety
 * `trace` must be a live handle and `out` valid.
 */
enum CdStatus cd_trace_summary_json(const struct CdTrace *trace, char **out);

/**
 * Closed-form coverage check as JSON. Needs a uniform network.
 *
 * # Safety
 * `instance` must be a live handle and `out` valid.
 */
enum CdStatus cd_coverage_json(const struct CdInstance *instance, char **out);

/**
 * Compares two product specifications on the same population.
 * A `horizon` of 0 uses the first config's horizon.
 *
 * # Safety
 * `a` and `b` must be live handles and `out` valid.
 */
enum CdStatus cd_compare_json(const struct CdInstance *a,
                              const struct CdInstance *b,
                              uint64_t horizon,
                              char **out);

/**
 * # Safety
 * `s` must be null or a string returned by this library, freed once.
 */
void cd_string_free(char *s);

/**
 * Message for the last failed call on this thread, or null after a success.
 * The pointer stays valid until the next call into the library on this thread.
 */
const char *cd_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* CASEDIFF_H */
