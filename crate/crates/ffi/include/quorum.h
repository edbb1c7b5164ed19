#ifndef QUORUM_H
#define QUORUM_H

/* Generated by cbindgen from crates/ffi/src. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of every fallible call.
 */
typedef enum QuorumStatus {
  QUORUM_STATUS_OK = 0,
  QUORUM_STATUS_NULL_POINTER = 1,
  QUORUM_STATUS_INVALID_UTF8 = 2,
  QUORUM_STATUS_INVALID_JSON = 3,
  QUORUM_STATUS_LENGTH_MISMATCH = 4,
  QUORUM_STATUS_SCHEMA = 5,
  QUORUM_STATUS_TASK_MISMATCH = 6,
  QUORUM_STATUS_UNKNOWN_METRIC = 7,
  QUORUM_STATUS_INVALID_CONFIG = 8,
  QUORUM_STATUS_DEGENERATE = 9,
  QUORUM_STATUS_IO = 10,
  /**
   * A Rust panic was caught at the boundary.
   */
  QUORUM_STATUS_INTERNAL = 11,
} QuorumStatus;

/**
 * Opaque scorer handle.
 */
typedef struct QuorumScorer QuorumScorer;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Builds a scorer from a JSON configuration. On success `*out` holds a
 * handle to release with [`quorum_scorer_free`].
 *
 * # Safety
 * `config_json` must be NULL or a valid NUL-terminated string; `out` must be
 * NULL or valid for writes.
 */
enum QuorumStatus quorum_scorer_new(const char *config_json, struct QuorumScorer **out);

/**
 * Evaluates one collection and writes the canonical JSON report to `*out`.
 * A handle must not be used from two threads at once.
 *
 * # Safety
 * `scorer` must come from [`quorum_scorer_new`] and not have been freed.
 * String arguments must be NULL or valid NUL-terminated strings; `out`
 * must be NULL or valid for writes.
 */
enum QuorumStatus quorum_scorer_evaluate(const struct QuorumScorer *scorer,
                                         const char *predictions_json,
                                         const char *references_json,
                                         char **out);

/**
 * Releases a scorer. NULL is ignored.
 *
 * # Safety
 * `scorer` must be NULL or come from [`quorum_scorer_new`], and must not be
 * used afterwards.
 */
void quorum_scorer_free(struct QuorumScorer *scorer);

/**
 * Loads one metric and scores a collection with the default reduce policy.
 * `params_json` may be NULL for defaults. `*out` receives
 * `{"score": ..., "components": {...}}`.
 *
 * # Safety
 * String arguments must be NULL or valid NUL-terminated strings; `out` must
 * be NULL or valid for writes.
 */
enum QuorumStatus quorum_compute_metric(const char *name,
                                        const char *params_json,
                                        const char *predictions_json,
                                        const char *references_json,
                                        char **out);

/**
 * Message for the last failed call on this thread, or NULL after a
 * success. The pointer stays valid until the next call on this thread.
 */
const char *quorum_last_error_message(void);

/**
 * Releases a string returned through an `out` parameter. NULL is ignored.
 *
 * # Safety
 * `s` must be NULL or a string produced by this library, not yet freed.
 */
void quorum_string_free(char *s);

/**
 * Library version, statically allocated.
 */
const char *quorum_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QUORUM_H */
