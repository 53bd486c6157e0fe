#ifndef GAMMA_AQ_H
#define GAMMA_AQ_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result codes. Zero is success.
 */
typedef enum GammaAqStatus {
  GAMMA_AQ_STATUS_OK = 0,
  GAMMA_AQ_STATUS_NULL_POINTER = 1,
  GAMMA_AQ_STATUS_INVALID_UTF8 = 2,
  GAMMA_AQ_STATUS_PARSE = 3,
  GAMMA_AQ_STATUS_VALIDATION = 4,
  GAMMA_AQ_STATUS_RESOURCE_CAP = 5,
  GAMMA_AQ_STATUS_INVALID_ARGUMENT = 6,
  GAMMA_AQ_STATUS_COMPUTATION = 7,
  GAMMA_AQ_STATUS_IO = 8,
  GAMMA_AQ_STATUS_PANIC = 9,
} GammaAqStatus;

/**
 * Outcome recorded in a report.
 */
typedef enum GammaAqOutcome {
  GAMMA_AQ_OUTCOME_PASS = 0,
  GAMMA_AQ_OUTCOME_FAIL = 1,
  GAMMA_AQ_OUTCOME_INCONCLUSIVE = 2,
  GAMMA_AQ_OUTCOME_INFO = 3,
  GAMMA_AQ_OUTCOME_ERROR = 4,
} GammaAqOutcome;

/**
 * A parsed and validated problem file.
 */
typedef struct GammaAqProblem GammaAqProblem;

/**
 * A command report with its JSON rendering.
 */
typedef struct GammaAqReport GammaAqReport;

/**
 * Options for [`gamma_aq_piy`]. Negative integers mean "use the default".
 */
typedef struct GammaAqPiyOptions {
  int32_t degree;
  int32_t trunc;
  int32_t bound;
  /**
   * 0 takes π₀, 1 contracts with `t`, n > 1 with `Λⁿ ∘ t`.
   */
  uint32_t weight;
  bool absolute;
  bool no_empty_partition;
  /**
   * 0 keeps the default resource cap.
   */
  uint64_t cap;
} GammaAqPiyOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Library version as a static nul-terminated string.
 */
const char *gamma_aq_version(void);

/**
 * Message of the last failure on this thread, or null. Valid until the
 * next failing call on the same thread.
 */
const char *gamma_aq_last_error(void);

/**
 * Parses and validates problem-file text.
 *
 * # Safety
 * `text` must be a nul-terminated string and `out` a writable pointer.
 */
enum GammaAqStatus gamma_aq_problem_parse(const char *text, struct GammaAqProblem **out);

/**
 * # Safety
 * `problem` must come from [`gamma_aq_problem_parse`] and not be freed twice.
 */
void gamma_aq_problem_free(struct GammaAqProblem *problem);

/**
 * π₀ against Kähler differentials. `trunc` 0 means the default `N = 2`.
 *
 * # Safety
 * `problem` must be a live handle and `out` a writable pointer.
 */
enum GammaAqStatus gamma_aq_pi0(const struct GammaAqProblem *problem,
                                uint32_t trunc,
                                struct GammaAqReport **out);

/**
 * Classical `D₀` or `D₁`.
 *
 * # Safety
 * `problem` must be a live handle and `out` a writable pointer.
 */
enum GammaAqStatus gamma_aq_classical(const struct GammaAqProblem *problem,
                                      uint32_t degree,
                                      struct GammaAqReport **out);

/**
 * Fills `options` with defaults.
 *
 * # Safety
 * `options` must be writable.
 */
void gamma_aq_piy_options_default(struct GammaAqPiyOptions *options);

/**
 * Relative derived functors. `options` may be null for defaults and
 * `cache_dir` null to skip the cache. A resource-cap failure is reported as
 * an ERROR report (status `Ok`) carrying the largest feasible truncation.
 *
 * # Safety
 * Pointers must be null or valid as described above; `out` must be writable.
 */
enum GammaAqStatus gamma_aq_piy(const struct GammaAqProblem *problem,
                                const struct GammaAqPiyOptions *options,
                                const char *cache_dir,
                                struct GammaAqReport **out);

/**
 * The report as a JSON document, owned by the report.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
const char *gamma_aq_report_json(const struct GammaAqReport *report);

/**
 * # Safety
 * `report` must be a live handle or null.
 */
enum GammaAqOutcome gamma_aq_report_outcome(const struct GammaAqReport *report);

/**
 * # Safety
 * `report` must come from this library and not be freed twice.
 */
void gamma_aq_report_free(struct GammaAqReport *report);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* GAMMA_AQ_H */
