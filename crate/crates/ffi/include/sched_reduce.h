#ifndef SCHED_REDUCE_H
#define SCHED_REDUCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SrStatus {
  SR_STATUS_OK = 0,
  SR_STATUS_NULL_ARGUMENT = 1,
  SR_STATUS_INVALID_UTF8 = 2,
  SR_STATUS_FORMAT = 3,
  SR_STATUS_INVALID_INSTANCE = 4,
  SR_STATUS_WRONG_KIND = 5,
  SR_STATUS_INFEASIBLE = 6,
  SR_STATUS_BUDGET_EXCEEDED = 7,
  SR_STATUS_TOO_LARGE = 8,
  SR_STATUS_PANIC = 9,
  SR_STATUS_OTHER = 10,
} SrStatus;

/*
 Output and provenance of the communication-delay reduction.
 */
typedef struct SrCommDelayArtifact SrCommDelayArtifact;

/*
 Result of an exact solve.
 */
typedef struct SrSolveResult SrSolveResult;

/*
 A UMPS instance.
 */
typedef struct SrUmps SrUmps;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/*
 Message for the last failed call on this thread, or NULL. The pointer
 stays valid until the next failing call on the same thread.
 */
const char *sr_last_error(void);

/*
 Releases a string returned by this library. NULL is ignored.

 # Safety
 `s` must come from this library and not have been freed.
 */
void sr_string_free(char *s);

/*
 Parses a `"kind": "umps"` document.

 # Safety
 `json` must be a NUL-terminated string; `out` must be writable.
 */
enum SrStatus sr_umps_from_json(const char *json, struct SrUmps **out);

/*
 # Safety
 `inst` must be a live handle; `out` must be writable.
 */
enum SrStatus sr_umps_to_json(const struct SrUmps *inst, char **out);

/*
 # Safety
 `inst` must be a live handle; `n` and `m` must be writable.
 */
enum SrStatus sr_umps_size(const struct SrUmps *inst, size_t *n, size_t *m);

/*
 # Safety
 `inst` must come from `sr_umps_from_json` and not have been freed.
 */
void sr_umps_free(struct SrUmps *inst);

/*
 Exact minimum makespan. `max_states` of 0 keeps the default budget.
 A run that exhausts the budget still succeeds; check
 `sr_solve_result_proven`.

 # Safety
 `inst` must be a live handle; `out` must be writable.
 */
enum SrStatus sr_umps_solve_exact(const struct SrUmps *inst,
                                  size_t max_jobs,
                                  uint64_t max_states,
                                  struct SrSolveResult **out);

/*
 Optimum as a reduced fraction `num / den`.

 # Safety
 `r` must be a live handle; `num` and `den` must be writable.
 */
enum SrStatus sr_solve_result_optimum(const struct SrSolveResult *r, int64_t *num, int64_t *den);

/*
 1 when the optimum is proven, 0 when a budget ran out, -1 on NULL.

 # Safety
 `r` must be NULL or a live handle.
 */
int32_t sr_solve_result_proven(const struct SrSolveResult *r);

/*
 # Safety
 `r` must be NULL or a live handle.
 */
uint64_t sr_solve_result_states(const struct SrSolveResult *r);

/*
 The schedule as a `"kind": "schedule"` document.

 # Safety
 `r` must be a live handle; `out` must be writable.
 */
enum SrStatus sr_solve_result_schedule_json(const struct SrSolveResult *r, char **out);

/*
 # Safety
 `r` must come from this library and not have been freed.
 */
void sr_solve_result_free(struct SrSolveResult *r);

/*
 Builds the communication-delay instance with one dummy job per machine.

 # Safety
 `inst` must be a live handle; `out` must be writable.
 */
enum SrStatus sr_umps_to_commdelay(const struct SrUmps *inst, struct SrCommDelayArtifact **out);

/*
 # Safety
 `art` must be NULL or a live handle.
 */
uint64_t sr_commdelay_artifact_c_infinity(const struct SrCommDelayArtifact *art);

/*
 The reduced instance as a `"kind": "commdelay"` document.

 # Safety
 `art` must be a live handle; `out` must be writable.
 */
enum SrStatus sr_commdelay_artifact_output_json(const struct SrCommDelayArtifact *art, char **out);

/*
 # Safety
 `art` must come from this library and not have been freed.
 */
void sr_commdelay_artifact_free(struct SrCommDelayArtifact *art);

/*
 Checks a schedule (or solve result) document against a UMPS,
 commdelay or related instance document. `feasible` receives 1 or 0;
 the violation list, if any, is available through `sr_last_error`.

 # Safety
 Both strings must be NUL-terminated; `feasible` must be writable.
 */
enum SrStatus sr_verify_json(const char *instance_json,
                             const char *schedule_json,
                             int32_t *feasible);

/*
 One CSV gap row (no header, no newline) for the communication-delay
 round trip of `inst`.

 # Safety
 `inst` must be a live handle; `id` NUL-terminated; `out` writable.
 */
enum SrStatus sr_roundtrip_commdelay(const struct SrUmps *inst,
                                     const char *id,
                                     size_t max_jobs,
                                     char **out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* SCHED_REDUCE_H */
