#ifndef AGWWO_H
#define AGWWO_H

#include <stddef.h>
#include <stdint.h>

typedef enum AgwwoStatus {
  AGWWO_STATUS_OK = 0,
  AGWWO_STATUS_NULL_POINTER = 1,
  AGWWO_STATUS_INVALID_CONFIG = 2,
  AGWWO_STATUS_INVALID_ARGUMENT = 3,
  AGWWO_STATUS_IO = 4,
  AGWWO_STATUS_PANIC = 5,
} AgwwoStatus;

typedef enum AgwwoAlgorithm {
  AGWWO_ALGORITHM_AGWWO = 0,
  AGWWO_ALGORITHM_WWO = 1,
  AGWWO_ALGORITHM_AGA = 2,
  AGWWO_ALGORITHM_CMT = 3,
} AgwwoAlgorithm;

/**
 * Opaque finished-run handle.
 */
typedef struct AgwwoRun AgwwoRun;

/**
 * Opaque scenario handle.
 */
typedef struct AgwwoScenario AgwwoScenario;

/**
 * Overrides for a run; zero fields keep the defaults.
 */
typedef struct AgwwoRunOptions {
  uint32_t population;
  uint32_t iterations;
  uint64_t seed;
} AgwwoRunOptions;

typedef struct AgwwoTracePoint {
  uint64_t iteration;
  double best_fitness;
  double avg_fitness;
  double best_energy;
  double diversity;
} AgwwoTracePoint;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Creates a scenario with default parameters.
 *
 * # Safety
 * `out` must be a valid pointer to writable storage for one handle.
 */
enum AgwwoStatus agwwo_scenario_new_default(uint64_t seed, struct AgwwoScenario **out);

/**
 * Creates a scenario from config text in the CLI's TOML format. The
 * `[scenario]` and `[optimizer]` tables are used; `[experiment]` is
 * validated but otherwise ignored.
 *
 * # Safety
 * `config_toml` must be a NUL-terminated string and `out` a valid pointer
 * to writable storage for one handle.
 */
enum AgwwoStatus agwwo_scenario_from_toml(const char *config_toml,
                                          uint64_t seed,
                                          struct AgwwoScenario **out);

/**
 * # Safety
 * `scenario` must be null or a handle from this library not yet freed.
 */
void agwwo_scenario_free(struct AgwwoScenario *scenario);

/**
 * Number of mobile devices, or 0 for a null handle.
 *
 * # Safety
 * `scenario` must be null or a live handle.
 */
size_t agwwo_scenario_num_md(const struct AgwwoScenario *scenario);

/**
 * Runs `algorithm` on `scenario`. `options` may be null.
 *
 * # Safety
 * `scenario` must be a live handle, `options` null or valid, and `out` a
 * valid pointer to writable storage for one handle.
 */
enum AgwwoStatus agwwo_run(const struct AgwwoScenario *scenario,
                           enum AgwwoAlgorithm algorithm,
                           const struct AgwwoRunOptions *options,
                           struct AgwwoRun **out);

/**
 * # Safety
 * `run` must be null or a handle from [`agwwo_run`] not yet freed.
 */
void agwwo_run_free(struct AgwwoRun *run);

/**
 * Network-wide energy of the best solution in joules; NaN for null.
 *
 * # Safety
 * `run` must be null or a live handle.
 */
double agwwo_run_network_energy(const struct AgwwoRun *run);

/**
 * Device-side energy of the best solution in joules; NaN for null.
 *
 * # Safety
 * `run` must be null or a live handle.
 */
double agwwo_run_local_energy(const struct AgwwoRun *run);

/**
 * # Safety
 * `run` must be null or a live handle.
 */
double agwwo_run_best_fitness(const struct AgwwoRun *run);

/**
 * Fractions of devices meeting their deadline and breach budget.
 *
 * # Safety
 * `run` must be a live handle; `time_ratio` and `cost_ratio` valid pointers.
 */
enum AgwwoStatus agwwo_run_support_ratios(const struct AgwwoRun *run,
                                          double *time_ratio,
                                          double *cost_ratio);

/**
 * Number of trace points (iterations plus the initial population).
 *
 * # Safety
 * `run` must be null or a live handle.
 */
size_t agwwo_run_trace_len(const struct AgwwoRun *run);

/**
 * # Safety
 * `run` must be a live handle and `out` a valid pointer.
 */
enum AgwwoStatus agwwo_run_trace_point(const struct AgwwoRun *run,
                                       size_t index,
                                       struct AgwwoTracePoint *out);

/**
 * Copies the calling thread's last error message into `buf` (truncated,
 * always NUL-terminated when `len > 0`). Returns the full message length
 * excluding the terminator.
 *
 * # Safety
 * `buf` must be null or point to at least `len` writable bytes.
 */
size_t agwwo_last_error(char *buf, size_t len);

/**
 * Library version as a static NUL-terminated string.
 */
const char *agwwo_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* AGWWO_H */
