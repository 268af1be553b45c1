// Copyright 2026 The shapmarl Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/* C interface to the shapmarl library. All functions return a status code;
 * on failure a thread-local message is available from smarl_last_error().
 * Buffer-returning functions follow the size-query convention: pass a NULL
 * buffer (or a too-small capacity) to learn the required size, including
 * the terminating NUL, through `needed`. */
#ifndef SHAPMARL_SHAPMARL_H_
#define SHAPMARL_SHAPMARL_H_

#include <stddef.h>
#include <stdint.h>

#if defined(SHAPMARL_BUILDING_LIBRARY)
#define SMARL_API __attribute__((visibility("default")))
#else
#define SMARL_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum smarl_status {
  SMARL_OK = 0,
  SMARL_ERR_DOMAIN = 1,
  SMARL_ERR_CAPACITY = 2,
  SMARL_ERR_CONTRACT = 3,
  SMARL_ERR_PARSE = 4,
  SMARL_ERR_CONFIG = 5,
  SMARL_ERR_IO = 6,
  SMARL_ERR_INVALID_ARGUMENT = 7,
  SMARL_ERR_CALLBACK = 8,
  SMARL_ERR_INTERNAL = 9
} smarl_status;

typedef enum smarl_command {
  SMARL_COMMAND_RUN = 0,
  SMARL_COMMAND_COMPARE_EXACT = 1,
  SMARL_COMMAND_SWEEP = 2
} smarl_command;

typedef struct smarl_config smarl_config;
typedef struct smarl_bundle smarl_bundle;

SMARL_API const char* smarl_version(void);
SMARL_API const char* smarl_status_name(smarl_status status);
/* Message of the last failed call on this thread; "" if none. */
SMARL_API const char* smarl_last_error(void);
/* Orchestration stage of the last failed experiment call; "" if none. */
SMARL_API const char* smarl_last_error_stage(void);

/* ---- experiment configuration ---- */

SMARL_API smarl_status smarl_config_load(const char* path, smarl_config** out);
SMARL_API smarl_status smarl_config_parse(const char* json_text, const char* base_dir,
                                          smarl_config** out);
SMARL_API void smarl_config_free(smarl_config* config);

SMARL_API smarl_status smarl_config_set_seed(smarl_config* config, uint64_t seed);
SMARL_API smarl_status smarl_config_set_workers(smarl_config* config, int workers);
SMARL_API smarl_status smarl_config_set_draws(smarl_config* config, uint64_t draws);
SMARL_API smarl_status smarl_config_set_output(smarl_config* config, const char* dir);
SMARL_API smarl_status smarl_config_output(const smarl_config* config, char* buffer,
                                           size_t capacity, size_t* needed);
/* Overrides sweep settings. A NULL `param` keeps the configured parameter,
 * `agent` < 0 keeps the configured agent and `count` == 0 keeps the values. */
SMARL_API smarl_status smarl_config_set_sweep(smarl_config* config, const char* param,
                                              int agent, const double* values,
                                              size_t count);
SMARL_API smarl_status smarl_config_agent_count(const smarl_config* config, int* count);

/* ---- experiments and reports ---- */

SMARL_API smarl_status smarl_experiment_run(const smarl_config* config,
                                            smarl_command command, smarl_bundle** out);
SMARL_API smarl_status smarl_bundle_emit(const smarl_bundle* bundle, const char* dir);
SMARL_API smarl_status smarl_bundle_results_json(const smarl_bundle* bundle, char* buffer,
                                                 size_t capacity, size_t* needed);
SMARL_API smarl_status smarl_bundle_summary(const smarl_bundle* bundle, char* buffer,
                                            size_t capacity, size_t* needed);
SMARL_API void smarl_bundle_free(smarl_bundle* bundle);
/* Writes a status file marking `dir` as holding an incomplete run. */
SMARL_API smarl_status smarl_mark_incomplete(const char* dir, const char* stage,
                                             const char* message);

/* ---- Shapley values of caller-defined games ---- */

/* Gain callback: writes v(S) for the coalition bitmask into *out and returns
 * 0, or returns non-zero to abort the computation. `seed` identifies the
 * randomness of this evaluation; deterministic games may ignore it. With
 * workers > 1 the callback is invoked concurrently. */
typedef int (*smarl_gain_fn)(uint64_t coalition, uint64_t seed, void* user, double* out);

/* Exact Shapley values over all 2^players coalitions, each averaged over
 * `samples_per_coalition` evaluations. `stderrs` may be NULL. */
SMARL_API smarl_status smarl_shapley_exact(int players, smarl_gain_fn gain, void* user,
                                           int samples_per_coalition, uint64_t seed,
                                           int workers, double* values, double* stderrs);
/* Monte Carlo permutation estimate with `draws` samples per player; performs
 * exactly 2 * draws * players evaluations. */
SMARL_API smarl_status smarl_shapley_mc(int players, smarl_gain_fn gain, void* user,
                                        uint64_t draws, uint64_t seed, int workers,
                                        double* values, double* stderrs,
                                        uint64_t* evaluations);
/* Shapley weight 1 / (n * C(n-1, s)) as an exact fraction. */
SMARL_API smarl_status smarl_shapley_weight(int players, int coalition_size,
                                            uint64_t* numerator, uint64_t* denominator);

#ifdef __cplusplus
}
#endif

#endif /* SHAPMARL_SHAPMARL_H_ */
