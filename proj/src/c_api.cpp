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

#include "shapmarl/shapmarl.h"

#include <cstring>
#include <exception>
#include <memory>
#include <new>
#include <string>

#include "shapmarl/experiment.hpp"
#include "shapmarl/game.hpp"

struct smarl_config {
  shapmarl::ExperimentConfig config;
};

struct smarl_bundle {
  shapmarl::ReportBundle bundle;
};

namespace {

using shapmarl::ErrorKind;

thread_local std::string g_last_error;
thread_local std::string g_last_stage;

class CallbackError : public std::runtime_error {
 public:
  explicit CallbackError(int code)
      : std::runtime_error("gain callback failed with code " + std::to_string(code)) {}
};

smarl_status Fail(smarl_status status, const std::string& message,
                  const std::string& stage = "") {
  g_last_error = message;
  g_last_stage = stage;
  return status;
}

smarl_status FromKind(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kDomain:
      return SMARL_ERR_DOMAIN;
    case ErrorKind::kCapacity:
      return SMARL_ERR_CAPACITY;
    case ErrorKind::kContract:
      return SMARL_ERR_CONTRACT;
    case ErrorKind::kParse:
      return SMARL_ERR_PARSE;
    case ErrorKind::kConfig:
      return SMARL_ERR_CONFIG;
    case ErrorKind::kIo:
      return SMARL_ERR_IO;
  }
  return SMARL_ERR_INTERNAL;
}

template <class Fn>
smarl_status Guard(Fn&& fn) {
  try {
    fn();
    g_last_error.clear();
    g_last_stage.clear();
    return SMARL_OK;
  } catch (const shapmarl::StageError& e) {
    return Fail(FromKind(e.kind()), e.what(), e.stage());
  } catch (const shapmarl::Error& e) {
    return Fail(FromKind(e.kind()), e.what());
  } catch (const CallbackError& e) {
    return Fail(SMARL_ERR_CALLBACK, e.what());
  } catch (const std::bad_alloc&) {
    return Fail(SMARL_ERR_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return Fail(SMARL_ERR_INTERNAL, e.what());
  } catch (...) {
    return Fail(SMARL_ERR_INTERNAL, "unknown failure");
  }
}

smarl_status CopyOut(const std::string& text, char* buffer, std::size_t capacity,
                     std::size_t* needed) {
  if (needed) *needed = text.size() + 1;
  if (buffer == nullptr || capacity < text.size() + 1) {
    if (buffer == nullptr && needed) return SMARL_OK;
    return Fail(SMARL_ERR_INVALID_ARGUMENT, "buffer too small; query the needed size");
  }
  std::memcpy(buffer, text.c_str(), text.size() + 1);
  return SMARL_OK;
}

class CallbackGame final : public shapmarl::CoalitionalGame {
 public:
  CallbackGame(int players, smarl_gain_fn gain, void* user)
      : players_(players), gain_(gain), user_(user) {}
  int players() const override { return players_; }
  double gain(const shapmarl::Coalition& coalition,
              shapmarl::RandomStream& rng) const override {
    double out = 0.0;
    const int code = gain_(coalition.mask(), rng(), user_, &out);
    if (code != 0) throw CallbackError(code);
    return out;
  }

 private:
  int players_;
  smarl_gain_fn gain_;
  void* user_;
};

void CopyEstimate(const shapmarl::ShapleyEstimate& e, double* values, double* stderrs) {
  for (int i = 0; i < e.players(); ++i) {
    values[i] = e.values[i];
    if (stderrs) stderrs[i] = e.stderrs[i];
  }
}

#define SMARL_REQUIRE(cond, message) \
  if (!(cond)) return Fail(SMARL_ERR_INVALID_ARGUMENT, message)

}  // namespace

extern "C" {

const char* smarl_version(void) { return "0.1.0"; }

const char* smarl_status_name(smarl_status status) {
  switch (status) {
    case SMARL_OK:
      return "ok";
    case SMARL_ERR_DOMAIN:
      return "domain error";
    case SMARL_ERR_CAPACITY:
      return "capacity error";
    case SMARL_ERR_CONTRACT:
      return "contract violation";
    case SMARL_ERR_PARSE:
      return "parse error";
    case SMARL_ERR_CONFIG:
      return "configuration error";
    case SMARL_ERR_IO:
      return "I/O error";
    case SMARL_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case SMARL_ERR_CALLBACK:
      return "callback failure";
    case SMARL_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* smarl_last_error(void) { return g_last_error.c_str(); }
const char* smarl_last_error_stage(void) { return g_last_stage.c_str(); }

smarl_status smarl_config_load(const char* path, smarl_config** out) {
  SMARL_REQUIRE(path && out, "path and out must be non-null");
  *out = nullptr;
  return Guard([&] {
    auto c = std::make_unique<smarl_config>();
    c->config = shapmarl::LoadConfig(path);
    *out = c.release();
  });
}

smarl_status smarl_config_parse(const char* json_text, const char* base_dir,
                                smarl_config** out) {
  SMARL_REQUIRE(json_text && out, "json_text and out must be non-null");
  *out = nullptr;
  return Guard([&] {
    auto c = std::make_unique<smarl_config>();
    c->config = shapmarl::ParseConfig(json_text, base_dir ? base_dir : ".");
    *out = c.release();
  });
}

void smarl_config_free(smarl_config* config) { delete config; }

smarl_status smarl_config_set_seed(smarl_config* config, uint64_t seed) {
  SMARL_REQUIRE(config, "config must be non-null");
  config->config.seed = seed;
  return SMARL_OK;
}

smarl_status smarl_config_set_workers(smarl_config* config, int workers) {
  SMARL_REQUIRE(config, "config must be non-null");
  if (workers < 1) return Fail(SMARL_ERR_CONFIG, "workers: must be >= 1");
  config->config.workers = workers;
  return SMARL_OK;
}

smarl_status smarl_config_set_draws(smarl_config* config, uint64_t draws) {
  SMARL_REQUIRE(config, "config must be non-null");
  if (draws < 1) return Fail(SMARL_ERR_CONFIG, "M: must be >= 1");
  config->config.draws = draws;
  return SMARL_OK;
}

smarl_status smarl_config_set_output(smarl_config* config, const char* dir) {
  SMARL_REQUIRE(config && dir, "config and dir must be non-null");
  SMARL_REQUIRE(*dir, "output directory must be non-empty");
  return Guard([&] { config->config.output_dir = dir; });
}

smarl_status smarl_config_output(const smarl_config* config, char* buffer,
                                 size_t capacity, size_t* needed) {
  SMARL_REQUIRE(config, "config must be non-null");
  return CopyOut(config->config.output_dir, buffer, capacity, needed);
}

smarl_status smarl_config_set_sweep(smarl_config* config, const char* param, int agent,
                                    const double* values, size_t count) {
  SMARL_REQUIRE(config, "config must be non-null");
  SMARL_REQUIRE(count == 0 || values, "values must be non-null when count > 0");
  return Guard([&] {
    shapmarl::SweepSpec sweep = config->config.sweep.value_or(shapmarl::SweepSpec{});
    if (param) sweep.param = param;
    if (agent >= 0) sweep.agent = agent;
    if (count > 0) sweep.values.assign(values, values + count);
    shapmarl::ValidateSweep(config->config, sweep);
    config->config.sweep = sweep;
  });
}

smarl_status smarl_config_agent_count(const smarl_config* config, int* count) {
  SMARL_REQUIRE(config && count, "config and count must be non-null");
  *count = static_cast<int>(config->config.agents.size());
  return SMARL_OK;
}

smarl_status smarl_experiment_run(const smarl_config* config, smarl_command command,
                                  smarl_bundle** out) {
  SMARL_REQUIRE(config && out, "config and out must be non-null");
  *out = nullptr;
  shapmarl::Command cmd;
  switch (command) {
    case SMARL_COMMAND_RUN:
      cmd = shapmarl::Command::kRun;
      break;
    case SMARL_COMMAND_COMPARE_EXACT:
      cmd = shapmarl::Command::kCompareExact;
      break;
    case SMARL_COMMAND_SWEEP:
      cmd = shapmarl::Command::kSweep;
      break;
    default:
      return Fail(SMARL_ERR_INVALID_ARGUMENT, "unknown command");
  }
  return Guard([&] {
    auto b = std::make_unique<smarl_bundle>();
    b->bundle = shapmarl::RunExperiment(config->config, cmd);
    *out = b.release();
  });
}

smarl_status smarl_bundle_emit(const smarl_bundle* bundle, const char* dir) {
  SMARL_REQUIRE(bundle && dir, "bundle and dir must be non-null");
  return Guard([&] {
    try {
      shapmarl::EmitReport(bundle->bundle, dir);
    } catch (const shapmarl::Error& e) {
      throw shapmarl::StageError("emit", e.kind(), e.what());
    }
  });
}

smarl_status smarl_bundle_results_json(const smarl_bundle* bundle, char* buffer,
                                       size_t capacity, size_t* needed) {
  SMARL_REQUIRE(bundle, "bundle must be non-null");
  std::string text;
  const smarl_status s = Guard([&] { text = shapmarl::ResultsJson(bundle->bundle); });
  return s == SMARL_OK ? CopyOut(text, buffer, capacity, needed) : s;
}

smarl_status smarl_bundle_summary(const smarl_bundle* bundle, char* buffer,
                                  size_t capacity, size_t* needed) {
  SMARL_REQUIRE(bundle, "bundle must be non-null");
  std::string text;
  const smarl_status s = Guard([&] { text = shapmarl::SummaryText(bundle->bundle); });
  return s == SMARL_OK ? CopyOut(text, buffer, capacity, needed) : s;
}

void smarl_bundle_free(smarl_bundle* bundle) { delete bundle; }

smarl_status smarl_mark_incomplete(const char* dir, const char* stage,
                                   const char* message) {
  SMARL_REQUIRE(dir && stage && message, "arguments must be non-null");
  const std::string saved_error = g_last_error;
  const std::string saved_stage = g_last_stage;
  const smarl_status s = Guard([&] { shapmarl::MarkIncomplete(dir, stage, message); });
  if (s == SMARL_OK) {
    g_last_error = saved_error;
    g_last_stage = saved_stage;
  }
  return s;
}

smarl_status smarl_shapley_exact(int players, smarl_gain_fn gain, void* user,
                                 int samples_per_coalition, uint64_t seed, int workers,
                                 double* values, double* stderrs) {
  SMARL_REQUIRE(gain && values, "gain and values must be non-null");
  SMARL_REQUIRE(players >= 1, "players must be >= 1");
  SMARL_REQUIRE(samples_per_coalition >= 1, "samples_per_coalition must be >= 1");
  SMARL_REQUIRE(workers >= 1, "workers must be >= 1");
  return Guard([&] {
    CallbackGame game(players, gain, user);
    shapmarl::ExactOptions options;
    options.samples_per_coalition = samples_per_coalition;
    options.seed = seed;
    options.workers = workers;
    CopyEstimate(shapmarl::ExactShapley(game, options), values, stderrs);
  });
}

smarl_status smarl_shapley_mc(int players, smarl_gain_fn gain, void* user,
                              uint64_t draws, uint64_t seed, int workers, double* values,
                              double* stderrs, uint64_t* evaluations) {
  SMARL_REQUIRE(gain && values, "gain and values must be non-null");
  SMARL_REQUIRE(players >= 1, "players must be >= 1");
  SMARL_REQUIRE(workers >= 1, "workers must be >= 1");
  return Guard([&] {
    CallbackGame game(players, gain, user);
    const auto estimate =
        shapmarl::MonteCarloShapley(game, shapmarl::MonteCarloOptions{draws, seed, workers});
    CopyEstimate(estimate, values, stderrs);
    if (evaluations) *evaluations = estimate.evaluations;
  });
}

smarl_status smarl_shapley_weight(int players, int coalition_size, uint64_t* numerator,
                                  uint64_t* denominator) {
  SMARL_REQUIRE(numerator && denominator, "numerator and denominator must be non-null");
  return Guard([&] {
    const shapmarl::Rational w = shapmarl::ShapleyWeight(players, coalition_size);
    *numerator = w.numerator;
    *denominator = w.denominator;
  });
}

}  // extern "C"
