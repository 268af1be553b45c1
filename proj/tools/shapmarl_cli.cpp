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

// Command-line front end. Talks to the library only through the C API.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shapmarl/shapmarl.h"

namespace {

struct Options {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::uint64_t> draws;
  std::string out;
  std::string param;
  std::optional<int> agent;
  std::vector<double> values;
  bool quiet = false;
};

void AddCommon(CLI::App* sub, Options& o) {
  sub->add_option("config", o.config_path, "Experiment config file (JSON)")
      ->required()
      ->check(CLI::ExistingFile);
  sub->add_option("--seed", o.seed, "Master seed (overrides the config)");
  sub->add_option("--workers", o.workers, "Worker threads (overrides the config)")
      ->check(CLI::PositiveNumber);
  sub->add_option("-M,--draws", o.draws, "Monte Carlo draws per agent (overrides the config)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--out", o.out, "Output directory (overrides the config)");
  sub->add_flag("-q,--quiet", o.quiet, "Do not print the summary");
}

std::string OutputDir(const smarl_config* config) {
  std::size_t needed = 0;
  if (smarl_config_output(config, nullptr, 0, &needed) != SMARL_OK) return "out";
  std::string dir(needed, '\0');
  smarl_config_output(config, dir.data(), dir.size(), &needed);
  dir.resize(needed - 1);
  return dir;
}

int Report(smarl_status status, const std::string& out_dir) {
  std::string stage = smarl_last_error_stage();
  const std::string message = smarl_last_error();
  std::cerr << "error";
  if (!stage.empty()) std::cerr << " [" << stage << "]";
  std::cerr << ": " << message << " (" << smarl_status_name(status) << ")\n";
  if (!out_dir.empty()) {
    smarl_mark_incomplete(out_dir.c_str(), stage.empty() ? "setup" : stage.c_str(),
                          message.c_str());
  }
  return static_cast<int>(status);
}

int Execute(smarl_command command, const Options& o) {
  smarl_config* config = nullptr;
  smarl_status s = smarl_config_load(o.config_path.c_str(), &config);
  if (s != SMARL_OK) return Report(s, o.out);

  std::string out_dir;
  auto finish = [&](smarl_status status) {
    smarl_config_free(config);
    return status == SMARL_OK ? 0 : Report(status, out_dir);
  };
  if (o.seed) s = smarl_config_set_seed(config, *o.seed);
  if (s == SMARL_OK && o.workers) s = smarl_config_set_workers(config, *o.workers);
  if (s == SMARL_OK && o.draws) s = smarl_config_set_draws(config, *o.draws);
  if (s == SMARL_OK && !o.out.empty()) s = smarl_config_set_output(config, o.out.c_str());
  out_dir = s == SMARL_OK ? OutputDir(config) : o.out;
  if (s == SMARL_OK && command == SMARL_COMMAND_SWEEP) {
    s = smarl_config_set_sweep(config, o.param.empty() ? nullptr : o.param.c_str(),
                               o.agent.value_or(-1), o.values.data(), o.values.size());
  }
  if (s != SMARL_OK) return finish(s);

  smarl_bundle* bundle = nullptr;
  s = smarl_experiment_run(config, command, &bundle);
  if (s != SMARL_OK) return finish(s);
  s = smarl_bundle_emit(bundle, out_dir.c_str());
  if (s == SMARL_OK && !o.quiet) {
    std::size_t needed = 0;
    s = smarl_bundle_summary(bundle, nullptr, 0, &needed);
    if (s == SMARL_OK) {
      std::string text(needed, '\0');
      s = smarl_bundle_summary(bundle, text.data(), text.size(), &needed);
      text.resize(needed - 1);
      std::cout << text << "\nReport written to " << out_dir << "\n";
    }
  }
  smarl_bundle_free(bundle);
  return finish(s);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Shapley-value credit assignment for multi-agent episodes"};
  app.set_version_flag("--version", std::string(smarl_version()));
  app.require_subcommand(1);

  Options o;
  auto* run = app.add_subcommand("run", "Monte Carlo attribution, metrics and event counts");
  AddCommon(run, o);
  auto* exact = app.add_subcommand("compare-exact", "Monte Carlo against exact attribution");
  AddCommon(exact, o);
  auto* sweep = app.add_subcommand("sweep-skill", "Sweep one agent's speed or skill");
  AddCommon(sweep, o);
  sweep->add_option("--param", o.param, "Parameter to sweep")
      ->check(CLI::IsMember({"speed", "skill"}));
  sweep->add_option("--agent", o.agent, "Roster index of the swept agent")
      ->check(CLI::NonNegativeNumber);
  sweep->add_option("--values", o.values, "Parameter values")->expected(1, -1);

  CLI11_PARSE(app, argc, argv);

  if (*run) return Execute(SMARL_COMMAND_RUN, o);
  if (*exact) return Execute(SMARL_COMMAND_COMPARE_EXACT, o);
  return Execute(SMARL_COMMAND_SWEEP, o);
}
