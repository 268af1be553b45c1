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

#ifndef SHAPMARL_EXPERIMENT_HPP_
#define SHAPMARL_EXPERIMENT_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shapmarl/attribution.hpp"
#include "shapmarl/errors.hpp"
#include "shapmarl/metrics.hpp"

namespace shapmarl {

struct SweepSpec {
  int agent = 0;              // roster index
  std::string param = "speed";  // "speed" or "skill"
  std::vector<double> values;
};

struct ExperimentConfig {
  std::string name = "experiment";
  EnvironmentConfig environment = PredatorPreyConfig{};
  std::string map_path;  // resolved path of a custom harvest map, if any
  std::vector<AgentSpec> agents;
  std::vector<ExclusionMode> exclusion_modes{ExclusionMode::kNoOp};
  std::uint64_t draws = 1000;  // M
  int samples_per_coalition = 200;
  int grand_episodes = 100;
  int performance_episodes = 2000;
  int exact_capacity = 10;
  std::uint64_t seed = 0;
  int workers = 1;
  std::string output_dir = "out";
  std::optional<SweepSpec> sweep;

  bool is_harvest() const {
    return std::holds_alternative<HarvestConfig>(environment);
  }
  std::string_view environment_name() const {
    return is_harvest() ? "harvest" : "predator_prey";
  }
};

// Parses a JSON experiment description. Relative map paths resolve against
// `base_dir`. Unknown keys are rejected by name; syntax errors carry a
// line/column.
ExperimentConfig ParseConfig(std::string_view json_text,
                             const std::string& base_dir = ".");
ExperimentConfig LoadConfig(const std::string& path);

// Throws ConfigError unless `sweep` names a valid parameter and swept agent.
void ValidateSweep(const ExperimentConfig& config, const SweepSpec& sweep);

enum class Command { kRun, kCompareExact, kSweep };
std::string_view ToString(Command command);

// Failure of one orchestration stage; keeps the kind of the underlying error.
class StageError : public Error {
 public:
  StageError(std::string stage, ErrorKind kind, const std::string& what)
      : Error(kind, stage + ": " + what), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

struct ModeResult {
  ExclusionMode mode = ExclusionMode::kNoOp;
  AttributionReport monte_carlo;
  std::optional<AttributionReport> exact;
};

struct SweepPoint {
  double value = 0.0;
  ShapleyEstimate estimate;  // all players at this sweep value
  double grand_mean = 0.0;
  double efficiency = 0.0;
  MetricResult equality;
  MetricResult sustainability;
  std::uint64_t rollouts = 0;
};

struct ReportBundle {
  Command command = Command::kRun;
  ExperimentConfig config;
  std::vector<ModeResult> modes;

  // Plain full-roster reference episodes, per roster agent.
  std::vector<double> mean_event_counts;
  // Shapley ranking vs scoring-event ranking over the attribution scope.
  std::vector<int> shapley_ranking;
  std::vector<int> event_ranking;
  bool ranking_matches = false;

  // Social metrics over the grand-coalition episodes of the first mode.
  double efficiency = 0.0;
  MetricResult equality;
  MetricResult sustainability;
  PerAgentMetrics per_agent;

  std::optional<SweepSpec> sweep;
  int sweep_player = -1;  // player index of the swept agent
  std::vector<SweepPoint> sweep_points;
  double sweep_spearman = 0.0;
};

// Spearman rank correlation with average ranks for ties.
double SpearmanCorrelation(const std::vector<double>& x, const std::vector<double>& y);

// Indices sorted by decreasing value; ties keep index order.
std::vector<int> DescendingRanking(const std::vector<double>& values);

ReportBundle RunExperiment(const ExperimentConfig& config, Command command);

// Writes results.json, the per-agent CSV tables, plot series under
// series/, summary.txt, timing.json and status.json into `directory`.
void EmitReport(const ReportBundle& bundle, const std::string& directory);

// Canonical machine-readable report; every other file is derived from it.
std::string ResultsJson(const ReportBundle& bundle);
std::string SummaryText(const ReportBundle& bundle);

// Marks `directory` as holding an incomplete run.
void MarkIncomplete(const std::string& directory, const std::string& stage,
                    const std::string& message);

}  // namespace shapmarl

#endif  // SHAPMARL_EXPERIMENT_HPP_
