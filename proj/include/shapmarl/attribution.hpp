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

#ifndef SHAPMARL_ATTRIBUTION_HPP_
#define SHAPMARL_ATTRIBUTION_HPP_

#include <atomic>
#include <cstdint>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "shapmarl/game.hpp"
#include "shapmarl/harvest.hpp"
#include "shapmarl/metrics.hpp"
#include "shapmarl/policies.hpp"
#include "shapmarl/predator_prey.hpp"

namespace shapmarl {

// Per-agent speeds and roles of a predator-prey config are taken from the
// roster, so only arena parameters matter in PredatorPreyConfig here.
using EnvironmentConfig = std::variant<PredatorPreyConfig, HarvestConfig>;

struct AgentSpec {
  std::string name;
  PolicySpec policy;
  Role role = Role::kPredator;
  // Always present, never attributed; its reward is excluded from the payout.
  bool fixed = false;
};

std::unique_ptr<Environment> MakeEnvironment(const EnvironmentConfig& env,
                                             const std::vector<AgentSpec>& roster);

int EpisodeLength(const EnvironmentConfig& env);

// Result of one simulated episode.
struct EpisodeResult {
  double payout = 0.0;            // summed reward of the attribution scope
  std::vector<int> event_counts;  // per roster agent
  EpisodeTrace trace;             // scope agents only, when requested
};

// The rollout-based gain function: players are the non-fixed roster agents
// in roster order; v(S) is the scope reward of one seeded episode in which
// agents outside S act through the exclusion mode.
class RolloutGame final : public CoalitionalGame {
 public:
  RolloutGame(EnvironmentConfig env, std::vector<AgentSpec> roster,
              ExclusionMode mode);

  int players() const override { return static_cast<int>(scope_.size()); }
  double gain(const Coalition& coalition, RandomStream& rng) const override;

  EpisodeResult Episode(const Coalition& coalition, RandomStream& rng,
                        bool record_trace) const;

  const EnvironmentConfig& environment() const noexcept { return env_; }
  const std::vector<AgentSpec>& roster() const noexcept { return roster_; }
  ExclusionMode mode() const noexcept { return mode_; }
  // Roster index of each player.
  const std::vector<int>& scope() const noexcept { return scope_; }
  const std::vector<int>& fixed_players() const noexcept { return fixed_; }

  std::uint64_t rollouts() const noexcept { return rollouts_.load(); }
  void reset_rollouts() const noexcept { rollouts_.store(0); }

 private:
  EnvironmentConfig env_;
  std::vector<AgentSpec> roster_;
  ExclusionMode mode_;
  std::vector<int> scope_;
  std::vector<int> fixed_;
  mutable std::atomic<std::uint64_t> rollouts_{0};
};

// One episode of `coalition` seeded by `seed`; returns the scope payout.
double Rollout(const RolloutGame& game, const Coalition& coalition,
               std::uint64_t seed);

struct AttributionOptions {
  int workers = 1;
  // Plain full-roster episodes used for the grand-coalition mean and traces.
  int grand_episodes = 100;
  // Retained marginal contributions; beyond this they go to `spill_path`.
  std::uint64_t retention_cap = 1000000;
  std::string spill_path;
  int exact_capacity = 10;
};

struct AttributionReport {
  ShapleyEstimate estimate;
  std::vector<std::vector<double>> marginals;  // [player][draw], MC only
  std::string marginals_spill_path;            // set when spilled
  double grand_mean = 0.0;
  double grand_stderr = 0.0;
  int grand_episodes = 0;
  std::vector<EpisodeTrace> grand_traces;
  std::vector<double> mean_event_counts;  // per roster agent, grand episodes
  ExclusionMode mode = ExclusionMode::kNoOp;
  std::uint64_t rollouts = 0;  // attribution rollouts (excludes grand episodes)
  double wall_seconds = 0.0;
};

// Seed of the k-th grand-coalition episode for a master seed.
std::uint64_t GrandEpisodeSeed(std::uint64_t seed, int k);

AttributionReport RunMonteCarloAttribution(const RolloutGame& game,
                                           std::uint64_t draws,
                                           std::uint64_t seed,
                                           const AttributionOptions& options = {});

// Throws CapacityError beyond options.exact_capacity players.
AttributionReport RunExactAttribution(const RolloutGame& game,
                                      int samples_per_coalition,
                                      std::uint64_t seed,
                                      const AttributionOptions& options = {});

// Mean scoring-event count per roster agent over `episodes` plain
// full-roster episodes, seeded independently of attribution streams.
std::vector<double> MeanEventCounts(const RolloutGame& game, int episodes,
                                    std::uint64_t seed, int workers);

}  // namespace shapmarl

#endif  // SHAPMARL_ATTRIBUTION_HPP_
