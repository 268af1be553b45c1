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

#include "shapmarl/attribution.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <string>

#include "shapmarl/errors.hpp"
#include "shapmarl/parallel.hpp"

namespace shapmarl {

namespace {

constexpr std::uint64_t kGrandStreamTag = 0x6772616e;        // "gran"
constexpr std::uint64_t kPerformanceStreamTag = 0x70657266;  // "perf"

double Seconds(std::chrono::steady_clock::time_point since) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since)
      .count();
}

void SpillMarginals(const std::vector<std::vector<double>>& marginals,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot write marginal contributions");
  out << "player,draw,marginal\n" << std::setprecision(17);
  for (std::size_t i = 0; i < marginals.size(); ++i) {
    for (std::size_t m = 0; m < marginals[i].size(); ++m) {
      out << i << ',' << m << ',' << marginals[i][m] << '\n';
    }
  }
  if (!out) throw IoError(path, "write failed");
}

void FillGrandCoalition(const RolloutGame& game, std::uint64_t seed,
                        const AttributionOptions& options,
                        AttributionReport& report) {
  const int k_episodes = options.grand_episodes;
  if (k_episodes < 1) throw DomainError("grand_episodes must be >= 1");
  std::vector<EpisodeResult> episodes(k_episodes);
  const Coalition grand = Coalition::Grand(game.players());
  ParallelFor(episodes.size(), options.workers, [&](std::size_t k) {
    RandomStream rng(GrandEpisodeSeed(seed, static_cast<int>(k)));
    episodes[k] = game.Episode(grand, rng, /*record_trace=*/true);
  });

  const std::size_t roster = game.roster().size();
  report.grand_episodes = k_episodes;
  report.mean_event_counts.assign(roster, 0.0);
  double sum = 0.0;
  for (const EpisodeResult& e : episodes) {
    sum += e.payout;
    for (std::size_t a = 0; a < roster; ++a) {
      report.mean_event_counts[a] += e.event_counts[a];
    }
  }
  report.grand_mean = sum / k_episodes;
  double ss = 0.0;
  for (const EpisodeResult& e : episodes) {
    ss += (e.payout - report.grand_mean) * (e.payout - report.grand_mean);
  }
  report.grand_stderr =
      k_episodes > 1 ? std::sqrt(ss / (k_episodes - 1) / k_episodes) : 0.0;
  for (double& c : report.mean_event_counts) c /= k_episodes;
  report.grand_traces.clear();
  report.grand_traces.reserve(episodes.size());
  for (EpisodeResult& e : episodes) report.grand_traces.push_back(std::move(e.trace));
}

}  // namespace

std::unique_ptr<Environment> MakeEnvironment(const EnvironmentConfig& env,
                                             const std::vector<AgentSpec>& roster) {
  if (const auto* pp = std::get_if<PredatorPreyConfig>(&env)) {
    PredatorPreyConfig c = *pp;
    c.roles.clear();
    c.speeds.clear();
    for (const AgentSpec& a : roster) {
      c.roles.push_back(a.role);
      c.speeds.push_back(a.policy.speed);
    }
    return std::make_unique<PredatorPreyEnv>(std::move(c));
  }
  HarvestConfig c = std::get<HarvestConfig>(env);
  c.agents = static_cast<int>(roster.size());
  return std::make_unique<HarvestEnv>(std::move(c));
}

int EpisodeLength(const EnvironmentConfig& env) {
  return std::visit([](const auto& c) { return c.horizon; }, env);
}

RolloutGame::RolloutGame(EnvironmentConfig env, std::vector<AgentSpec> roster,
                         ExclusionMode mode)
    : env_(std::move(env)), roster_(std::move(roster)), mode_(mode) {
  if (roster_.empty()) throw ConfigError("agents", "roster must be non-empty");
  const bool harvest = std::holds_alternative<HarvestConfig>(env_);
  for (std::size_t a = 0; a < roster_.size(); ++a) {
    const AgentSpec& spec = roster_[a];
    const std::string field = "agents[" + std::to_string(a) + "]";
    try {
      spec.policy.Validate();
    } catch (const ConfigError& e) {
      throw ConfigError(field + "." + e.field(), "invalid policy");
    }
    if (harvest != (spec.role == Role::kHarvester)) {
      throw ConfigError(field + ".role", "role does not match the environment");
    }
    (spec.fixed ? fixed_ : scope_).push_back(static_cast<int>(a));
  }
  if (scope_.size() > static_cast<std::size_t>(kMaxCoalitionPlayers)) {
    throw CapacityError("attribution scope larger than " +
                        std::to_string(kMaxCoalitionPlayers) + " agents");
  }
  // Building one instance validates the environment configuration eagerly.
  MakeEnvironment(env_, roster_);
}

EpisodeResult RolloutGame::Episode(const Coalition& coalition, RandomStream& rng,
                                   bool record_trace) const {
  const int players = this->players();
  if (coalition.capacity() != players) {
    throw ContractError("coalition capacity " + std::to_string(coalition.capacity()) +
                        " does not match the " + std::to_string(players) +
                        "-player attribution scope");
  }
  const std::size_t n = roster_.size();
  std::vector<bool> active(n, true);
  std::vector<int> scope_slot(n, -1);
  for (int p = 0; p < players; ++p) {
    active[scope_[p]] = coalition.contains(p);
    scope_slot[scope_[p]] = p;
  }
  std::vector<std::vector<PolicySpec>> present_by_role(3);
  for (std::size_t a = 0; a < n; ++a) {
    if (active[a]) {
      present_by_role[static_cast<int>(roster_[a].role)].push_back(roster_[a].policy);
    }
  }

  std::unique_ptr<Environment> env = MakeEnvironment(env_, roster_);
  env->Reset(rng);
  EpisodeResult result;
  if (record_trace) result.trace = EpisodeTrace(players, env->horizon());

  std::vector<Action> actions(n, Action::kNoop);
  std::vector<double> rewards;
  for (bool done = false; !done;) {
    for (std::size_t a = 0; a < n; ++a) {
      const Observation& obs = env->observation(static_cast<int>(a));
      actions[a] = active[a]
                       ? PolicyAct(roster_[a].policy, obs, rng)
                       : SubstituteAction(
                             mode_, present_by_role[static_cast<int>(roster_[a].role)],
                             obs, env->action_count(), rng);
    }
    const int t = env->timestep();
    done = env->Step(actions, rng, rewards);
    for (int p = 0; p < players; ++p) {
      const double r = rewards[scope_[p]];
      result.payout += r;
      if (record_trace) result.trace.set_reward(p, t, r);
    }
  }
  result.event_counts = env->event_counts();
  return result;
}

double RolloutGame::gain(const Coalition& coalition, RandomStream& rng) const {
  rollouts_.fetch_add(1, std::memory_order_relaxed);
  return Episode(coalition, rng, /*record_trace=*/false).payout;
}

double Rollout(const RolloutGame& game, const Coalition& coalition,
               std::uint64_t seed) {
  RandomStream rng(seed);
  return game.gain(coalition, rng);
}

std::uint64_t GrandEpisodeSeed(std::uint64_t seed, int k) {
  return DeriveSeed(seed, {kGrandStreamTag, static_cast<std::uint64_t>(k)});
}

AttributionReport RunMonteCarloAttribution(const RolloutGame& game,
                                           std::uint64_t draws, std::uint64_t seed,
                                           const AttributionOptions& options) {
  if (draws < 1) throw DomainError("Monte Carlo draw count M must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t before = game.rollouts();

  MonteCarloResult mc = MonteCarloShapleyWithMarginals(
      game, MonteCarloOptions{draws, seed, options.workers});

  AttributionReport report;
  report.mode = game.mode();
  report.estimate = std::move(mc.estimate);
  report.rollouts = game.rollouts() - before;
  const std::uint64_t entries = draws * static_cast<std::uint64_t>(game.players());
  if (entries > options.retention_cap) {
    if (options.spill_path.empty()) {
      throw CapacityError("marginal contributions exceed the retention cap of " +
                          std::to_string(options.retention_cap) +
                          " and no spill path is configured");
    }
    SpillMarginals(mc.marginals, options.spill_path);
    report.marginals_spill_path = options.spill_path;
  } else {
    report.marginals = std::move(mc.marginals);
  }
  report.wall_seconds = Seconds(start);
  FillGrandCoalition(game, seed, options, report);
  return report;
}

AttributionReport RunExactAttribution(const RolloutGame& game,
                                      int samples_per_coalition, std::uint64_t seed,
                                      const AttributionOptions& options) {
  if (game.players() > options.exact_capacity) {
    throw CapacityError("exact attribution supports at most " +
                        std::to_string(options.exact_capacity) + " agents, scope has " +
                        std::to_string(game.players()) +
                        "; use the Monte Carlo method instead");
  }
  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t before = game.rollouts();
  ExactOptions exact;
  exact.samples_per_coalition = samples_per_coalition;
  exact.seed = seed;
  exact.workers = options.workers;
  exact.max_evaluations = ~std::uint64_t{0};

  AttributionReport report;
  report.mode = game.mode();
  report.estimate = ExactShapley(game, exact);
  report.rollouts = game.rollouts() - before;
  report.wall_seconds = Seconds(start);
  FillGrandCoalition(game, seed, options, report);
  return report;
}

std::vector<double> MeanEventCounts(const RolloutGame& game, int episodes,
                                    std::uint64_t seed, int workers) {
  if (episodes < 1) throw DomainError("episode count must be >= 1");
  std::vector<std::vector<int>> counts(episodes);
  const Coalition grand = Coalition::Grand(game.players());
  ParallelFor(counts.size(), workers, [&](std::size_t k) {
    RandomStream rng(DeriveSeed(seed, {kPerformanceStreamTag, k}));
    counts[k] = game.Episode(grand, rng, false).event_counts;
  });
  std::vector<double> mean(game.roster().size(), 0.0);
  for (const auto& c : counts) {
    for (std::size_t a = 0; a < mean.size(); ++a) mean[a] += c[a];
  }
  for (double& m : mean) m /= episodes;
  return mean;
}

}  // namespace shapmarl
