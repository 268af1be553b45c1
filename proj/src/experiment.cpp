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

#include "shapmarl/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

namespace shapmarl {

namespace {

using nlohmann::json;

std::string Join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string Index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void CheckKeys(const json& obj, const std::string& path,
               std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) throw ConfigError(path.empty() ? "config" : path, "expected an object");
  for (const auto& item : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), item.key()) == allowed.end()) {
      throw ConfigError(Join(path, item.key()), "unknown key");
    }
  }
}

std::int64_t GetInt(const json& obj, const std::string& path, const std::string& key,
                    std::int64_t fallback, std::int64_t minimum) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  std::int64_t out = 0;
  if (v.is_number_integer()) {
    out = v.get<std::int64_t>();
  } else if (v.is_number_float() && std::floor(v.get<double>()) == v.get<double>() &&
             std::abs(v.get<double>()) < 9.0e15) {
    out = static_cast<std::int64_t>(v.get<double>());
  } else {
    throw ConfigError(Join(path, key), "expected an integer");
  }
  if (out < minimum) {
    throw ConfigError(Join(path, key), "must be >= " + std::to_string(minimum));
  }
  return out;
}

std::uint64_t GetSeed(const json& obj, const std::string& key, std::uint64_t fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
    return static_cast<std::uint64_t>(v.get<std::int64_t>());
  }
  throw ConfigError(key, "expected a non-negative integer");
}

double GetDouble(const json& obj, const std::string& path, const std::string& key,
                 double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(Join(path, key), "expected a number");
  return v.get<double>();
}

std::string GetString(const json& obj, const std::string& path, const std::string& key,
                      const std::string& fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_string()) throw ConfigError(Join(path, key), "expected a string");
  return v.get<std::string>();
}

bool GetBool(const json& obj, const std::string& path, const std::string& key,
             bool fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_boolean()) throw ConfigError(Join(path, key), "expected true or false");
  return v.get<bool>();
}

std::optional<Role> ParseRole(std::string_view name) {
  for (Role r : {Role::kPredator, Role::kPrey, Role::kHarvester}) {
    if (ToString(r) == name) return r;
  }
  return std::nullopt;
}

std::pair<int, int> LineColumn(std::string_view text, std::size_t byte) {
  int line = 1;
  int column = 1;
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

PredatorPreyConfig ParsePredatorPrey(const json& env, int& horizon) {
  const std::string path = "environment";
  CheckKeys(env, path,
            {"type", "episode_length", "step_size", "catch_radius", "catch_reward",
             "penalty", "spawn_separation", "respawn_prey", "obstacles"});
  PredatorPreyConfig c;
  c.obstacles = DefaultObstacles();
  horizon = static_cast<int>(GetInt(env, path, "episode_length", c.horizon, 1));
  c.horizon = horizon;
  c.step_size = GetDouble(env, path, "step_size", c.step_size);
  c.catch_radius = GetDouble(env, path, "catch_radius", c.catch_radius);
  c.catch_reward = GetDouble(env, path, "catch_reward", c.catch_reward);
  c.penalty = GetDouble(env, path, "penalty", c.penalty);
  c.spawn_separation = GetDouble(env, path, "spawn_separation", c.spawn_separation);
  c.respawn_prey = GetBool(env, path, "respawn_prey", c.respawn_prey);
  if (env.contains("obstacles")) {
    const json& list = env.at("obstacles");
    const std::string lp = Join(path, "obstacles");
    if (!list.is_array()) throw ConfigError(lp, "expected a list");
    c.obstacles.clear();
    for (std::size_t k = 0; k < list.size(); ++k) {
      const std::string op = Index(lp, k);
      CheckKeys(list[k], op, {"x", "y", "radius"});
      if (!list[k].contains("x") || !list[k].contains("y") || !list[k].contains("radius")) {
        throw ConfigError(op, "needs x, y and radius");
      }
      c.obstacles.push_back(Obstacle{{GetDouble(list[k], op, "x", 0.0),
                                      GetDouble(list[k], op, "y", 0.0)},
                                     GetDouble(list[k], op, "radius", 0.0)});
    }
  }
  return c;
}

HarvestConfig ParseHarvest(const json& env, const std::string& base_dir,
                           std::string& map_path) {
  const std::string path = "environment";
  CheckKeys(env, path, {"type", "episode_length", "map", "regrowth"});
  HarvestConfig c;
  c.horizon = static_cast<int>(GetInt(env, path, "episode_length", c.horizon, 1));
  if (env.contains("map")) {
    std::filesystem::path p = GetString(env, path, "map", "");
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    map_path = p.lexically_normal().string();
    try {
      c.map = LoadHarvestMap(map_path);
    } catch (const IoError& e) {
      throw ConfigError("environment.map", e.what());
    } catch (const ParseError& e) {
      throw ConfigError("environment.map", e.what());
    }
  }
  if (env.contains("regrowth")) {
    // Four tiers: k = 0, 1-2, 3-4, >= 5 neighbouring apples.
    const json& tiers = env.at("regrowth");
    if (!tiers.is_array() || tiers.size() != 4) {
      throw ConfigError("environment.regrowth", "expected four probabilities");
    }
    double p[4];
    for (int t = 0; t < 4; ++t) {
      if (!tiers[t].is_number()) {
        throw ConfigError("environment.regrowth", "expected four probabilities");
      }
      p[t] = tiers[t].get<double>();
    }
    for (int k = 0; k <= kRegrowthNeighbours; ++k) {
      c.regrowth[k] = k == 0 ? p[0] : k <= 2 ? p[1] : k <= 4 ? p[2] : p[3];
    }
  }
  return c;
}

std::vector<AgentSpec> ParseAgents(const json& root, bool harvest) {
  if (!root.contains("agents")) throw ConfigError("agents", "roster is required");
  const json& list = root.at("agents");
  if (!list.is_array()) throw ConfigError("agents", "expected a list");
  if (list.empty()) throw ConfigError("agents", "roster must be non-empty");
  std::vector<AgentSpec> roster;
  std::set<std::string> names;
  for (std::size_t i = 0; i < list.size(); ++i) {
    const std::string path = Index("agents", i);
    const json& a = list[i];
    CheckKeys(a, path, {"name", "policy", "skill", "speed", "role", "fixed"});
    AgentSpec spec;
    spec.name = GetString(a, path, "name", "agent" + std::to_string(i));
    if (spec.name.empty() || spec.name.find_first_of(",\"\n\r") != std::string::npos) {
      throw ConfigError(Join(path, "name"), "must be non-empty without commas, quotes or newlines");
    }
    if (!names.insert(spec.name).second) {
      throw ConfigError(Join(path, "name"), "duplicate agent name '" + spec.name + "'");
    }
    if (!a.contains("policy")) throw ConfigError(Join(path, "policy"), "is required");
    const std::string policy = GetString(a, path, "policy", "");
    const auto kind = ParsePolicyKind(policy);
    if (!kind) throw ConfigError(Join(path, "policy"), "unknown policy '" + policy + "'");
    spec.policy.kind = *kind;
    spec.policy.skill = GetDouble(a, path, "skill", 1.0);
    spec.policy.speed = GetDouble(a, path, "speed", 1.0);
    try {
      spec.policy.Validate();
    } catch (const ConfigError& e) {
      throw ConfigError(Join(path, e.field()), e.detail());
    }
    Role role = harvest ? Role::kHarvester : Role::kPredator;
    if (*kind == PolicyKind::kEvader) role = Role::kPrey;
    if (*kind == PolicyKind::kHarvester) role = Role::kHarvester;
    if (a.contains("role")) {
      const std::string name = GetString(a, path, "role", "");
      const auto parsed = ParseRole(name);
      if (!parsed) throw ConfigError(Join(path, "role"), "unknown role '" + name + "'");
      role = *parsed;
    }
    spec.role = role;
    spec.fixed = GetBool(a, path, "fixed", role == Role::kPrey);
    roster.push_back(std::move(spec));
  }
  return roster;
}

std::vector<ExclusionMode> ParseModes(const json& root) {
  if (!root.contains("exclusion")) return {ExclusionMode::kNoOp};
  const json& v = root.at("exclusion");
  std::vector<std::string> names;
  if (v.is_string()) {
    names.push_back(v.get<std::string>());
  } else if (v.is_array() && !v.empty()) {
    for (const json& m : v) {
      if (!m.is_string()) throw ConfigError("exclusion", "expected mode names");
      names.push_back(m.get<std::string>());
    }
  } else {
    throw ConfigError("exclusion", "expected a mode name or a non-empty list");
  }
  std::vector<ExclusionMode> modes;
  for (const auto& n : names) {
    const auto mode = ParseExclusionMode(n);
    if (!mode) throw ConfigError("exclusion", "unknown mode '" + n + "'");
    if (std::find(modes.begin(), modes.end(), *mode) != modes.end()) {
      throw ConfigError("exclusion", "duplicate mode '" + n + "'");
    }
    modes.push_back(*mode);
  }
  return modes;
}

SweepSpec ParseSweep(const json& s) {
  CheckKeys(s, "sweep", {"agent", "param", "values"});
  SweepSpec spec;
  spec.agent = static_cast<int>(GetInt(s, "sweep", "agent", 0, 0));
  spec.param = GetString(s, "sweep", "param", "speed");
  if (s.contains("values")) {
    const json& v = s.at("values");
    if (!v.is_array()) throw ConfigError("sweep.values", "expected a list of numbers");
    for (const json& x : v) {
      if (!x.is_number()) throw ConfigError("sweep.values", "expected a list of numbers");
      spec.values.push_back(x.get<double>());
    }
  }
  return spec;
}

// Roster with the swept parameter of one agent replaced.
std::vector<AgentSpec> SweptRoster(const ExperimentConfig& config,
                                   const SweepSpec& sweep, double value) {
  std::vector<AgentSpec> roster = config.agents;
  AgentSpec& agent = roster.at(sweep.agent);
  if (sweep.param == "speed") {
    agent.policy.speed = value;
  } else {
    agent.policy.skill = value;
  }
  try {
    agent.policy.Validate();
  } catch (const ConfigError& e) {
    throw ConfigError("sweep.values", e.field() + " " + e.detail());
  }
  return roster;
}

int PlayerOf(const RolloutGame& game, int agent) {
  const auto& scope = game.scope();
  const auto it = std::find(scope.begin(), scope.end(), agent);
  if (it == scope.end()) {
    throw ConfigError("sweep.agent", "agent is fixed and has no Shapley value");
  }
  return static_cast<int>(it - scope.begin());
}

template <class Fn>
auto Stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.kind(), e.what());
  } catch (const std::exception& e) {
    throw StageError(name, ErrorKind::kContract, e.what());
  }
}

}  // namespace

void ValidateSweep(const ExperimentConfig& config, const SweepSpec& sweep) {
  if (sweep.param != "speed" && sweep.param != "skill") {
    throw ConfigError("sweep.param", "expected 'speed' or 'skill'");
  }
  if (sweep.agent < 0 || sweep.agent >= static_cast<int>(config.agents.size())) {
    throw ConfigError("sweep.agent", "no agent with index " + std::to_string(sweep.agent));
  }
  if (config.agents[sweep.agent].fixed) {
    throw ConfigError("sweep.agent", "agent is fixed and has no Shapley value");
  }
  for (double v : sweep.values) SweptRoster(config, sweep, v);
}

std::string_view ToString(Command command) {
  switch (command) {
    case Command::kRun:
      return "run";
    case Command::kCompareExact:
      return "compare-exact";
    case Command::kSweep:
      return "sweep";
  }
  return "?";
}

ExperimentConfig ParseConfig(std::string_view json_text, const std::string& base_dir) {
  json root;
  try {
    root = json::parse(json_text.begin(), json_text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = LineColumn(json_text, e.byte);
    std::string what = e.what();
    const auto colon = what.find("error: ");
    if (colon != std::string::npos) what = what.substr(colon + 7);
    throw ParseError(what, line, column);
  }
  CheckKeys(root, "",
            {"name", "environment", "agents", "exclusion", "M", "samples_per_coalition",
             "grand_episodes", "performance_episodes", "exact_capacity", "seed",
             "workers", "output", "sweep"});

  ExperimentConfig c;
  c.name = GetString(root, "", "name", c.name);
  if (!root.contains("environment")) throw ConfigError("environment", "is required");
  const json& env = root.at("environment");
  if (!env.is_object()) throw ConfigError("environment", "expected an object");
  const std::string type = GetString(env, "environment", "type", "");
  bool harvest = false;
  if (type == "predator_prey") {
    int horizon = 0;
    c.environment = ParsePredatorPrey(env, horizon);
  } else if (type == "harvest") {
    harvest = true;
    c.environment = ParseHarvest(env, base_dir, c.map_path);
  } else {
    throw ConfigError("environment.type", "expected 'predator_prey' or 'harvest'");
  }
  c.agents = ParseAgents(root, harvest);
  c.exclusion_modes = ParseModes(root);
  c.draws = static_cast<std::uint64_t>(GetInt(root, "", "M", 1000, 1));
  c.samples_per_coalition =
      static_cast<int>(GetInt(root, "", "samples_per_coalition", 200, 1));
  c.grand_episodes = static_cast<int>(GetInt(root, "", "grand_episodes", 100, 1));
  c.performance_episodes =
      static_cast<int>(GetInt(root, "", "performance_episodes", 2000, 1));
  c.exact_capacity = static_cast<int>(GetInt(root, "", "exact_capacity", 10, 1));
  c.seed = GetSeed(root, "seed", 0);
  c.workers = static_cast<int>(GetInt(root, "", "workers", 1, 1));
  c.output_dir = GetString(root, "", "output", c.output_dir);
  if (root.contains("sweep")) c.sweep = ParseSweep(root.at("sweep"));

  // Building a game checks roles against the environment and its parameters.
  RolloutGame probe(c.environment, c.agents, c.exclusion_modes.front());
  if (c.sweep) ValidateSweep(c, *c.sweep);
  return c;
}

ExperimentConfig LoadConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open config file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return ParseConfig(buffer.str(), base.empty() ? "." : base);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line(), e.column());
  }
}

double SpearmanCorrelation(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw ContractError("Spearman inputs differ in length");
  const std::size_t n = x.size();
  if (n < 2) return std::nan("");
  auto ranks = [n](const std::vector<double>& v) {
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n;) {
      std::size_t j = i;
      while (j + 1 < n && v[order[j + 1]] == v[order[i]]) ++j;
      const double avg = (static_cast<double>(i + j) / 2.0) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(x);
  const auto ry = ranks(y);
  const double mean = (static_cast<double>(n) + 1.0) / 2.0;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxy += (rx[i] - mean) * (ry[i] - mean);
    sxx += (rx[i] - mean) * (rx[i] - mean);
    syy += (ry[i] - mean) * (ry[i] - mean);
  }
  if (sxx == 0.0 || syy == 0.0) return std::nan("");
  return sxy / std::sqrt(sxx * syy);
}

std::vector<int> DescendingRanking(const std::vector<double>& values) {
  std::vector<int> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return values[a] > values[b]; });
  return order;
}

ReportBundle RunExperiment(const ExperimentConfig& config, Command command) {
  ReportBundle bundle;
  bundle.command = command;
  bundle.config = config;

  AttributionOptions options;
  options.workers = config.workers;
  options.grand_episodes = config.grand_episodes;
  options.exact_capacity = config.exact_capacity;

  auto spill_for = [&](ExclusionMode mode, int players) {
    const std::uint64_t entries = config.draws * static_cast<std::uint64_t>(players);
    if (entries <= options.retention_cap) return std::string();
    std::filesystem::create_directories(config.output_dir);
    return (std::filesystem::path(config.output_dir) /
            ("marginals_" + std::string(ToString(mode)) + ".csv"))
        .string();
  };

  if (command == Command::kSweep) {
    const SweepSpec sweep = Stage("config", [&] {
      if (!config.sweep) throw ConfigError("sweep", "sweep settings are required");
      if (config.sweep->values.empty()) {
        throw ConfigError("sweep.values", "need at least one value");
      }
      ValidateSweep(config, *config.sweep);
      return *config.sweep;
    });
    bundle.sweep = sweep;
    const ExclusionMode mode = config.exclusion_modes.front();
    for (std::size_t k = 0; k < sweep.values.size(); ++k) {
      const double value = sweep.values[k];
      Stage("sweep[" + std::to_string(k) + "]", [&] {
        RolloutGame game(config.environment, SweptRoster(config, sweep, value), mode);
        bundle.sweep_player = PlayerOf(game, sweep.agent);
        options.spill_path = spill_for(mode, game.players());
        AttributionReport report =
            RunMonteCarloAttribution(game, config.draws, config.seed, options);
        SweepPoint point;
        point.value = value;
        point.estimate = report.estimate;
        point.grand_mean = report.grand_mean;
        point.efficiency = Efficiency(report.grand_traces);
        point.equality = Equality(report.grand_traces);
        point.sustainability = Sustainability(report.grand_traces);
        point.rollouts = report.rollouts;
        bundle.sweep_points.push_back(std::move(point));
      });
    }
    std::vector<double> phi;
    for (const auto& p : bundle.sweep_points) {
      phi.push_back(p.estimate.values[bundle.sweep_player]);
    }
    bundle.sweep_spearman = SpearmanCorrelation(sweep.values, phi);
    return bundle;
  }

  for (ExclusionMode mode : config.exclusion_modes) {
    const std::string tag(ToString(mode));
    ModeResult result;
    result.mode = mode;
    Stage("attribution[" + tag + "]", [&] {
      RolloutGame game(config.environment, config.agents, mode);
      options.spill_path = spill_for(mode, game.players());
      result.monte_carlo =
          RunMonteCarloAttribution(game, config.draws, config.seed, options);
    });
    if (command == Command::kCompareExact) {
      Stage("exact[" + tag + "]", [&] {
        RolloutGame game(config.environment, config.agents, mode);
        result.exact = RunExactAttribution(game, config.samples_per_coalition,
                                           config.seed, options);
      });
    }
    bundle.modes.push_back(std::move(result));
  }

  Stage("performance", [&] {
    RolloutGame game(config.environment, config.agents, config.exclusion_modes.front());
    bundle.mean_event_counts = MeanEventCounts(game, config.performance_episodes,
                                               config.seed, config.workers);
    std::vector<double> scope_events;
    for (int agent : game.scope()) scope_events.push_back(bundle.mean_event_counts[agent]);
    bundle.shapley_ranking =
        DescendingRanking(bundle.modes.front().monte_carlo.estimate.values);
    bundle.event_ranking = DescendingRanking(scope_events);
    bundle.ranking_matches = bundle.shapley_ranking == bundle.event_ranking;
  });

  Stage("metrics", [&] {
    const auto& traces = bundle.modes.front().monte_carlo.grand_traces;
    bundle.efficiency = Efficiency(traces);
    bundle.equality = Equality(traces);
    bundle.sustainability = Sustainability(traces);
    bundle.per_agent = ComputePerAgentMetrics(traces);
  });
  return bundle;
}

}  // namespace shapmarl
