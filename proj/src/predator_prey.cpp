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

#include "shapmarl/predator_prey.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shapmarl/errors.hpp"

namespace shapmarl {

namespace {

constexpr double kArenaHalf = 1.0;
constexpr double kSpawnHalf = 0.9;
constexpr double kSpawnObstacleMargin = 0.05;
constexpr int kSpawnAttempts = 10000;

double Distance(Vec2 a, Vec2 b) { return std::hypot(a.x - b.x, a.y - b.y); }

Vec2 Direction(Action a) {
  switch (a) {
    case Action::kUp:
      return {0.0, 1.0};
    case Action::kDown:
      return {0.0, -1.0};
    case Action::kLeft:
      return {-1.0, 0.0};
    case Action::kRight:
      return {1.0, 0.0};
    default:
      return {0.0, 0.0};
  }
}

bool InsideObstacle(Vec2 p, const std::vector<Obstacle>& obstacles,
                    double margin) {
  for (const Obstacle& o : obstacles) {
    if (Distance(p, o.center) < o.radius + margin) return true;
  }
  return false;
}

}  // namespace

void PredatorPreyConfig::Validate() const {
  if (roles.empty()) throw ConfigError("agents", "need at least one agent");
  if (speeds.size() != roles.size()) {
    throw ContractError("predator-prey speeds/roles length mismatch");
  }
  for (std::size_t i = 0; i < roles.size(); ++i) {
    if (roles[i] != Role::kPredator && roles[i] != Role::kPrey) {
      throw ConfigError("agents[" + std::to_string(i) + "].role",
                        "predator-prey agents are predators or prey");
    }
    if (!(speeds[i] > 0.0)) {
      throw ConfigError("agents[" + std::to_string(i) + "].speed",
                        "speed must be > 0");
    }
  }
  if (horizon < 1) throw ConfigError("episode_length", "must be >= 1");
  if (!(step_size > 0.0)) throw ConfigError("step_size", "must be > 0");
  if (!(catch_radius > 0.0)) throw ConfigError("catch_radius", "must be > 0");
  if (spawn_separation < 0.0) {
    throw ConfigError("spawn_separation", "must be >= 0");
  }
  for (const Obstacle& o : obstacles) {
    if (!(o.radius > 0.0)) throw ConfigError("obstacles", "radius must be > 0");
  }
}

std::vector<Obstacle> DefaultObstacles() {
  return {{{-0.5, 0.5}, 0.1}, {{0.5, -0.5}, 0.1}};
}

PredatorPreyConfig DefaultPredatorPreyConfig(std::vector<double> predator_speeds,
                                             double prey_speed) {
  PredatorPreyConfig c;
  for (double s : predator_speeds) {
    c.roles.push_back(Role::kPredator);
    c.speeds.push_back(s);
  }
  c.roles.push_back(Role::kPrey);
  c.speeds.push_back(prey_speed);
  c.obstacles = DefaultObstacles();
  return c;
}

std::size_t PredatorPreyObservationSize(int agents, int obstacles) {
  return 2 + static_cast<std::size_t>(kPredatorPreyAgentBlock) * agents +
         static_cast<std::size_t>(kPredatorPreyObstacleBlock) * obstacles;
}

PredatorPreyEnv::PredatorPreyEnv(PredatorPreyConfig config)
    : config_(std::move(config)) {
  config_.Validate();
  const std::size_t n = config_.roles.size();
  state_.positions.assign(n, {});
  state_.velocities.assign(n, {});
  state_.roles = config_.roles;
  state_.obstacles = config_.obstacles;
  state_.catches.assign(n, 0);
  observations_.assign(
      n, Observation(PredatorPreyObservationSize(
             static_cast<int>(n), static_cast<int>(config_.obstacles.size()))));
}

Vec2 PredatorPreyEnv::SampleFreePosition(RandomStream& rng,
                                         bool away_from_predators) const {
  for (int attempt = 0; attempt < kSpawnAttempts; ++attempt) {
    const Vec2 p{rng.Uniform(-kSpawnHalf, kSpawnHalf),
                 rng.Uniform(-kSpawnHalf, kSpawnHalf)};
    if (InsideObstacle(p, state_.obstacles, kSpawnObstacleMargin)) continue;
    if (away_from_predators) {
      bool ok = true;
      for (std::size_t j = 0; j < state_.roles.size(); ++j) {
        if (state_.roles[j] == Role::kPredator &&
            Distance(p, state_.positions[j]) < config_.spawn_separation) {
          ok = false;
          break;
        }
      }
      if (!ok) continue;
    }
    return p;
  }
  throw DomainError("predator-prey: no free spawn position");
}

void PredatorPreyEnv::Reset(RandomStream& rng) {
  const std::size_t n = state_.roles.size();
  state_.timestep = 0;
  std::fill(state_.catches.begin(), state_.catches.end(), 0);
  std::fill(state_.velocities.begin(), state_.velocities.end(), Vec2{});
  // Predators first so prey placement can respect the separation.
  for (std::size_t i = 0; i < n; ++i) {
    if (state_.roles[i] == Role::kPredator) {
      state_.positions[i] = SampleFreePosition(rng, false);
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (state_.roles[i] == Role::kPrey) {
      state_.positions[i] = SampleFreePosition(rng, true);
    }
  }
  Observe();
}

void PredatorPreyEnv::set_state(PredatorPreyState state) {
  if (state.positions.size() != config_.roles.size() ||
      state.velocities.size() != config_.roles.size() ||
      state.roles != config_.roles ||
      state.catches.size() != config_.roles.size()) {
    throw ContractError("predator-prey state does not match the config");
  }
  state_ = std::move(state);
  observations_.assign(
      config_.roles.size(),
      Observation(PredatorPreyObservationSize(
          agents(), static_cast<int>(state_.obstacles.size()))));
  Observe();
}

bool PredatorPreyEnv::Step(std::span<const Action> actions, RandomStream& rng,
                           std::vector<double>& rewards) {
  const std::size_t n = state_.roles.size();
  if (actions.size() != n) {
    throw ContractError("predator-prey: expected " + std::to_string(n) +
                        " actions, got " + std::to_string(actions.size()));
  }
  rewards.assign(n, 0.0);

  for (std::size_t i = 0; i < n; ++i) {
    const int a = static_cast<int>(actions[i]);
    if (a < 0 || a >= kMoveActionCount) {
      throw ContractError("predator-prey: action " + std::to_string(a) +
                          " outside the movement set");
    }
    const Vec2 dir = Direction(actions[i]);
    const double stride = config_.speeds[i] * config_.step_size;
    const Vec2 from = state_.positions[i];
    Vec2 to{from.x + dir.x * stride, from.y + dir.y * stride};
    if (std::abs(to.x) > kArenaHalf || std::abs(to.y) > kArenaHalf) {
      to.x = std::clamp(to.x, -kArenaHalf, kArenaHalf);
      to.y = std::clamp(to.y, -kArenaHalf, kArenaHalf);
      rewards[i] -= config_.penalty;
    }
    if (InsideObstacle(to, state_.obstacles, 0.0)) {
      to = from;
      rewards[i] -= config_.penalty;
    }
    state_.velocities[i] = {to.x - from.x, to.y - from.y};
    state_.positions[i] = to;
  }

  for (std::size_t p = 0; p < n; ++p) {
    if (state_.roles[p] != Role::kPrey) continue;
    bool caught = false;
    for (std::size_t j = 0; j < n; ++j) {
      if (state_.roles[j] == Role::kPredator &&
          Distance(state_.positions[j], state_.positions[p]) <=
              config_.catch_radius) {
        ++state_.catches[j];
        caught = true;
      }
    }
    if (!caught) continue;
    // Shared payout: every predator is rewarded for the catch.
    for (std::size_t j = 0; j < n; ++j) {
      if (state_.roles[j] == Role::kPredator) rewards[j] += config_.catch_reward;
    }
    rewards[p] -= config_.catch_reward;
    if (config_.respawn_prey) {
      state_.positions[p] = SampleFreePosition(rng, true);
      state_.velocities[p] = {};
    }
  }

  ++state_.timestep;
  Observe();
  return state_.timestep >= config_.horizon;
}

void PredatorPreyEnv::Observe() {
  const std::size_t n = state_.roles.size();
  const std::size_t k = state_.obstacles.size();
  for (std::size_t i = 0; i < n; ++i) {
    Observation& obs = observations_[i];
    const Vec2 self = state_.positions[i];
    std::size_t w = 0;
    obs[w++] = static_cast<double>(n);
    obs[w++] = static_cast<double>(k);
    auto put_agent = [&](std::size_t j, Vec2 origin) {
      obs[w++] = state_.positions[j].x - origin.x;
      obs[w++] = state_.positions[j].y - origin.y;
      obs[w++] = state_.velocities[j].x;
      obs[w++] = state_.velocities[j].y;
      obs[w++] = static_cast<double>(static_cast<int>(state_.roles[j]));
      obs[w++] = config_.speeds[j] * config_.step_size;
    };
    put_agent(i, Vec2{});
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) put_agent(j, self);
    }
    for (const Obstacle& o : state_.obstacles) {
      obs[w++] = o.center.x - self.x;
      obs[w++] = o.center.y - self.y;
      obs[w++] = o.radius;
    }
  }
}

std::pair<PredatorPreyState, std::vector<Observation>> ResetPredatorPrey(
    const PredatorPreyConfig& config, std::uint64_t seed) {
  PredatorPreyEnv env(config);
  RandomStream rng(seed);
  env.Reset(rng);
  std::vector<Observation> obs;
  for (int i = 0; i < env.agents(); ++i) obs.push_back(env.observation(i));
  return {env.state(), std::move(obs)};
}

std::pair<PredatorPreyState, StepOutcome> StepPredatorPrey(
    const PredatorPreyConfig& config, const PredatorPreyState& state,
    std::span<const Action> actions, RandomStream& rng) {
  PredatorPreyEnv env(config);
  env.set_state(state);
  StepOutcome out;
  out.done = env.Step(actions, rng, out.rewards);
  for (int i = 0; i < env.agents(); ++i) {
    out.observations.push_back(env.observation(i));
  }
  return {env.state(), std::move(out)};
}

}  // namespace shapmarl
