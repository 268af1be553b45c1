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

#ifndef SHAPMARL_PREDATOR_PREY_HPP_
#define SHAPMARL_PREDATOR_PREY_HPP_

#include <span>
#include <utility>
#include <vector>

#include "shapmarl/environment.hpp"

namespace shapmarl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;
};

struct Obstacle {
  Vec2 center;
  double radius = 0.0;
};

// Pursuit arena on [-1, 1]^2. Displacement per step is speed * step_size
// along the chosen axis; there is no inertia.
struct PredatorPreyConfig {
  std::vector<Role> roles;     // kPredator or kPrey per agent
  std::vector<double> speeds;  // movement multiplier per agent, > 0
  std::vector<Obstacle> obstacles;
  int horizon = 100;
  double step_size = 0.08;
  double catch_radius = 0.1;
  double catch_reward = 10.0;
  double penalty = 1.0;
  // Minimum prey-predator distance at spawn and after a catch.
  double spawn_separation = 0.5;
  bool respawn_prey = true;

  void Validate() const;
};

// Three predators at `predator_speeds` (indices 0..2) followed by one prey,
// with the two default obstacles.
PredatorPreyConfig DefaultPredatorPreyConfig(
    std::vector<double> predator_speeds = {1.0, 1.0, 1.0},
    double prey_speed = 1.3);

std::vector<Obstacle> DefaultObstacles();

struct PredatorPreyState {
  std::vector<Vec2> positions;
  std::vector<Vec2> velocities;
  std::vector<Role> roles;
  std::vector<Obstacle> obstacles;
  std::vector<int> catches;  // per predator: catches it took part in
  int timestep = 0;
};

// Observation layout for agent i (all positions relative to i except its own):
//   [N, K,
//    x, y, vx, vy, role, stride,                (self, absolute position)
//    dx, dy, vx, vy, role, stride   x (N - 1),  (others in index order)
//    dx, dy, radius                 x K]        (obstacles)
// role is the numeric Role value and stride = speed * step_size.
inline constexpr int kPredatorPreyAgentBlock = 6;
inline constexpr int kPredatorPreyObstacleBlock = 3;
std::size_t PredatorPreyObservationSize(int agents, int obstacles);

class PredatorPreyEnv final : public Environment {
 public:
  explicit PredatorPreyEnv(PredatorPreyConfig config);

  int agents() const override { return static_cast<int>(config_.roles.size()); }
  int action_count() const override { return kMoveActionCount; }
  Role role(int agent) const override { return config_.roles.at(agent); }
  int horizon() const override { return config_.horizon; }
  int timestep() const override { return state_.timestep; }

  void Reset(RandomStream& rng) override;
  bool Step(std::span<const Action> actions, RandomStream& rng,
            std::vector<double>& rewards) override;
  const Observation& observation(int agent) const override {
    return observations_.at(agent);
  }
  std::vector<int> event_counts() const override { return state_.catches; }

  const PredatorPreyConfig& config() const noexcept { return config_; }
  const PredatorPreyState& state() const noexcept { return state_; }
  // Replaces the state wholesale (tests, hand-built scenarios).
  void set_state(PredatorPreyState state);

 private:
  void Observe();
  Vec2 SampleFreePosition(RandomStream& rng, bool away_from_predators) const;

  PredatorPreyConfig config_;
  PredatorPreyState state_;
  std::vector<Observation> observations_;
};

// Value-semantics entry points mirroring the class interface.
std::pair<PredatorPreyState, std::vector<Observation>> ResetPredatorPrey(
    const PredatorPreyConfig& config, std::uint64_t seed);
std::pair<PredatorPreyState, StepOutcome> StepPredatorPrey(
    const PredatorPreyConfig& config, const PredatorPreyState& state,
    std::span<const Action> actions, RandomStream& rng);

}  // namespace shapmarl

#endif  // SHAPMARL_PREDATOR_PREY_HPP_
