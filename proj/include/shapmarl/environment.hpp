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

#ifndef SHAPMARL_ENVIRONMENT_HPP_
#define SHAPMARL_ENVIRONMENT_HPP_

#include <memory>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "shapmarl/random.hpp"

namespace shapmarl {

// Shared discrete action set. Predator-prey uses the first five, harvest all
// seven. "Up" is +y in the particle arena and one row north on the grid.
enum class Action : int {
  kNoop = 0,
  kUp = 1,
  kDown = 2,
  kLeft = 3,
  kRight = 4,
  kRotateLeft = 5,
  kRotateRight = 6,
};

inline constexpr int kMoveActionCount = 5;
inline constexpr int kHarvestActionCount = 7;

enum class Role { kPredator = 0, kPrey = 1, kHarvester = 2 };

std::string_view ToString(Role role);
std::string_view ToString(Action action);

using Observation = std::vector<double>;

struct StepOutcome {
  std::vector<double> rewards;
  std::vector<Observation> observations;
  bool done = false;
};

// Step-based simulator used by the rollout layer. Instances are
// single-threaded; parallel rollouts each own one.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int agents() const = 0;
  virtual int action_count() const = 0;
  virtual Role role(int agent) const = 0;
  virtual int horizon() const = 0;
  virtual int timestep() const = 0;

  virtual void Reset(RandomStream& rng) = 0;
  // Rewards of the last step are written into `rewards` (resized to
  // agents()). Returns true once timestep() reaches horizon().
  virtual bool Step(std::span<const Action> actions, RandomStream& rng,
                    std::vector<double>& rewards) = 0;
  virtual const Observation& observation(int agent) const = 0;

  // Per-agent count of the environment's scoring event so far in the
  // episode: prey catches credited to each predator, apples per harvester.
  virtual std::vector<int> event_counts() const = 0;
};

}  // namespace shapmarl

#endif  // SHAPMARL_ENVIRONMENT_HPP_
