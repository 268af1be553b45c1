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

#ifndef SHAPMARL_HARVEST_HPP_
#define SHAPMARL_HARVEST_HPP_

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "shapmarl/environment.hpp"

namespace shapmarl {

enum class Cell : std::uint8_t { kEmpty = 0, kApple = 1, kWall = 2 };

struct GridPos {
  int row = 0;
  int col = 0;
  friend bool operator==(const GridPos&, const GridPos&) = default;
};

// Plain-text map: one character per cell, '.' empty, 'A' apple, '#' wall,
// '0'-'9' spawn points (empty cells). All rows must have the same width.
struct HarvestMap {
  int width = 0;
  int height = 0;
  std::vector<Cell> cells;          // row-major
  std::vector<GridPos> spawn_points;  // ordered by digit

  Cell at(int row, int col) const { return cells[row * width + col]; }
  int apple_count() const;
};

// Throws ParseError with the 1-based line/column of the first problem.
HarvestMap ParseHarvestMap(std::string_view text);
HarvestMap LoadHarvestMap(const std::string& path);
// The built-in 39x15 layout with 159 apples and 10 spawn points.
const HarvestMap& DefaultHarvestMap();
std::string_view DefaultHarvestMapText();

// L2 radius-2 neighbourhood excluding the centre: 12 cells.
inline constexpr int kRegrowthNeighbours = 12;

// p(k) for k apples within the regrowth neighbourhood of an empty cell.
using RegrowthTable = std::array<double, kRegrowthNeighbours + 1>;
RegrowthTable DefaultRegrowthTable();

struct HarvestConfig {
  HarvestMap map = DefaultHarvestMap();
  int agents = 6;
  int horizon = 1000;
  RegrowthTable regrowth = DefaultRegrowthTable();

  void Validate() const;
};

enum class Heading : std::uint8_t { kNorth = 0, kEast = 1, kSouth = 2, kWest = 3 };

struct HarvestState {
  int width = 0;
  int height = 0;
  std::vector<Cell> grid;
  std::vector<std::uint8_t> neighbour_apples;  // apples within radius 2
  std::vector<GridPos> agent_positions;
  std::vector<Heading> agent_headings;
  std::vector<int> apples_eaten;  // per agent
  int timestep = 0;
  int initial_apples = 0;
  int apples_regrown = 0;

  int apples_remaining() const;
  int apples_consumed() const;
};

// Observation layout: a 7x7 north-up window centred on the agent in
// row-major order (north row first), followed by the agent's heading.
// Cell codes use the HarvestView values below; off-map cells read as walls.
inline constexpr int kHarvestViewRadius = 3;
inline constexpr int kHarvestViewSide = 2 * kHarvestViewRadius + 1;
inline constexpr std::size_t kHarvestObservationSize =
    kHarvestViewSide * kHarvestViewSide + 1;

enum class HarvestView : int {
  kEmpty = 0,
  kApple = 1,
  kWall = 2,
  kAgent = 3,
  kSelf = 4,
};

class HarvestEnv final : public Environment {
 public:
  explicit HarvestEnv(HarvestConfig config);

  int agents() const override { return config_.agents; }
  int action_count() const override { return kHarvestActionCount; }
  Role role(int) const override { return Role::kHarvester; }
  int horizon() const override { return config_.horizon; }
  int timestep() const override { return state_.timestep; }

  void Reset(RandomStream& rng) override;
  bool Step(std::span<const Action> actions, RandomStream& rng,
            std::vector<double>& rewards) override;
  const Observation& observation(int agent) const override {
    return observations_.at(agent);
  }
  std::vector<int> event_counts() const override { return state_.apples_eaten; }

  const HarvestConfig& config() const noexcept { return config_; }
  const HarvestState& state() const noexcept { return state_; }
  void set_state(HarvestState state);

  // Regrowth probability an empty cell would see right now.
  double RegrowthProbability(GridPos cell) const;

 private:
  int Index(GridPos p) const { return p.row * state_.width + p.col; }
  void AdjustNeighbours(GridPos p, int delta);
  void RecountNeighbours();
  void Observe();

  HarvestConfig config_;
  HarvestState state_;
  std::vector<std::uint8_t> occupied_;
  std::vector<int> regrow_scratch_;
  std::vector<Observation> observations_;
};

std::pair<HarvestState, std::vector<Observation>> ResetHarvest(
    const HarvestConfig& config, std::uint64_t seed);
std::pair<HarvestState, StepOutcome> StepHarvest(const HarvestConfig& config,
                                                 const HarvestState& state,
                                                 std::span<const Action> actions,
                                                 RandomStream& rng);

}  // namespace shapmarl

#endif  // SHAPMARL_HARVEST_HPP_
