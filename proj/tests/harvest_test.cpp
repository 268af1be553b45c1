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

#include "shapmarl/harvest.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gtest/gtest.h"
#include "shapmarl/attribution.hpp"
#include "shapmarl/errors.hpp"

namespace shapmarl {
namespace {

HarvestConfig SmallConfig(const std::string& text, int agents) {
  HarvestConfig c;
  c.map = ParseHarvestMap(text);
  c.agents = agents;
  c.horizon = 10;
  return c;
}

int ApplesOnGrid(const HarvestState& s) {
  int n = 0;
  for (Cell c : s.grid) n += c == Cell::kApple;
  return n;
}

TEST(HarvestMapTest, DefaultLayout) {
  const HarvestMap& map = DefaultHarvestMap();
  EXPECT_EQ(map.width, 39);
  EXPECT_EQ(map.height, 15);
  EXPECT_EQ(map.apple_count(), 159);
  EXPECT_EQ(map.spawn_points.size(), 10u);
  for (const GridPos& p : map.spawn_points) EXPECT_EQ(map.at(p.row, p.col), Cell::kEmpty);
}

TEST(HarvestMapTest, ShippedMapFileMatchesBuiltIn) {
  const HarvestMap file = LoadHarvestMap(SHAPMARL_SOURCE_DIR "/maps/harvest_default.txt");
  EXPECT_EQ(file.cells, DefaultHarvestMap().cells);
  EXPECT_EQ(file.spawn_points, DefaultHarvestMap().spawn_points);
}

TEST(HarvestMapTest, ParsesCharacters) {
  const HarvestMap m = ParseHarvestMap("#A.\n1.0\n");
  EXPECT_EQ(m.width, 3);
  EXPECT_EQ(m.height, 2);
  EXPECT_EQ(m.at(0, 0), Cell::kWall);
  EXPECT_EQ(m.at(0, 1), Cell::kApple);
  EXPECT_EQ(m.at(1, 0), Cell::kEmpty);
  ASSERT_EQ(m.spawn_points.size(), 2u);
  EXPECT_EQ(m.spawn_points[0], (GridPos{1, 2}));
  EXPECT_EQ(m.spawn_points[1], (GridPos{1, 0}));
}

void ExpectParseError(const std::string& text, int line, int column) {
  try {
    ParseHarvestMap(text);
    FAIL() << "no error for: " << text;
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), line) << e.what();
    EXPECT_EQ(e.column(), column) << e.what();
  }
}

TEST(HarvestMapTest, MalformedMapsReportLocation) {
  ExpectParseError("...\n..x\n", 2, 3);
  ExpectParseError("...\n....\n", 2, 4);
  ExpectParseError("..\n.\n", 2, 2);
  ExpectParseError("1.\n.1\n", 2, 2);
  ExpectParseError("..\n\n..\n", 2, 1);
  ExpectParseError("", 1, 1);
}

TEST(HarvestMapTest, MissingFileIsIoError) {
  EXPECT_THROW(LoadHarvestMap("/nonexistent/map.txt"), IoError);
}

TEST(HarvestResetTest, DeterministicAndValid) {
  const HarvestConfig config;
  const auto a = ResetHarvest(config, 7).first;
  const auto b = ResetHarvest(config, 7).first;
  EXPECT_EQ(a.grid, b.grid);
  EXPECT_EQ(a.agent_positions, b.agent_positions);
  EXPECT_EQ(a.agent_headings, b.agent_headings);
  EXPECT_EQ(ApplesOnGrid(a), 159);
  EXPECT_EQ(a.initial_apples, 159);
  EXPECT_EQ(a.grid, DefaultHarvestMap().cells);
  std::set<std::pair<int, int>> cells;
  for (const GridPos& p : a.agent_positions) cells.insert({p.row, p.col});
  EXPECT_EQ(cells.size(), 6u);
}

TEST(HarvestStepTest, EatingAppleRewardsAndClearsCell) {
  HarvestConfig config = SmallConfig("0A...\n.....\n", 1);
  config.regrowth.fill(0.0);
  HarvestEnv env(config);
  RandomStream rng(1);
  env.Reset(rng);
  std::vector<double> rewards;
  const std::vector<Action> right{Action::kRight};
  env.Step(right, rng, rewards);
  EXPECT_EQ(rewards[0], 1.0);
  EXPECT_EQ(env.state().grid[1], Cell::kEmpty);
  EXPECT_EQ(env.state().apples_eaten[0], 1);
  EXPECT_EQ(env.state().apples_consumed(), 1);
}

TEST(HarvestStepTest, ZeroNeighbourhoodNeverRegrows) {
  // The apple is 3 columns away from the right edge cells.
  HarvestConfig config = SmallConfig("A.....\n......\n0.....\n", 1);
  HarvestEnv env(config);
  RandomStream rng(2);
  env.Reset(rng);
  EXPECT_EQ(env.RegrowthProbability({0, 5}), 0.0);
  EXPECT_EQ(env.RegrowthProbability({0, 1}), config.regrowth[1]);
  const std::vector<Action> noop{Action::kNoop};
  std::vector<double> rewards;
  for (int t = 0; t < 9; ++t) {
    env.Step(noop, rng, rewards);
    EXPECT_EQ(env.state().grid[5], Cell::kEmpty);
  }
}

TEST(HarvestStepTest, DepletedPatchStaysDead) {
  HarvestConfig config = SmallConfig("###########\n#0A.......#\n###########\n", 1);
  config.horizon = 500;
  HarvestEnv env(config);
  RandomStream rng(3);
  env.Reset(rng);
  std::vector<double> rewards;
  const std::vector<Action> right{Action::kRight};
  env.Step(right, rng, rewards);
  const std::vector<Action> noop{Action::kNoop};
  while (!env.Step(noop, rng, rewards)) {
  }
  EXPECT_EQ(ApplesOnGrid(env.state()), 0);
  EXPECT_EQ(env.state().apples_regrown, 0);
}

TEST(HarvestStepTest, RegrowthUsesNeighbourhoodTiers) {
  HarvestConfig config = SmallConfig(".......\n.AAAAA.\n.......\n...0...\n", 1);
  HarvestEnv env(config);
  RandomStream rng(4);
  env.Reset(rng);
  // (2, 3) sees the three apples of row 1 with |dc| <= 1.
  HarvestState s = env.state();
  int k = 0;
  for (int dr = -2; dr <= 2; ++dr) {
    for (int dc = -2; dc <= 2; ++dc) {
      if ((dr || dc) && dr * dr + dc * dc <= 4) {
        const int r = 2 + dr, c = 3 + dc;
        if (r >= 0 && r < s.height && c >= 0 && c < s.width) {
          k += s.grid[r * s.width + c] == Cell::kApple;
        }
      }
    }
  }
  EXPECT_EQ(k, 3);
  EXPECT_EQ(s.neighbour_apples[2 * s.width + 3], 3);
  EXPECT_EQ(env.RegrowthProbability({2, 3}), 0.05);
  EXPECT_EQ(env.RegrowthProbability({0, 0}), 0.01);
}

TEST(HarvestStepTest, IndexPriorityResolvesCollisions) {
  HarvestConfig config = SmallConfig("0.1\n...\n", 2);
  config.regrowth.fill(0.0);
  HarvestEnv env(config);
  HarvestState s = ResetHarvest(config, 5).first;
  s.agent_positions = {{0, 0}, {0, 2}};
  env.set_state(s);
  RandomStream rng(5);
  std::vector<double> rewards;
  const std::vector<Action> both{Action::kRight, Action::kLeft};
  env.Step(both, rng, rewards);
  EXPECT_EQ(env.state().agent_positions[0], (GridPos{0, 1}));
  EXPECT_EQ(env.state().agent_positions[1], (GridPos{0, 2}));
}

TEST(HarvestStepTest, WallsAndEdgesBlockMovement) {
  HarvestConfig config = SmallConfig("0#\n..\n", 1);
  HarvestEnv env(config);
  RandomStream rng(6);
  env.Reset(rng);
  std::vector<double> rewards;
  for (Action a : {Action::kRight, Action::kUp, Action::kLeft}) {
    env.Step(std::vector<Action>{a}, rng, rewards);
    EXPECT_EQ(env.state().agent_positions[0], (GridPos{0, 0}));
    EXPECT_EQ(rewards[0], 0.0);
  }
}

TEST(HarvestStepTest, RotationChangesHeadingOnly) {
  HarvestConfig config = SmallConfig("0..\n...\n", 1);
  HarvestEnv env(config);
  HarvestState s = ResetHarvest(config, 1).first;
  s.agent_headings = {Heading::kNorth};
  env.set_state(s);
  RandomStream rng(7);
  std::vector<double> rewards;
  env.Step(std::vector<Action>{Action::kRotateRight}, rng, rewards);
  EXPECT_EQ(env.state().agent_headings[0], Heading::kEast);
  env.Step(std::vector<Action>{Action::kRotateLeft}, rng, rewards);
  env.Step(std::vector<Action>{Action::kRotateLeft}, rng, rewards);
  EXPECT_EQ(env.state().agent_headings[0], Heading::kWest);
  EXPECT_EQ(env.state().agent_positions[0], (GridPos{0, 0}));
  EXPECT_EQ(env.observation(0).back(), static_cast<double>(Heading::kWest));
}

TEST(HarvestStepTest, ObservationWindow) {
  HarvestConfig config = SmallConfig("0A\n.1\n", 2);
  HarvestEnv env(config);
  HarvestState s = ResetHarvest(config, 1).first;
  s.agent_positions = {{0, 0}, {1, 1}};
  env.set_state(s);
  const Observation& o = env.observation(0);
  ASSERT_EQ(o.size(), kHarvestObservationSize);
  auto at = [&](int dr, int dc) {
    return static_cast<HarvestView>(static_cast<int>(
        o[(dr + kHarvestViewRadius) * kHarvestViewSide + dc + kHarvestViewRadius]));
  };
  EXPECT_EQ(at(0, 0), HarvestView::kSelf);
  EXPECT_EQ(at(0, 1), HarvestView::kApple);
  EXPECT_EQ(at(1, 0), HarvestView::kEmpty);
  EXPECT_EQ(at(1, 1), HarvestView::kAgent);
  EXPECT_EQ(at(-1, 0), HarvestView::kWall);
}

TEST(HarvestStepTest, ActionLengthMismatch) {
  HarvestEnv env{HarvestConfig{}};
  RandomStream rng(8);
  env.Reset(rng);
  std::vector<double> rewards;
  EXPECT_THROW(env.Step(std::vector<Action>(5, Action::kNoop), rng, rewards), ContractError);
}

TEST(HarvestEpisodeTest, ConservationAndInvariants) {
  const HarvestConfig config;
  HarvestEnv env(config);
  RandomStream rng(9);
  env.Reset(rng);
  std::vector<double> rewards;
  std::vector<Action> actions(6);
  double total_reward = 0.0;
  bool done = false;
  while (!done) {
    for (auto& a : actions) a = static_cast<Action>(rng.Below(kHarvestActionCount));
    done = env.Step(actions, rng, rewards);
    for (double r : rewards) total_reward += r;
    const HarvestState& s = env.state();
    ASSERT_EQ(s.apples_consumed() + s.apples_remaining() - s.apples_regrown,
              s.initial_apples);
    std::set<std::pair<int, int>> cells;
    for (const GridPos& p : s.agent_positions) {
      cells.insert({p.row, p.col});
      ASSERT_NE(s.grid[p.row * s.width + p.col], Cell::kWall);
      ASSERT_NE(s.grid[p.row * s.width + p.col], Cell::kApple);
    }
    ASSERT_EQ(cells.size(), 6u);
    for (std::size_t idx = 0; idx < s.grid.size(); ++idx) {
      if (DefaultHarvestMap().cells[idx] == Cell::kWall) ASSERT_EQ(s.grid[idx], Cell::kWall);
    }
  }
  EXPECT_EQ(env.timestep(), 1000);
  EXPECT_EQ(total_reward, static_cast<double>(env.state().apples_consumed()));
}

TEST(HarvestEpisodeTest, SameSeedSameEpisode) {
  auto run = [](std::uint64_t seed) {
    HarvestEnv env{HarvestConfig{}};
    RandomStream rng(seed);
    env.Reset(rng);
    std::vector<double> rewards;
    std::vector<Action> actions(6);
    RandomStream policy(seed + 1);
    while (true) {
      for (auto& a : actions) a = static_cast<Action>(policy.Below(kHarvestActionCount));
      if (env.Step(actions, rng, rewards)) break;
    }
    return env.state().grid;
  };
  EXPECT_EQ(run(3), run(3));
}

TEST(HarvestConfigTest, Validation) {
  HarvestConfig c;
  c.regrowth[0] = 0.1;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = HarvestConfig{};
  c.agents = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
  c = HarvestConfig{};
  c.horizon = 0;
  EXPECT_THROW(c.Validate(), ConfigError);
}

TEST(HarvestEpisodeTest, GreedyAgentsWithinGoldenBand) {
  std::ifstream in(SHAPMARL_SOURCE_DIR "/tests/golden/harvest_default.json");
  ASSERT_TRUE(in);
  const auto golden = nlohmann::json::parse(in);
  std::vector<AgentSpec> roster;
  for (int i = 0; i < 6; ++i) {
    roster.push_back({"h" + std::to_string(i), PolicySpec{PolicyKind::kHarvester, 1.0, 1.0},
                      Role::kHarvester, false});
  }
  const RolloutGame game(HarvestConfig{}, roster, ExclusionMode::kNoOp);
  const int episodes = golden["episodes"].get<int>();
  double total = 0.0;
  for (int seed = 0; seed < episodes; ++seed) {
    RandomStream rng(seed);
    total += game.Episode(Coalition::Grand(6), rng, false).payout;
  }
  const double mean = total / episodes;
  EXPECT_GE(mean, golden["band"]["lower"].get<double>());
  EXPECT_LE(mean, golden["band"]["upper"].get<double>());
  EXPECT_DOUBLE_EQ(mean, golden["measured_mean_global_reward"].get<double>());
}

}  // namespace
}  // namespace shapmarl
