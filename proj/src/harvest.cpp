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

#include <algorithm>
#include <fstream>
#include <numeric>
#include <optional>
#include <sstream>

#include "shapmarl/errors.hpp"

namespace shapmarl {

namespace {

struct Offset {
  int dr;
  int dc;
};

constexpr std::array<Offset, kRegrowthNeighbours> kNeighbourhood = {{
    {-2, 0}, {-1, -1}, {-1, 0}, {-1, 1}, {0, -2}, {0, -1},
    {0, 1},  {0, 2},   {1, -1}, {1, 0},  {1, 1},  {2, 0},
}};

constexpr char kDefaultMapText[] =
    "#######################################\n"
    "#.....................................#\n"
    "#...A.....A.....A.....A.....A.....A...#\n"
    "#..AAA...AAA...AAA...AAA...AAA...AAA..#\n"
    "#.AAAAA.AAAAA.AAAAA.AAAAA.AAAAA.AAAAA.#\n"
    "#..AAA...AAA...AAA...AAA...AAA...AAA..#\n"
    "#...A.....A.....A.....A.....A.....A...#\n"
    "#.0..1.A..2..3..4..A..5..6..7..A..8.9.#\n"
    "#...A.....A.....A.....A.....A.....A...#\n"
    "#..AAA...AAA...AAA...AAA...AAA...AAA..#\n"
    "#.AAAAA.AAAAA.AAAAA.AAAAA.AAAAA.AAAAA.#\n"
    "#..AAA...AAA...AAA...AAA...AAA...AAA..#\n"
    "#...A.....A.....A.....A.....A.....A...#\n"
    "#.....................................#\n"
    "#######################################\n";

Offset MoveOffset(Action a) {
  switch (a) {
    case Action::kUp:
      return {-1, 0};
    case Action::kDown:
      return {1, 0};
    case Action::kLeft:
      return {0, -1};
    case Action::kRight:
      return {0, 1};
    default:
      return {0, 0};
  }
}

}  // namespace

int HarvestMap::apple_count() const {
  return static_cast<int>(std::count(cells.begin(), cells.end(), Cell::kApple));
}

HarvestMap ParseHarvestMap(std::string_view text) {
  HarvestMap map;
  std::array<std::optional<GridPos>, 10> spawns;
  int line = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view row = text.substr(start, end - start);
    if (!row.empty() && row.back() == '\r') row.remove_suffix(1);
    start = end + 1;
    ++line;
    if (row.empty()) {
      // Blank lines are only allowed at the end of the file.
      if (text.find_first_not_of("\r\n", start) == std::string_view::npos) break;
      throw ParseError("empty map row", line, 1);
    }
    if (map.height == 0) {
      map.width = static_cast<int>(row.size());
    } else if (static_cast<int>(row.size()) != map.width) {
      throw ParseError("row width " + std::to_string(row.size()) +
                           " differs from " + std::to_string(map.width),
                       line, static_cast<int>(std::min(row.size(),
                                                       std::size_t(map.width))) + 1);
    }
    for (int col = 0; col < static_cast<int>(row.size()); ++col) {
      const char ch = row[col];
      Cell cell = Cell::kEmpty;
      if (ch == '.') {
        cell = Cell::kEmpty;
      } else if (ch == 'A') {
        cell = Cell::kApple;
      } else if (ch == '#') {
        cell = Cell::kWall;
      } else if (ch >= '0' && ch <= '9') {
        auto& slot = spawns[ch - '0'];
        if (slot) {
          throw ParseError(std::string("duplicate spawn point '") + ch + "'",
                           line, col + 1);
        }
        slot = GridPos{map.height, col};
      } else {
        throw ParseError(std::string("unknown map character '") + ch + "'",
                         line, col + 1);
      }
      map.cells.push_back(cell);
    }
    ++map.height;
  }
  if (map.height == 0 || map.width == 0) throw ParseError("empty map", 1, 1);
  for (const auto& s : spawns) {
    if (s) map.spawn_points.push_back(*s);
  }
  return map;
}

HarvestMap LoadHarvestMap(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path, "cannot open map file");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  try {
    return ParseHarvestMap(buffer.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.detail(), e.line(), e.column());
  }
}

std::string_view DefaultHarvestMapText() { return kDefaultMapText; }

const HarvestMap& DefaultHarvestMap() {
  static const HarvestMap map = ParseHarvestMap(kDefaultMapText);
  return map;
}

RegrowthTable DefaultRegrowthTable() {
  RegrowthTable p{};
  for (int k = 0; k <= kRegrowthNeighbours; ++k) {
    p[k] = k == 0 ? 0.0 : k <= 2 ? 0.01 : k <= 4 ? 0.05 : 0.1;
  }
  return p;
}

void HarvestConfig::Validate() const {
  if (agents < 1) throw ConfigError("agents", "need at least one agent");
  if (horizon < 1) throw ConfigError("episode_length", "must be >= 1");
  if (map.width < 1 || map.height < 1 ||
      map.cells.size() != static_cast<std::size_t>(map.width * map.height)) {
    throw ConfigError("map", "malformed grid");
  }
  const auto free_cells = std::count(map.cells.begin(), map.cells.end(), Cell::kEmpty);
  if (free_cells < agents) throw ConfigError("agents", "more agents than free cells");
  if (regrowth[0] != 0.0) {
    throw ConfigError("regrowth", "p(0) must be 0 so depleted patches stay dead");
  }
  for (double p : regrowth) {
    if (!(p >= 0.0 && p <= 1.0)) throw ConfigError("regrowth", "probabilities must lie in [0, 1]");
  }
}

int HarvestState::apples_remaining() const {
  return static_cast<int>(std::count(grid.begin(), grid.end(), Cell::kApple));
}

int HarvestState::apples_consumed() const {
  return std::accumulate(apples_eaten.begin(), apples_eaten.end(), 0);
}

HarvestEnv::HarvestEnv(HarvestConfig config) : config_(std::move(config)) {
  config_.Validate();
  observations_.assign(config_.agents, Observation(kHarvestObservationSize));
}

void HarvestEnv::Reset(RandomStream& rng) {
  const HarvestMap& map = config_.map;
  state_.width = map.width;
  state_.height = map.height;
  state_.grid = map.cells;
  state_.timestep = 0;
  state_.apples_regrown = 0;
  state_.apples_eaten.assign(config_.agents, 0);
  state_.agent_headings.assign(config_.agents, Heading::kNorth);
  state_.agent_positions.assign(config_.agents, GridPos{});
  occupied_.assign(state_.grid.size(), 0);

  // Agents are exchangeable: spawn points are handed out in random order.
  std::vector<GridPos> spawns = map.spawn_points;
  for (std::size_t k = spawns.size(); k > 1; --k) {
    std::swap(spawns[k - 1], spawns[rng.Below(k)]);
  }
  for (int a = 0; a < config_.agents; ++a) {
    GridPos p;
    if (a < static_cast<int>(spawns.size())) {
      p = spawns[a];
    } else {
      std::vector<int> free;
      for (int idx = 0; idx < static_cast<int>(state_.grid.size()); ++idx) {
        if (state_.grid[idx] == Cell::kEmpty && !occupied_[idx]) free.push_back(idx);
      }
      const int idx = free[rng.Below(free.size())];
      p = GridPos{idx / state_.width, idx % state_.width};
    }
    state_.agent_positions[a] = p;
    occupied_[Index(p)] = 1;
    state_.agent_headings[a] = static_cast<Heading>(rng.Below(4));
  }
  state_.initial_apples = state_.apples_remaining();
  RecountNeighbours();
  Observe();
}

void HarvestEnv::set_state(HarvestState state) {
  if (static_cast<int>(state.agent_positions.size()) != config_.agents ||
      state.agent_headings.size() != state.agent_positions.size() ||
      state.apples_eaten.size() != state.agent_positions.size() ||
      state.grid.size() != static_cast<std::size_t>(state.width * state.height)) {
    throw ContractError("harvest state does not match the config");
  }
  state_ = std::move(state);
  occupied_.assign(state_.grid.size(), 0);
  for (const GridPos& p : state_.agent_positions) occupied_[Index(p)] = 1;
  RecountNeighbours();
  Observe();
}

void HarvestEnv::RecountNeighbours() {
  state_.neighbour_apples.assign(state_.grid.size(), 0);
  for (int r = 0; r < state_.height; ++r) {
    for (int c = 0; c < state_.width; ++c) {
      if (state_.grid[r * state_.width + c] == Cell::kApple) AdjustNeighbours({r, c}, +1);
    }
  }
}

void HarvestEnv::AdjustNeighbours(GridPos p, int delta) {
  for (const Offset& o : kNeighbourhood) {
    const int r = p.row + o.dr;
    const int c = p.col + o.dc;
    if (r < 0 || r >= state_.height || c < 0 || c >= state_.width) continue;
    auto& count = state_.neighbour_apples[r * state_.width + c];
    count = static_cast<std::uint8_t>(count + delta);
  }
}

double HarvestEnv::RegrowthProbability(GridPos cell) const {
  return config_.regrowth[state_.neighbour_apples[Index(cell)]];
}

bool HarvestEnv::Step(std::span<const Action> actions, RandomStream& rng,
                      std::vector<double>& rewards) {
  const int n = config_.agents;
  if (static_cast<int>(actions.size()) != n) {
    throw ContractError("harvest: expected " + std::to_string(n) +
                        " actions, got " + std::to_string(actions.size()));
  }
  rewards.assign(n, 0.0);

  // Sequential resolution in agent-index order: a move into a wall or an
  // occupied cell leaves the agent in place.
  for (int a = 0; a < n; ++a) {
    const int code = static_cast<int>(actions[a]);
    if (code < 0 || code >= kHarvestActionCount) {
      throw ContractError("harvest: action " + std::to_string(code) +
                          " outside the action set");
    }
    Heading& heading = state_.agent_headings[a];
    if (actions[a] == Action::kRotateLeft) {
      heading = static_cast<Heading>((static_cast<int>(heading) + 3) % 4);
      continue;
    }
    if (actions[a] == Action::kRotateRight) {
      heading = static_cast<Heading>((static_cast<int>(heading) + 1) % 4);
      continue;
    }
    const Offset o = MoveOffset(actions[a]);
    if (o.dr == 0 && o.dc == 0) continue;
    GridPos& pos = state_.agent_positions[a];
    const GridPos to{pos.row + o.dr, pos.col + o.dc};
    if (to.row < 0 || to.row >= state_.height || to.col < 0 || to.col >= state_.width) {
      continue;
    }
    const int idx = Index(to);
    if (state_.grid[idx] == Cell::kWall || occupied_[idx]) continue;
    occupied_[Index(pos)] = 0;
    occupied_[idx] = 1;
    pos = to;
    if (state_.grid[idx] == Cell::kApple) {
      state_.grid[idx] = Cell::kEmpty;
      AdjustNeighbours(to, -1);
      ++state_.apples_eaten[a];
      rewards[a] += 1.0;
    }
  }

  // Regrowth is decided on the post-movement snapshot, then applied.
  regrow_scratch_.clear();
  const int cells = static_cast<int>(state_.grid.size());
  for (int idx = 0; idx < cells; ++idx) {
    if (state_.grid[idx] != Cell::kEmpty || occupied_[idx]) continue;
    const double p = config_.regrowth[state_.neighbour_apples[idx]];
    if (p <= 0.0) continue;
    if (rng.Uniform() < p) regrow_scratch_.push_back(idx);
  }
  for (int idx : regrow_scratch_) {
    state_.grid[idx] = Cell::kApple;
    AdjustNeighbours({idx / state_.width, idx % state_.width}, +1);
  }
  state_.apples_regrown += static_cast<int>(regrow_scratch_.size());

  ++state_.timestep;
  Observe();
  return state_.timestep >= config_.horizon;
}

void HarvestEnv::Observe() {
  for (int a = 0; a < config_.agents; ++a) {
    Observation& obs = observations_[a];
    const GridPos self = state_.agent_positions[a];
    std::size_t w = 0;
    for (int dr = -kHarvestViewRadius; dr <= kHarvestViewRadius; ++dr) {
      for (int dc = -kHarvestViewRadius; dc <= kHarvestViewRadius; ++dc) {
        const int r = self.row + dr;
        const int c = self.col + dc;
        HarvestView v = HarvestView::kWall;
        if (r >= 0 && r < state_.height && c >= 0 && c < state_.width) {
          const int idx = r * state_.width + c;
          if (dr == 0 && dc == 0) {
            v = HarvestView::kSelf;
          } else if (occupied_[idx]) {
            v = HarvestView::kAgent;
          } else {
            v = static_cast<HarvestView>(static_cast<int>(state_.grid[idx]));
          }
        }
        obs[w++] = static_cast<double>(static_cast<int>(v));
      }
    }
    obs[w] = static_cast<double>(static_cast<int>(state_.agent_headings[a]));
  }
}

std::pair<HarvestState, std::vector<Observation>> ResetHarvest(
    const HarvestConfig& config, std::uint64_t seed) {
  HarvestEnv env(config);
  RandomStream rng(seed);
  env.Reset(rng);
  std::vector<Observation> obs;
  for (int i = 0; i < env.agents(); ++i) obs.push_back(env.observation(i));
  return {env.state(), std::move(obs)};
}

std::pair<HarvestState, StepOutcome> StepHarvest(const HarvestConfig& config,
                                                 const HarvestState& state,
                                                 std::span<const Action> actions,
                                                 RandomStream& rng) {
  HarvestEnv env(config);
  env.set_state(state);
  StepOutcome out;
  out.done = env.Step(actions, rng, out.rewards);
  for (int i = 0; i < env.agents(); ++i) out.observations.push_back(env.observation(i));
  return {env.state(), std::move(out)};
}

}  // namespace shapmarl
