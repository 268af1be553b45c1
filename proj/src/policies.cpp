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

#include "shapmarl/policies.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <string>

#include "shapmarl/errors.hpp"
#include "shapmarl/harvest.hpp"
#include "shapmarl/predator_prey.hpp"

namespace shapmarl {

namespace {

constexpr double kArenaHalf = 1.0;

// Parsed view over a predator-prey observation vector.
struct ParticleView {
  std::span<const double> obs;
  int agents = 0;
  int obstacles = 0;

  double self_x() const { return obs[2]; }
  double self_y() const { return obs[3]; }
  double stride() const { return obs[7]; }
  // Other agents j in [0, agents-1).
  const double* other(int j) const {
    return obs.data() + 2 + kPredatorPreyAgentBlock * (1 + j);
  }
  const double* obstacle(int k) const {
    return obs.data() + 2 + kPredatorPreyAgentBlock * agents +
           kPredatorPreyObstacleBlock * k;
  }
  // True if a point given relative to self lies inside an obstacle.
  bool Blocked(double rx, double ry) const {
    for (int k = 0; k < obstacles; ++k) {
      const double* o = obstacle(k);
      if (std::hypot(rx - o[0], ry - o[1]) < o[2]) return true;
    }
    return false;
  }
};

ParticleView ParseParticle(std::span<const double> obs) {
  if (obs.size() < 2) throw ContractError("predator-prey observation too short");
  const double n = obs[0];
  const double k = obs[1];
  if (n < 1 || k < 0 || n != std::floor(n) || k != std::floor(k) ||
      obs.size() != PredatorPreyObservationSize(static_cast<int>(n),
                                                static_cast<int>(k))) {
    throw ContractError("observation of size " + std::to_string(obs.size()) +
                        " is not a predator-prey observation");
  }
  return ParticleView{obs, static_cast<int>(n), static_cast<int>(k)};
}

Action RandomMove(RandomStream& rng) {
  return static_cast<Action>(rng.Below(kMoveActionCount));
}

Action AxisStep(double d, bool vertical) {
  if (vertical) return d >= 0.0 ? Action::kUp : Action::kDown;
  return d >= 0.0 ? Action::kRight : Action::kLeft;
}

void StepVector(Action a, double stride, double& dx, double& dy) {
  dx = dy = 0.0;
  switch (a) {
    case Action::kUp:
      dy = stride;
      break;
    case Action::kDown:
      dy = -stride;
      break;
    case Action::kLeft:
      dx = -stride;
      break;
    case Action::kRight:
      dx = stride;
      break;
    default:
      break;
  }
}

Action PursuitRule(const ParticleView& v) {
  int target = -1;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j + 1 < v.agents; ++j) {
    const double* o = v.other(j);
    if (static_cast<int>(o[4]) != static_cast<int>(Role::kPrey)) continue;
    const double d = std::hypot(o[0], o[1]);
    if (d < best) {
      best = d;
      target = j;
    }
  }
  if (target < 0) return Action::kNoop;
  const double dx = v.other(target)[0];
  const double dy = v.other(target)[1];
  const bool vertical_first = std::abs(dy) > std::abs(dx);
  const Action primary = vertical_first ? AxisStep(dy, true) : AxisStep(dx, false);
  double mx, my;
  StepVector(primary, v.stride(), mx, my);
  if (!v.Blocked(mx, my)) return primary;
  // Detour along the other axis around the obstacle.
  return vertical_first ? AxisStep(dx, false) : AxisStep(dy, true);
}

Action EvaderRule(const ParticleView& v) {
  Action best_action = Action::kNoop;
  double best_score = -1.0;
  for (int a = 0; a < kMoveActionCount; ++a) {
    double mx, my;
    StepVector(static_cast<Action>(a), v.stride(), mx, my);
    // Mirror the arena: clamp at the boundary, stay put on an obstacle.
    const double nx = std::clamp(v.self_x() + mx, -kArenaHalf, kArenaHalf);
    const double ny = std::clamp(v.self_y() + my, -kArenaHalf, kArenaHalf);
    double rx = nx - v.self_x();
    double ry = ny - v.self_y();
    if (v.Blocked(rx, ry)) rx = ry = 0.0;
    double score = std::numeric_limits<double>::infinity();
    for (int j = 0; j + 1 < v.agents; ++j) {
      const double* o = v.other(j);
      if (static_cast<int>(o[4]) != static_cast<int>(Role::kPredator)) continue;
      score = std::min(score, std::hypot(o[0] - rx, o[1] - ry));
    }
    if (score > best_score) {
      best_score = score;
      best_action = static_cast<Action>(a);
    }
  }
  return best_action;
}

// Window cells ordered by distance from the centre, nearest first.
struct WindowOffset {
  int dr;
  int dc;
};

constexpr int kWindowCells = kHarvestViewSide * kHarvestViewSide;

const std::array<WindowOffset, kWindowCells - 1>& OffsetsByDistance() {
  static const auto offsets = [] {
    std::array<WindowOffset, kWindowCells - 1> out{};
    std::size_t w = 0;
    for (int dr = -kHarvestViewRadius; dr <= kHarvestViewRadius; ++dr) {
      for (int dc = -kHarvestViewRadius; dc <= kHarvestViewRadius; ++dc) {
        if (dr != 0 || dc != 0) out[w++] = {dr, dc};
      }
    }
    std::stable_sort(out.begin(), out.end(), [](WindowOffset a, WindowOffset b) {
      return a.dr * a.dr + a.dc * a.dc < b.dr * b.dr + b.dc * b.dc;
    });
    return out;
  }();
  return offsets;
}

struct GridView {
  std::span<const double> obs;

  bool Inside(int dr, int dc) const {
    return std::abs(dr) <= kHarvestViewRadius && std::abs(dc) <= kHarvestViewRadius;
  }
  HarvestView At(int dr, int dc) const {
    const int r = dr + kHarvestViewRadius;
    const int c = dc + kHarvestViewRadius;
    return static_cast<HarvestView>(static_cast<int>(obs[r * kHarvestViewSide + c]));
  }
  // True when the apple at (dr, dc) has no other apple within regrowth
  // range, i.e. eating it would leave the patch barren. Unseen cells count
  // as apples when `optimistic`.
  bool LastApple(int dr, int dc, bool optimistic) const {
    static constexpr std::array<WindowOffset, kRegrowthNeighbours> kRing = {{
        {-2, 0}, {-1, -1}, {-1, 0}, {-1, 1}, {0, -2}, {0, -1},
        {0, 1},  {0, 2},   {1, -1}, {1, 0},  {1, 1},  {2, 0},
    }};
    for (const WindowOffset& o : kRing) {
      const int r = dr + o.dr;
      const int c = dc + o.dc;
      if (!Inside(r, c)) {
        if (optimistic) return false;
        continue;
      }
      if (At(r, c) == HarvestView::kApple) return false;
    }
    return true;
  }
};

Action HarvesterRule(const GridView& g, bool conserve, RandomStream& rng) {
  const WindowOffset* target = nullptr;
  for (const WindowOffset& o : OffsetsByDistance()) {
    if (g.At(o.dr, o.dc) != HarvestView::kApple) continue;
    if (conserve && g.LastApple(o.dr, o.dc, /*optimistic=*/true)) continue;
    target = &o;
    break;
  }
  if (target != nullptr) {
    const int dr = target->dr;
    const int dc = target->dc;
    const bool vertical_first = std::abs(dr) >= std::abs(dc);
    std::array<Action, 2> options{};
    std::array<WindowOffset, 2> steps{};
    int count = 0;
    auto add_vertical = [&] {
      if (dr == 0) return;
      options[count] = dr < 0 ? Action::kUp : Action::kDown;
      steps[count++] = {dr < 0 ? -1 : 1, 0};
    };
    auto add_horizontal = [&] {
      if (dc == 0) return;
      options[count] = dc < 0 ? Action::kLeft : Action::kRight;
      steps[count++] = {0, dc < 0 ? -1 : 1};
    };
    if (vertical_first) {
      add_vertical();
      add_horizontal();
    } else {
      add_horizontal();
      add_vertical();
    }
    for (int k = 0; k < count; ++k) {
      const HarvestView next = g.At(steps[k].dr, steps[k].dc);
      if (next == HarvestView::kEmpty) return options[k];
      if (next == HarvestView::kApple &&
          !(conserve && g.LastApple(steps[k].dr, steps[k].dc, false))) {
        return options[k];
      }
    }
  }
  // Nothing worth taking in view (or the way is blocked): wander.
  return static_cast<Action>(1 + rng.Below(4));
}

}  // namespace

std::string_view ToString(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::kPursuit:
      return "pursuit";
    case PolicyKind::kEvader:
      return "evader";
    case PolicyKind::kHarvester:
      return "harvester";
    case PolicyKind::kLazy:
      return "lazy";
  }
  return "unknown";
}

std::optional<PolicyKind> ParsePolicyKind(std::string_view name) {
  for (PolicyKind k : {PolicyKind::kPursuit, PolicyKind::kEvader,
                       PolicyKind::kHarvester, PolicyKind::kLazy}) {
    if (ToString(k) == name) return k;
  }
  return std::nullopt;
}

void PolicySpec::Validate() const {
  if (!(skill >= 0.0 && skill <= 1.0)) throw ConfigError("skill", "must lie in [0, 1]");
  if (!(speed > 0.0)) throw ConfigError("speed", "must be > 0");
}

Action PolicyAct(const PolicySpec& spec, std::span<const double> observation,
                 RandomStream& rng) {
  switch (spec.kind) {
    case PolicyKind::kLazy:
      return Action::kNoop;
    case PolicyKind::kPursuit: {
      const ParticleView v = ParseParticle(observation);
      if (!rng.Bernoulli(spec.skill)) return RandomMove(rng);
      return PursuitRule(v);
    }
    case PolicyKind::kEvader: {
      const ParticleView v = ParseParticle(observation);
      if (!rng.Bernoulli(spec.skill)) return RandomMove(rng);
      return EvaderRule(v);
    }
    case PolicyKind::kHarvester: {
      if (observation.size() != kHarvestObservationSize) {
        throw ContractError("observation of size " +
                            std::to_string(observation.size()) +
                            " is not a harvest observation");
      }
      if (!rng.Bernoulli(spec.skill)) {
        return static_cast<Action>(rng.Below(kHarvestActionCount));
      }
      return HarvesterRule(GridView{observation}, spec.skill > 0.5, rng);
    }
  }
  throw ContractError("unknown policy kind");
}

std::string_view ToString(ExclusionMode mode) {
  switch (mode) {
    case ExclusionMode::kReplace:
      return "replace";
    case ExclusionMode::kRandom:
      return "random";
    case ExclusionMode::kNoOp:
      return "noop";
  }
  return "unknown";
}

std::optional<ExclusionMode> ParseExclusionMode(std::string_view name) {
  for (ExclusionMode m :
       {ExclusionMode::kReplace, ExclusionMode::kRandom, ExclusionMode::kNoOp}) {
    if (ToString(m) == name) return m;
  }
  return std::nullopt;
}

Action SubstituteAction(ExclusionMode mode,
                        std::span<const PolicySpec> present_same_role,
                        std::span<const double> observation, int action_count,
                        RandomStream& rng) {
  if (action_count < 1) throw ContractError("action set must be non-empty");
  switch (mode) {
    case ExclusionMode::kNoOp:
      return Action::kNoop;
    case ExclusionMode::kReplace:
      if (!present_same_role.empty()) {
        const PolicySpec& stand_in =
            present_same_role[rng.Below(present_same_role.size())];
        const Action a = PolicyAct(stand_in, observation, rng);
        if (static_cast<int>(a) < action_count) return a;
        return Action::kNoop;
      }
      [[fallthrough]];
    case ExclusionMode::kRandom:
      return static_cast<Action>(rng.Below(static_cast<std::uint64_t>(action_count)));
  }
  return Action::kNoop;
}

}  // namespace shapmarl
