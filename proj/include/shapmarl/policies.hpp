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

#ifndef SHAPMARL_POLICIES_HPP_
#define SHAPMARL_POLICIES_HPP_

#include <optional>
#include <span>
#include <string_view>

#include "shapmarl/environment.hpp"
#include "shapmarl/random.hpp"

namespace shapmarl {

enum class PolicyKind { kPursuit, kEvader, kHarvester, kLazy };

std::string_view ToString(PolicyKind kind);
std::optional<PolicyKind> ParsePolicyKind(std::string_view name);

// Scripted stand-in for a trained policy. `skill` is the probability of
// acting on the scripted rule instead of uniformly at random; `speed` is the
// movement multiplier applied by the predator-prey arena.
struct PolicySpec {
  PolicyKind kind = PolicyKind::kLazy;
  double skill = 1.0;
  double speed = 1.0;

  void Validate() const;
};

// Pursuit and Evader read predator-prey observations, Harvester reads
// harvest observations, Lazy ignores its input and always returns noop.
// Throws ContractError on an observation of the wrong shape.
//
// Every non-lazy call draws exactly one uniform to decide between the
// scripted rule and a random action, so stream consumption is
// independent of the observation.
Action PolicyAct(const PolicySpec& spec, std::span<const double> observation,
                 RandomStream& rng);

enum class ExclusionMode { kReplace, kRandom, kNoOp };

std::string_view ToString(ExclusionMode mode);
std::optional<ExclusionMode> ParseExclusionMode(std::string_view name);

// Action taken on behalf of an agent outside the coalition.
//   kNoOp    -> noop
//   kRandom  -> uniform over [0, action_count)
//   kReplace -> the action of a uniformly chosen policy from
//               `present_same_role` given the excluded agent's observation;
//               falls back to kRandom when no same-role agent is present.
// The replacement is drawn afresh at every call (every step).
Action SubstituteAction(ExclusionMode mode,
                        std::span<const PolicySpec> present_same_role,
                        std::span<const double> observation, int action_count,
                        RandomStream& rng);

}  // namespace shapmarl

#endif  // SHAPMARL_POLICIES_HPP_
