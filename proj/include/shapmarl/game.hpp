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

#ifndef SHAPMARL_GAME_HPP_
#define SHAPMARL_GAME_HPP_

#include <cstdint>
#include <functional>
#include <string_view>
#include <vector>

#include "shapmarl/coalition.hpp"
#include "shapmarl/random.hpp"

namespace shapmarl {

// A coalitional game (N, v). gain() must be safe to call concurrently; any
// randomness it needs comes from the stream it is handed.
class CoalitionalGame {
 public:
  virtual ~CoalitionalGame() = default;

  virtual int players() const = 0;
  virtual double gain(const Coalition& coalition, RandomStream& rng) const = 0;
  // True when gain ignores its randomness stream.
  virtual bool deterministic() const { return false; }
};

// Adapts a plain function of the coalition into a deterministic game.
class FunctionGame final : public CoalitionalGame {
 public:
  using Payout = std::function<double(const Coalition&)>;

  FunctionGame(int n, Payout payout) : n_(n), payout_(std::move(payout)) {}

  int players() const override { return n_; }
  double gain(const Coalition& coalition, RandomStream&) const override {
    return payout_(coalition);
  }
  bool deterministic() const override { return true; }

 private:
  int n_;
  Payout payout_;
};

// Deterministic game backed by a full table of 2^n payouts indexed by mask.
class TableGame final : public CoalitionalGame {
 public:
  TableGame(int n, std::vector<double> payouts);

  int players() const override { return n_; }
  double gain(const Coalition& coalition, RandomStream&) const override {
    return payouts_[coalition.mask()];
  }
  bool deterministic() const override { return true; }
  const std::vector<double>& payouts() const noexcept { return payouts_; }

 private:
  int n_;
  std::vector<double> payouts_;
};

struct Rational {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 1;

  double ToDouble() const {
    return static_cast<double>(numerator) / static_cast<double>(denominator);
  }
  friend bool operator==(const Rational&, const Rational&) = default;
};

// |S|!(n-|S|-1)!/n! in lowest terms. Requires n >= 1 and 0 <= s < n.
Rational ShapleyWeight(int n, int s);

enum class EstimateMethod { kExact, kMonteCarlo };

std::string_view ToString(EstimateMethod method);

struct ShapleyEstimate {
  std::vector<double> values;
  std::vector<double> stderrs;
  std::vector<std::uint64_t> samples;  // per-player contributing samples
  EstimateMethod method = EstimateMethod::kExact;
  std::uint64_t monte_carlo_draws = 0;  // M; 0 for exact estimates
  std::uint64_t evaluations = 0;        // gain() calls performed

  int players() const noexcept { return static_cast<int>(values.size()); }
};

struct ExactOptions {
  int samples_per_coalition = 1;
  std::uint64_t seed = 0;
  int workers = 1;
  // Upper bound on gain() calls (2^n * samples_per_coalition).
  std::uint64_t max_evaluations = std::uint64_t{1} << 24;
};

// Exact Shapley values from all 2^n coalitions. Each coalition mean is
// computed once and shared across players. For stochastic games the reported
// standard error propagates the per-coalition sample variances.
ShapleyEstimate ExactShapley(const CoalitionalGame& game,
                             const ExactOptions& options = {});

struct MonteCarloOptions {
  std::uint64_t draws = 1000;  // M
  std::uint64_t seed = 0;
  int workers = 1;
};

struct MonteCarloResult {
  ShapleyEstimate estimate;
  // marginals[i][m] = v(S_m ∪ {i}) - v(S_m) for draw m of player i.
  std::vector<std::vector<double>> marginals;
};

// Permutation-sampling estimator: for each player and draw, S is the set of
// predecessors of the player in a uniform random ordering, and v(S ∪ {i}),
// v(S) are evaluated on independent streams keyed by (player, draw, side).
// Performs exactly 2 * M * n gain evaluations.
MonteCarloResult MonteCarloShapleyWithMarginals(const CoalitionalGame& game,
                                                const MonteCarloOptions& options);

ShapleyEstimate MonteCarloShapley(const CoalitionalGame& game,
                                  const MonteCarloOptions& options);

// Stream keys shared with callers that need to reproduce individual draws.
inline constexpr std::uint64_t kPermutationStreamTag = 0x7065726d;  // "perm"
inline constexpr std::uint64_t kRolloutStreamTag = 0x726f6c6c;      // "roll"
inline constexpr std::uint64_t kExactStreamTag = 0x65786163;        // "exac"
inline constexpr std::uint64_t kSideWith = 1;
inline constexpr std::uint64_t kSideWithout = 0;

// The coalition drawn for (player, draw) under `seed`.
Coalition SampleMonteCarloCoalition(int n, PlayerIndex player,
                                    std::uint64_t draw, std::uint64_t seed);

}  // namespace shapmarl

#endif  // SHAPMARL_GAME_HPP_
