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

#include "shapmarl/game.hpp"

#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "shapmarl/errors.hpp"
#include "shapmarl/parallel.hpp"

namespace shapmarl {

namespace {

std::uint64_t Binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (int j = 1; j <= k; ++j) {
    // Exact at every step: result * (n - k + j) is divisible by j.
    result = result * static_cast<std::uint64_t>(n - k + j) /
             static_cast<std::uint64_t>(j);
  }
  return result;
}

void CheckPlayers(const CoalitionalGame& game) {
  if (game.players() < 1) throw DomainError("game must have at least 1 player");
  if (game.players() > kMaxCoalitionPlayers) {
    throw CapacityError("game has more than " +
                        std::to_string(kMaxCoalitionPlayers) + " players");
  }
}

struct MeanVar {
  double mean = 0.0;
  double variance = 0.0;  // unbiased sample variance; 0 for a single sample
};

MeanVar Summarize(const double* begin, std::size_t count) {
  MeanVar out;
  double sum = 0.0;
  for (std::size_t k = 0; k < count; ++k) sum += begin[k];
  out.mean = sum / static_cast<double>(count);
  if (count > 1) {
    double ss = 0.0;
    for (std::size_t k = 0; k < count; ++k) {
      const double d = begin[k] - out.mean;
      ss += d * d;
    }
    out.variance = ss / static_cast<double>(count - 1);
  }
  return out;
}

}  // namespace

TableGame::TableGame(int n, std::vector<double> payouts)
    : n_(n), payouts_(std::move(payouts)) {
  if (n < 0 || n > kMaxEnumerationPlayers) {
    throw CapacityError("table game size " + std::to_string(n) +
                        " outside supported range");
  }
  if (payouts_.size() != (std::size_t{1} << n)) {
    throw ContractError("table game needs 2^n payouts, got " +
                        std::to_string(payouts_.size()));
  }
}

Rational ShapleyWeight(int n, int s) {
  if (n < 1) throw DomainError("shapley weight needs n >= 1");
  if (s < 0 || s >= n) {
    throw DomainError("coalition size " + std::to_string(s) +
                      " outside [0, " + std::to_string(n - 1) + "]");
  }
  if (n > kMaxEnumerationPlayers) {
    throw CapacityError("shapley weight limited to n <= " +
                        std::to_string(kMaxEnumerationPlayers));
  }
  // s!(n-s-1)!/n! = 1 / (n * C(n-1, s)).
  return Rational{1, static_cast<std::uint64_t>(n) * Binomial(n - 1, s)};
}

std::string_view ToString(EstimateMethod method) {
  return method == EstimateMethod::kExact ? "exact" : "monte_carlo";
}

ShapleyEstimate ExactShapley(const CoalitionalGame& game,
                             const ExactOptions& options) {
  CheckPlayers(game);
  const int n = game.players();
  if (options.samples_per_coalition < 1) {
    throw DomainError("samples_per_coalition must be >= 1");
  }
  if (n > kMaxEnumerationPlayers) {
    throw CapacityError("exact Shapley limited to " +
                        std::to_string(kMaxEnumerationPlayers) + " players");
  }
  const std::uint64_t coalitions = std::uint64_t{1} << n;
  const auto per = static_cast<std::uint64_t>(options.samples_per_coalition);
  if (coalitions > options.max_evaluations / per) {
    throw CapacityError("exact Shapley needs " + std::to_string(coalitions) +
                        " x " + std::to_string(per) +
                        " evaluations, budget is " +
                        std::to_string(options.max_evaluations) +
                        "; use the Monte Carlo estimator");
  }

  std::vector<double> raw(coalitions * per);
  ParallelFor(raw.size(), options.workers, [&](std::size_t k) {
    const std::uint64_t mask = k / per;
    const std::uint64_t sample = k % per;
    RandomStream rng(DeriveSeed(options.seed, {kExactStreamTag, mask, sample}));
    raw[k] = game.gain(Coalition(n, mask), rng);
  });

  std::vector<MeanVar> stats(coalitions);
  for (std::uint64_t mask = 0; mask < coalitions; ++mask) {
    stats[mask] = Summarize(raw.data() + mask * per, per);
  }
  const bool zero_noise = game.deterministic() || per == 1;

  ShapleyEstimate est;
  est.method = EstimateMethod::kExact;
  est.values.assign(n, 0.0);
  est.stderrs.assign(n, 0.0);
  est.samples.assign(n, coalitions * per);
  est.evaluations = raw.size();

  std::vector<Rational> weights(n);
  for (int s = 0; s < n; ++s) weights[s] = ShapleyWeight(n, s);

  for (int i = 0; i < n; ++i) {
    const std::uint64_t bit = std::uint64_t{1} << i;
    double value = 0.0;
    double variance = 0.0;
    for (std::uint64_t mask = 0; mask < coalitions; ++mask) {
      if (mask & bit) continue;
      const Rational& w = weights[std::popcount(mask)];
      const double delta = stats[mask | bit].mean - stats[mask].mean;
      value += delta * static_cast<double>(w.numerator) /
               static_cast<double>(w.denominator);
      if (!zero_noise) {
        const double wd = w.ToDouble();
        variance += wd * wd *
                    (stats[mask | bit].variance + stats[mask].variance) /
                    static_cast<double>(per);
      }
    }
    est.values[i] = value;
    est.stderrs[i] = std::sqrt(variance);
  }
  return est;
}

Coalition SampleMonteCarloCoalition(int n, PlayerIndex player,
                                    std::uint64_t draw, std::uint64_t seed) {
  RandomStream rng(DeriveSeed(
      seed, {kPermutationStreamTag, static_cast<std::uint64_t>(player), draw}));
  std::vector<PlayerIndex> order(n);
  std::iota(order.begin(), order.end(), 0);
  for (int k = n - 1; k > 0; --k) {
    const auto j = static_cast<int>(rng.Below(static_cast<std::uint64_t>(k) + 1));
    std::swap(order[k], order[j]);
  }
  Coalition predecessors(n);
  for (PlayerIndex p : order) {
    if (p == player) break;
    predecessors = predecessors.With(p);
  }
  return predecessors;
}

MonteCarloResult MonteCarloShapleyWithMarginals(
    const CoalitionalGame& game, const MonteCarloOptions& options) {
  CheckPlayers(game);
  if (options.draws < 1) throw DomainError("Monte Carlo draw count M must be >= 1");
  const int n = game.players();
  const std::uint64_t m_draws = options.draws;
  const std::uint64_t total = 2 * m_draws * static_cast<std::uint64_t>(n);

  // Slot layout: ((player * M) + draw) * 2 + side.
  std::vector<double> payouts(total);
  ParallelFor(total, options.workers, [&](std::size_t k) {
    const std::uint64_t side = k % 2;
    const std::uint64_t draw = (k / 2) % m_draws;
    const auto player = static_cast<PlayerIndex>(k / 2 / m_draws);
    const Coalition without =
        SampleMonteCarloCoalition(n, player, draw, options.seed);
    const Coalition coalition = side == kSideWith ? without.With(player) : without;
    RandomStream rng(DeriveSeed(
        options.seed, {kRolloutStreamTag, static_cast<std::uint64_t>(player),
                       draw, side}));
    payouts[k] = game.gain(coalition, rng);
  });

  MonteCarloResult result;
  ShapleyEstimate& est = result.estimate;
  est.method = EstimateMethod::kMonteCarlo;
  est.monte_carlo_draws = m_draws;
  est.evaluations = total;
  est.values.assign(n, 0.0);
  est.stderrs.assign(n, 0.0);
  est.samples.assign(n, m_draws);
  result.marginals.assign(n, std::vector<double>(m_draws));

  for (int i = 0; i < n; ++i) {
    auto& marg = result.marginals[i];
    for (std::uint64_t m = 0; m < m_draws; ++m) {
      const std::size_t base = (static_cast<std::size_t>(i) * m_draws + m) * 2;
      marg[m] = payouts[base + kSideWith] - payouts[base + kSideWithout];
    }
    const MeanVar s = Summarize(marg.data(), marg.size());
    est.values[i] = s.mean;
    est.stderrs[i] = std::sqrt(s.variance / static_cast<double>(m_draws));
  }
  return result;
}

ShapleyEstimate MonteCarloShapley(const CoalitionalGame& game,
                                  const MonteCarloOptions& options) {
  return MonteCarloShapleyWithMarginals(game, options).estimate;
}

}  // namespace shapmarl
