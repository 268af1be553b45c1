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

// Axiom and estimator properties over randomly generated games.

#include <cmath>
#include <random>
#include <vector>

#include "gtest/gtest.h"
#include "shapmarl/game.hpp"
#include "support/oracles.hpp"

namespace shapmarl {
namespace {

TableGame ToTable(const testing::RandomGame& g) { return TableGame(g.n, g.table); }

class RandomGameTest : public ::testing::TestWithParam<int> {};

TEST_P(RandomGameTest, MatchesPermutationOracle) {
  const int n = GetParam();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto g = testing::MakeRandomGame(n, 1000 * n + seed, 2.0, 0.3);
    const auto est = ExactShapley(ToTable(g));
    const auto oracle = testing::PermutationShapley(n, g);
    for (int i = 0; i < n; ++i) EXPECT_NEAR(est.values[i], oracle[i], 1e-9);
  }
}

TEST_P(RandomGameTest, Efficiency) {
  const int n = GetParam();
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const auto g = testing::MakeRandomGame(n, seed, 1.0, 1.5);
    const auto est = ExactShapley(ToTable(g));
    double sum = 0.0;
    for (double v : est.values) sum += v;
    const double target = g.table.back() - g.table.front();
    EXPECT_NEAR(sum, target, 1e-9 * std::max(1.0, std::abs(target)));
  }
}

TEST_P(RandomGameTest, SymmetryAndDummy) {
  const int n = GetParam();
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    auto g = testing::MakeRandomGame(n, 77 + seed);
    // Make players 0 and 1 interchangeable and the last player a dummy.
    const std::uint64_t dummy = std::uint64_t{1} << (n - 1);
    for (std::uint64_t m = 0; m < g.table.size(); ++m) {
      const std::uint64_t swapped = (m & ~std::uint64_t{3}) | ((m & 1) << 1) | ((m >> 1) & 1);
      if (swapped < m) g.table[m] = g.table[swapped];
    }
    if (n > 2) {
      for (std::uint64_t m = 0; m < g.table.size(); ++m) {
        if (m & dummy) g.table[m] = g.table[m & ~dummy];
      }
    }
    const auto est = ExactShapley(ToTable(g));
    EXPECT_NEAR(est.values[0], est.values[1], 1e-9);
    if (n > 2) {
      EXPECT_EQ(est.values[n - 1], 0.0);
      const auto mc = MonteCarloShapley(ToTable(g), MonteCarloOptions{100, seed, 1});
      EXPECT_EQ(mc.values[n - 1], 0.0);
    }
  }
}

TEST_P(RandomGameTest, LinearityAndScaling) {
  const int n = GetParam();
  std::mt19937_64 gen(n);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto v = testing::MakeRandomGame(n, 500 + seed);
    const auto w = testing::MakeRandomGame(n, 900 + seed);
    const double a = std::uniform_real_distribution<double>(-3, 3)(gen);
    const double b = std::uniform_real_distribution<double>(-3, 3)(gen);
    std::vector<double> mix(v.table.size());
    for (std::size_t m = 0; m < mix.size(); ++m) mix[m] = a * v.table[m] + b * w.table[m];
    const auto pv = ExactShapley(ToTable(v)).values;
    const auto pw = ExactShapley(ToTable(w)).values;
    const auto pm = ExactShapley(TableGame(n, mix)).values;
    for (int i = 0; i < n; ++i) EXPECT_NEAR(pm[i], a * pv[i] + b * pw[i], 1e-9);

    std::vector<double> scaled(v.table);
    for (double& x : scaled) x *= 2.5;
    const auto ps = ExactShapley(TableGame(n, scaled)).values;
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(ps[i], 2.5 * pv[i], 1e-9);
      for (int j = 0; j < n; ++j) EXPECT_EQ(pv[i] < pv[j], ps[i] < ps[j]);
    }
  }
}

INSTANTIATE_TEST_SUITE_P(PlayerCounts, RandomGameTest, ::testing::Range(2, 9));

TEST(MonteCarloConsistencyTest, ErrorShrinksWithDraws) {
  double mae_small = 0.0, mae_large = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto g = testing::MakeRandomGame(6, 3000 + seed, 2.0);
    const TableGame table = ToTable(g);
    const auto exact = ExactShapley(table).values;
    const auto small = MonteCarloShapley(table, MonteCarloOptions{50, seed, 1}).values;
    const auto large = MonteCarloShapley(table, MonteCarloOptions{2000, seed, 1}).values;
    for (int i = 0; i < 6; ++i) {
      mae_small += std::abs(small[i] - exact[i]);
      mae_large += std::abs(large[i] - exact[i]);
    }
  }
  EXPECT_LT(mae_large, mae_small);
}

TEST(MonteCarloConsistencyTest, WithinFourStderrAtLeast99Percent) {
  int total = 0, inside = 0;
  for (std::uint64_t seed = 0; seed < 60; ++seed) {
    const int n = 3 + static_cast<int>(seed % 6);
    const auto g = testing::MakeRandomGame(n, 7000 + seed, 2.0);
    const TableGame table = ToTable(g);
    const auto exact = ExactShapley(table).values;
    const auto mc = MonteCarloShapley(table, MonteCarloOptions{1000, seed, 1});
    for (int i = 0; i < n; ++i) {
      ++total;
      inside += std::abs(mc.values[i] - exact[i]) <= 4.0 * mc.stderrs[i] + 1e-12;
    }
  }
  EXPECT_GE(static_cast<double>(inside), 0.99 * total);
}

}  // namespace
}  // namespace shapmarl
