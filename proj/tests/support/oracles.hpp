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

// Independent reference implementations used by the tests.
#ifndef SHAPMARL_TESTS_SUPPORT_ORACLES_HPP_
#define SHAPMARL_TESTS_SUPPORT_ORACLES_HPP_

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <random>
#include <vector>

namespace shapmarl::testing {

using MaskPayout = std::function<double(std::uint64_t)>;

// Average marginal contribution over all n! orderings.
inline std::vector<double> PermutationShapley(int n, const MaskPayout& v) {
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> phi(n, 0.0);
  double count = 0.0;
  do {
    std::uint64_t mask = 0;
    double before = v(0);
    for (int p : order) {
      mask |= std::uint64_t{1} << p;
      const double after = v(mask);
      phi[p] += after - before;
      before = after;
    }
    count += 1.0;
  } while (std::next_permutation(order.begin(), order.end()));
  for (double& x : phi) x /= count;
  return phi;
}

// Random deterministic game: additive weights, pairwise synergies and a
// coalition-specific noise term, with v(empty) = `empty_value`.
struct RandomGame {
  int n = 0;
  std::vector<double> table;

  double operator()(std::uint64_t mask) const { return table[mask]; }
};

inline RandomGame MakeRandomGame(int n, std::uint64_t seed, double noise = 1.0,
                                 double empty_value = 0.0) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> weight(0.5, 5.0);
  std::uniform_real_distribution<double> synergy(-1.0, 1.0);
  std::uniform_real_distribution<double> jitter(-noise, noise);
  std::vector<double> w(n);
  for (double& x : w) x = weight(gen);
  std::vector<std::vector<double>> pair(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pair[i][j] = synergy(gen);
  }
  RandomGame g;
  g.n = n;
  g.table.assign(std::size_t{1} << n, 0.0);
  for (std::uint64_t mask = 0; mask < g.table.size(); ++mask) {
    double v = empty_value;
    for (int i = 0; i < n; ++i) {
      if (!((mask >> i) & 1)) continue;
      v += w[i];
      for (int j = i + 1; j < n; ++j) {
        if ((mask >> j) & 1) v += pair[i][j];
      }
    }
    if (mask != 0) v += jitter(gen);
    g.table[mask] = v;
  }
  return g;
}

// Pearson chi-square statistic of observed counts against a uniform law.
inline double ChiSquareUniform(const std::vector<int>& counts) {
  const double total = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double expected = total / static_cast<double>(counts.size());
  double stat = 0.0;
  for (int c : counts) stat += (c - expected) * (c - expected) / expected;
  return stat;
}

// Upper 1% critical values of the chi-square law by degrees of freedom.
inline double ChiSquareCritical01(int dof) {
  static const double kTable[] = {0.0,    6.635,  9.210,  11.345, 13.277,
                                  15.086, 16.812, 18.475, 20.090, 21.666};
  return kTable[dof];
}

}  // namespace shapmarl::testing

#endif  // SHAPMARL_TESTS_SUPPORT_ORACLES_HPP_
