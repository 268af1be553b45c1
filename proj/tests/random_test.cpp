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

#include "shapmarl/random.hpp"

#include <set>
#include <vector>

#include "gtest/gtest.h"
#include "support/oracles.hpp"

namespace shapmarl {
namespace {

TEST(DeriveSeedTest, DependsOnEveryKeyComponent) {
  std::set<std::uint64_t> seen;
  for (std::uint64_t p = 0; p < 4; ++p) {
    for (std::uint64_t d = 0; d < 50; ++d) {
      for (std::uint64_t side = 0; side < 2; ++side) {
        seen.insert(DeriveSeed(9, {p, d, side}));
      }
    }
  }
  EXPECT_EQ(seen.size(), 400u);
  EXPECT_NE(DeriveSeed(1, {2, 3}), DeriveSeed(1, {3, 2}));
  EXPECT_NE(DeriveSeed(1, {2}), DeriveSeed(2, {2}));
  EXPECT_EQ(DeriveSeed(5, {7, 8}), DeriveSeed(5, {7, 8}));
}

TEST(RandomStreamTest, SameSeedSameSequence) {
  RandomStream a(42), b(42);
  for (int k = 0; k < 100; ++k) EXPECT_EQ(a(), b());
}

TEST(RandomStreamTest, SubstreamDoesNotAdvanceParent) {
  RandomStream a(3), b(3);
  RandomStream child = a.Substream({1, 2});
  child();
  EXPECT_EQ(a(), b());
}

TEST(RandomStreamTest, UniformStaysInUnitInterval) {
  RandomStream rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double u = rng.Uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
  }
}

TEST(RandomStreamTest, BelowIsUniform) {
  RandomStream rng(11);
  std::vector<int> counts(7, 0);
  for (int k = 0; k < 14000; ++k) ++counts[rng.Below(7)];
  EXPECT_LT(testing::ChiSquareUniform(counts), testing::ChiSquareCritical01(6));
}

TEST(RandomStreamTest, BernoulliExtremes) {
  RandomStream rng(5);
  for (int k = 0; k < 1000; ++k) {
    EXPECT_FALSE(rng.Bernoulli(0.0));
    EXPECT_TRUE(rng.Bernoulli(1.0));
  }
}

}  // namespace
}  // namespace shapmarl
