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

#ifndef SHAPMARL_RANDOM_HPP_
#define SHAPMARL_RANDOM_HPP_

#include <cstdint>
#include <initializer_list>
#include <random>

namespace shapmarl {

// SplitMix64 finalizer; used to turn structured keys into seeds.
constexpr std::uint64_t Mix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Derives an independent seed from a master seed and a key path such as
// (player, draw, side). The result depends only on the values, never on the
// order in which substreams are requested.
inline std::uint64_t DeriveSeed(std::uint64_t master,
                                std::initializer_list<std::uint64_t> key) {
  std::uint64_t h = Mix64(master ^ 0x5DEECE66DULL);
  for (std::uint64_t k : key) h = Mix64(h ^ Mix64(k + 0x632BE59BD9B4E019ULL));
  return h;
}

// Randomness stream handed to games, environments and policies. The helper
// samplers are implemented here instead of using <random> distributions so
// streams are reproducible across standard library implementations.
class RandomStream {
 public:
  using result_type = std::uint64_t;

  explicit RandomStream(std::uint64_t seed) : engine_(seed), seed_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return ~result_type{0}; }
  result_type operator()() { return engine_(); }

  std::uint64_t seed() const noexcept { return seed_; }

  // Uniform in [0, 1) with 53 bits of resolution.
  double Uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  double Uniform(double lo, double hi) { return lo + (hi - lo) * Uniform(); }

  // Uniform integer in [0, bound). bound must be positive.
  std::uint64_t Below(std::uint64_t bound) {
    // Rejection sampling on the top of the range removes modulo bias.
    const std::uint64_t limit = max() - max() % bound;
    std::uint64_t x;
    do {
      x = engine_();
    } while (x >= limit);
    return x % bound;
  }

  bool Bernoulli(double p) { return Uniform() < p; }

  // Child stream keyed by `key`; does not advance this stream.
  RandomStream Substream(std::initializer_list<std::uint64_t> key) const {
    return RandomStream(DeriveSeed(seed_, key));
  }

 private:
  std::mt19937_64 engine_;
  std::uint64_t seed_;
};

}  // namespace shapmarl

#endif  // SHAPMARL_RANDOM_HPP_
