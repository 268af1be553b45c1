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

#ifndef SHAPMARL_COALITION_HPP_
#define SHAPMARL_COALITION_HPP_

#include <cstddef>
#include <cstdint>
#include <iterator>
#include <optional>
#include <string>
#include <vector>

namespace shapmarl {

using PlayerIndex = int;

// Largest player count a Coalition can represent.
inline constexpr int kMaxCoalitionPlayers = 64;
// Largest player count accepted by EnumerateCoalitions.
inline constexpr int kMaxEnumerationPlayers = 30;

// Subset of the players {0, ..., capacity-1}, stored as a bitmask.
class Coalition {
 public:
  Coalition() = default;
  explicit Coalition(int capacity);
  Coalition(int capacity, std::uint64_t mask);
  Coalition(int capacity, const std::vector<PlayerIndex>& members);

  static Coalition Empty(int capacity) { return Coalition(capacity); }
  static Coalition Grand(int capacity);

  int capacity() const noexcept { return capacity_; }
  std::uint64_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  bool empty() const noexcept { return mask_ == 0; }
  bool contains(PlayerIndex i) const noexcept;

  Coalition With(PlayerIndex i) const;
  Coalition Without(PlayerIndex i) const;

  // Members in increasing index order.
  std::vector<PlayerIndex> members() const;
  std::string ToString() const;

  friend bool operator==(const Coalition& a, const Coalition& b) noexcept {
    return a.capacity_ == b.capacity_ && a.mask_ == b.mask_;
  }

 private:
  void Check(PlayerIndex i) const;

  int capacity_ = 0;
  std::uint64_t mask_ = 0;
};

// Lazily enumerates every subset of the n players, optionally skipping one
// player. Coalitions are produced in order of the compressed bitmask, so ∅
// always comes first.
class CoalitionEnumeration {
 public:
  class iterator {
   public:
    using value_type = Coalition;
    using difference_type = std::ptrdiff_t;
    using iterator_category = std::input_iterator_tag;
    using reference = Coalition;
    using pointer = void;

    iterator() = default;
    Coalition operator*() const;
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      iterator copy = *this;
      ++index_;
      return copy;
    }
    friend bool operator==(const iterator& a, const iterator& b) noexcept {
      return a.index_ == b.index_;
    }

   private:
    friend class CoalitionEnumeration;
    iterator(const CoalitionEnumeration* owner, std::uint64_t index)
        : owner_(owner), index_(index) {}
    const CoalitionEnumeration* owner_ = nullptr;
    std::uint64_t index_ = 0;
  };

  iterator begin() const { return iterator(this, 0); }
  iterator end() const { return iterator(this, count_); }
  std::uint64_t size() const noexcept { return count_; }

 private:
  friend CoalitionEnumeration EnumerateCoalitions(int, std::optional<PlayerIndex>);
  CoalitionEnumeration(int n, std::optional<PlayerIndex> excluding);
  Coalition At(std::uint64_t index) const;

  int n_;
  std::optional<PlayerIndex> excluding_;
  std::uint64_t count_;
};

// Throws CapacityError when n > kMaxEnumerationPlayers, DomainError for a
// negative n or an out-of-range excluded player.
CoalitionEnumeration EnumerateCoalitions(
    int n, std::optional<PlayerIndex> excluding = std::nullopt);

}  // namespace shapmarl

#endif  // SHAPMARL_COALITION_HPP_
