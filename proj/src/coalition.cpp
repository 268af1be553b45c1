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

#include "shapmarl/coalition.hpp"

#include <bit>
#include <sstream>

#include "shapmarl/errors.hpp"

namespace shapmarl {

namespace {

std::uint64_t LowMask(int bits) {
  return bits >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << bits) - 1;
}

}  // namespace

Coalition::Coalition(int capacity) : capacity_(capacity) {
  if (capacity < 0 || capacity > kMaxCoalitionPlayers) {
    throw CapacityError("coalition capacity " + std::to_string(capacity) +
                        " outside [0, " + std::to_string(kMaxCoalitionPlayers) +
                        "]");
  }
}

Coalition::Coalition(int capacity, std::uint64_t mask) : Coalition(capacity) {
  if ((mask & ~LowMask(capacity)) != 0) {
    throw DomainError("coalition mask has members outside [0, " +
                      std::to_string(capacity) + ")");
  }
  mask_ = mask;
}

Coalition::Coalition(int capacity, const std::vector<PlayerIndex>& members)
    : Coalition(capacity) {
  for (PlayerIndex i : members) {
    Check(i);
    const std::uint64_t bit = std::uint64_t{1} << i;
    if (mask_ & bit) {
      throw DomainError("duplicate coalition member " + std::to_string(i));
    }
    mask_ |= bit;
  }
}

Coalition Coalition::Grand(int capacity) {
  Coalition c(capacity);
  c.mask_ = LowMask(capacity);
  return c;
}

int Coalition::size() const noexcept { return std::popcount(mask_); }

bool Coalition::contains(PlayerIndex i) const noexcept {
  return i >= 0 && i < capacity_ && ((mask_ >> i) & 1U);
}

Coalition Coalition::With(PlayerIndex i) const {
  Check(i);
  Coalition c = *this;
  c.mask_ |= std::uint64_t{1} << i;
  return c;
}

Coalition Coalition::Without(PlayerIndex i) const {
  Check(i);
  Coalition c = *this;
  c.mask_ &= ~(std::uint64_t{1} << i);
  return c;
}

std::vector<PlayerIndex> Coalition::members() const {
  std::vector<PlayerIndex> out;
  out.reserve(size());
  for (std::uint64_t m = mask_; m != 0; m &= m - 1) {
    out.push_back(std::countr_zero(m));
  }
  return out;
}

std::string Coalition::ToString() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (PlayerIndex i : members()) {
    if (!first) os << ',';
    os << i;
    first = false;
  }
  os << '}';
  return os.str();
}

void Coalition::Check(PlayerIndex i) const {
  if (i < 0 || i >= capacity_) {
    throw DomainError("player " + std::to_string(i) + " outside [0, " +
                      std::to_string(capacity_) + ")");
  }
}

CoalitionEnumeration::CoalitionEnumeration(int n,
                                           std::optional<PlayerIndex> excluding)
    : n_(n), excluding_(excluding) {
  const int free_players = excluding ? n - 1 : n;
  count_ = std::uint64_t{1} << free_players;
}

Coalition CoalitionEnumeration::At(std::uint64_t index) const {
  if (!excluding_) return Coalition(n_, index);
  // Spread the compressed index around the excluded bit.
  const int e = *excluding_;
  const std::uint64_t low = index & LowMask(e);
  const std::uint64_t high = (index >> e) << (e + 1);
  return Coalition(n_, low | high);
}

Coalition CoalitionEnumeration::iterator::operator*() const {
  return owner_->At(index_);
}

CoalitionEnumeration EnumerateCoalitions(int n,
                                         std::optional<PlayerIndex> excluding) {
  if (n < 0) throw DomainError("negative player count");
  if (n > kMaxEnumerationPlayers) {
    throw CapacityError("cannot enumerate coalitions of " + std::to_string(n) +
                        " players (limit " +
                        std::to_string(kMaxEnumerationPlayers) + ")");
  }
  if (excluding && (*excluding < 0 || *excluding >= n)) {
    throw DomainError("excluded player " + std::to_string(*excluding) +
                      " outside [0, " + std::to_string(n) + ")");
  }
  return CoalitionEnumeration(n, excluding);
}

}  // namespace shapmarl
