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

#ifndef SHAPMARL_METRICS_HPP_
#define SHAPMARL_METRICS_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace shapmarl {

// Per-agent, per-timestep rewards of one episode. Timestep t (0-based in
// storage) is reported as t + 1 by the sustainability metrics.
class EpisodeTrace {
 public:
  EpisodeTrace() = default;
  EpisodeTrace(int agents, int horizon);
  // rows[i][t]; every row must have the same length.
  static EpisodeTrace FromRows(const std::vector<std::vector<double>>& rows);

  int agents() const noexcept { return agents_; }
  int horizon() const noexcept { return horizon_; }

  double reward(int agent, int t) const { return rewards_[Offset(agent, t)]; }
  void set_reward(int agent, int t, double r) { rewards_[Offset(agent, t)] = r; }
  std::span<const double> row(int agent) const {
    return {rewards_.data() + static_cast<std::size_t>(agent) * horizon_,
            static_cast<std::size_t>(horizon_)};
  }

  double Return(int agent) const;
  std::vector<double> Returns() const;
  double Total() const;

 private:
  std::size_t Offset(int agent, int t) const;

  int agents_ = 0;
  int horizon_ = 0;
  std::vector<double> rewards_;
};

// Value of a metric together with the episodes it had to drop.
struct MetricResult {
  std::optional<double> value;  // empty when every episode was excluded
  std::size_t episodes_used = 0;
  std::size_t episodes_excluded = 0;
};

// Mean over episodes of (sum_i R^i) / T. Throws DomainError when empty and
// ContractError on mixed shapes (also for the functions below).
double Efficiency(std::span<const EpisodeTrace> traces);

// Mean over episodes of 1 - sum_ij |R^i - R^j| / (2 N sum_i R^i). Episodes
// with zero total return are excluded.
MetricResult Equality(std::span<const EpisodeTrace> traces);

// Mean over episodes of the average (over rewarded agents) of each agent's
// mean 1-based timestep with positive reward. Never-rewarded agents are left
// out of their episode's average; episodes with no positive reward at all are
// excluded.
MetricResult Sustainability(std::span<const EpisodeTrace> traces);

struct PerAgentMetrics {
  std::vector<double> efficiency;                     // U_i = E[R_i / T]
  std::vector<std::optional<double>> sustainability;  // S_i; empty if never rewarded
  std::vector<std::optional<double>> equality;        // E_i; empty if all totals are 0
  std::vector<std::size_t> sustainability_excluded;   // episodes without reward
  std::size_t equality_excluded = 0;                  // zero-total episodes
};

PerAgentMetrics ComputePerAgentMetrics(std::span<const EpisodeTrace> traces);

}  // namespace shapmarl

#endif  // SHAPMARL_METRICS_HPP_
