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

#include "shapmarl/metrics.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "shapmarl/errors.hpp"

namespace shapmarl {

namespace {

void CheckTraces(std::span<const EpisodeTrace> traces) {
  if (traces.empty()) throw DomainError("metrics need at least one episode");
  const int n = traces.front().agents();
  const int t = traces.front().horizon();
  if (n < 1 || t < 1) throw ContractError("episode trace must be non-empty");
  for (const EpisodeTrace& tr : traces) {
    if (tr.agents() != n || tr.horizon() != t) {
      throw ContractError("episode traces have mixed agent counts or lengths");
    }
  }
}

double PairwiseAbsoluteGap(const std::vector<double>& r, std::size_t i) {
  double s = 0.0;
  for (double rj : r) s += std::abs(r[i] - rj);
  return s;
}

// Mean 1-based timestep with positive reward, if any.
std::optional<double> RewardTime(std::span<const double> row) {
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t t = 0; t < row.size(); ++t) {
    if (row[t] > 0.0) {
      sum += static_cast<double>(t + 1);
      ++count;
    }
  }
  if (count == 0) return std::nullopt;
  return sum / static_cast<double>(count);
}

}  // namespace

EpisodeTrace::EpisodeTrace(int agents, int horizon)
    : agents_(agents), horizon_(horizon) {
  if (agents < 0 || horizon < 0) throw DomainError("negative trace dimensions");
  rewards_.assign(static_cast<std::size_t>(agents) * horizon, 0.0);
}

EpisodeTrace EpisodeTrace::FromRows(const std::vector<std::vector<double>>& rows) {
  const int n = static_cast<int>(rows.size());
  const int t = n == 0 ? 0 : static_cast<int>(rows.front().size());
  EpisodeTrace trace(n, t);
  for (int i = 0; i < n; ++i) {
    if (static_cast<int>(rows[i].size()) != t) {
      throw ContractError("trace rows must all have length " + std::to_string(t));
    }
    for (int s = 0; s < t; ++s) trace.set_reward(i, s, rows[i][s]);
  }
  return trace;
}

std::size_t EpisodeTrace::Offset(int agent, int t) const {
  if (agent < 0 || agent >= agents_ || t < 0 || t >= horizon_) {
    throw DomainError("trace index out of range");
  }
  return static_cast<std::size_t>(agent) * horizon_ + t;
}

double EpisodeTrace::Return(int agent) const {
  const auto r = row(agent);
  return std::accumulate(r.begin(), r.end(), 0.0);
}

std::vector<double> EpisodeTrace::Returns() const {
  std::vector<double> out(agents_);
  for (int i = 0; i < agents_; ++i) out[i] = Return(i);
  return out;
}

double EpisodeTrace::Total() const {
  double s = 0.0;
  for (int i = 0; i < agents_; ++i) s += Return(i);
  return s;
}

double Efficiency(std::span<const EpisodeTrace> traces) {
  CheckTraces(traces);
  double sum = 0.0;
  for (const EpisodeTrace& tr : traces) sum += tr.Total() / tr.horizon();
  return sum / static_cast<double>(traces.size());
}

MetricResult Equality(std::span<const EpisodeTrace> traces) {
  CheckTraces(traces);
  MetricResult out;
  double sum = 0.0;
  for (const EpisodeTrace& tr : traces) {
    const std::vector<double> r = tr.Returns();
    const double total = std::accumulate(r.begin(), r.end(), 0.0);
    if (total == 0.0) {
      ++out.episodes_excluded;
      continue;
    }
    double gap = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) gap += PairwiseAbsoluteGap(r, i);
    sum += 1.0 - gap / (2.0 * static_cast<double>(r.size()) * total);
    ++out.episodes_used;
  }
  if (out.episodes_used > 0) out.value = sum / static_cast<double>(out.episodes_used);
  return out;
}

MetricResult Sustainability(std::span<const EpisodeTrace> traces) {
  CheckTraces(traces);
  MetricResult out;
  double sum = 0.0;
  for (const EpisodeTrace& tr : traces) {
    double inner = 0.0;
    int rewarded = 0;
    for (int i = 0; i < tr.agents(); ++i) {
      if (auto t = RewardTime(tr.row(i))) {
        inner += *t;
        ++rewarded;
      }
    }
    if (rewarded == 0) {
      ++out.episodes_excluded;
      continue;
    }
    sum += inner / rewarded;
    ++out.episodes_used;
  }
  if (out.episodes_used > 0) out.value = sum / static_cast<double>(out.episodes_used);
  return out;
}

PerAgentMetrics ComputePerAgentMetrics(std::span<const EpisodeTrace> traces) {
  CheckTraces(traces);
  const int n = traces.front().agents();
  const double episodes = static_cast<double>(traces.size());

  PerAgentMetrics out;
  out.efficiency.assign(n, 0.0);
  out.sustainability.assign(n, std::nullopt);
  out.equality.assign(n, std::nullopt);
  out.sustainability_excluded.assign(n, 0);

  std::vector<double> s_sum(n, 0.0);
  std::vector<std::size_t> s_count(n, 0);
  std::vector<double> e_sum(n, 0.0);
  std::size_t e_count = 0;

  for (const EpisodeTrace& tr : traces) {
    const std::vector<double> r = tr.Returns();
    const double total = std::accumulate(r.begin(), r.end(), 0.0);
    for (int i = 0; i < n; ++i) {
      out.efficiency[i] += r[i] / tr.horizon() / episodes;
      if (auto t = RewardTime(tr.row(i))) {
        s_sum[i] += *t;
        ++s_count[i];
      } else {
        ++out.sustainability_excluded[i];
      }
    }
    if (total == 0.0) {
      ++out.equality_excluded;
      continue;
    }
    for (int i = 0; i < n; ++i) {
      e_sum[i] += 1.0 - PairwiseAbsoluteGap(r, i) / (2.0 * total);
    }
    ++e_count;
  }
  for (int i = 0; i < n; ++i) {
    if (s_count[i] > 0) out.sustainability[i] = s_sum[i] / static_cast<double>(s_count[i]);
    if (e_count > 0) out.equality[i] = e_sum[i] / static_cast<double>(e_count);
  }
  return out;
}

}  // namespace shapmarl
