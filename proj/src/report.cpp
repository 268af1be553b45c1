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

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "shapmarl/experiment.hpp"

namespace shapmarl {

namespace {

using Json = nlohmann::ordered_json;
namespace fs = std::filesystem;

Json Number(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

Json Optional(const std::optional<double>& v) {
  return v ? Number(*v) : Json(nullptr);
}

std::string Num(double v) {
  if (!std::isfinite(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string Num(const Json& v) { return v.is_null() ? "" : Num(v.get<double>()); }

std::string Fixed(const Json& v, int digits = 4) {
  if (v.is_null()) return "n/a";
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v.get<double>());
  return buf;
}

std::string EventName(const ExperimentConfig& c) {
  return c.is_harvest() ? "apples_eaten" : "catches";
}

Json ConfigJson(const ExperimentConfig& c) {
  Json env;
  env["type"] = c.environment_name();
  env["episode_length"] = EpisodeLength(c.environment);
  if (const auto* pp = std::get_if<PredatorPreyConfig>(&c.environment)) {
    env["step_size"] = pp->step_size;
    env["catch_radius"] = pp->catch_radius;
    env["catch_reward"] = pp->catch_reward;
    env["penalty"] = pp->penalty;
    env["spawn_separation"] = pp->spawn_separation;
    env["respawn_prey"] = pp->respawn_prey;
    Json obstacles = Json::array();
    for (const auto& o : pp->obstacles) {
      obstacles.push_back({{"x", o.center.x}, {"y", o.center.y}, {"radius", o.radius}});
    }
    env["obstacles"] = obstacles;
  } else {
    const auto& h = std::get<HarvestConfig>(c.environment);
    env["map"] = c.map_path.empty() ? "default" : fs::path(c.map_path).filename().string();
    env["map_width"] = h.map.width;
    env["map_height"] = h.map.height;
    env["initial_apples"] = h.map.apple_count();
    env["regrowth"] = Json(std::vector<double>(h.regrowth.begin(), h.regrowth.end()));
  }
  Json agents = Json::array();
  for (const auto& a : c.agents) {
    agents.push_back({{"name", a.name},
                      {"policy", ToString(a.policy.kind)},
                      {"role", ToString(a.role)},
                      {"speed", a.policy.speed},
                      {"skill", a.policy.skill},
                      {"fixed", a.fixed}});
  }
  Json modes = Json::array();
  for (auto m : c.exclusion_modes) modes.push_back(ToString(m));
  Json out;
  out["name"] = c.name;
  out["environment"] = env;
  out["agents"] = agents;
  out["exclusion"] = modes;
  out["M"] = c.draws;
  out["samples_per_coalition"] = c.samples_per_coalition;
  out["grand_episodes"] = c.grand_episodes;
  out["performance_episodes"] = c.performance_episodes;
  out["exact_capacity"] = c.exact_capacity;
  out["seed"] = c.seed;
  return out;
}

std::vector<int> ScopeOf(const ExperimentConfig& c) {
  std::vector<int> scope;
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    if (!c.agents[a].fixed) scope.push_back(static_cast<int>(a));
  }
  return scope;
}

Json EstimateJson(const ShapleyEstimate& e, const std::vector<int>& scope,
                  const ExperimentConfig& c) {
  Json rows = Json::array();
  double sum = 0.0, var = 0.0;
  for (int i = 0; i < e.players(); ++i) {
    rows.push_back({{"player", i},
                    {"agent", scope[i]},
                    {"name", c.agents[scope[i]].name},
                    {"phi", Number(e.values[i])},
                    {"stderr", Number(e.stderrs[i])},
                    {"samples", e.samples[i]}});
    sum += e.values[i];
    var += e.stderrs[i] * e.stderrs[i];
  }
  Json out;
  out["method"] = ToString(e.method);
  out["draws"] = e.monte_carlo_draws;
  out["evaluations"] = e.evaluations;
  out["values"] = rows;
  out["sum_phi"] = Number(sum);
  out["sum_phi_stderr"] = Number(std::sqrt(var));
  return out;
}

Json AttributionJson(const AttributionReport& r, const std::vector<int>& scope,
                     const ExperimentConfig& c) {
  Json out = EstimateJson(r.estimate, scope, c);
  out["rollouts"] = r.rollouts;
  out["grand"] = {{"episodes", r.grand_episodes},
                  {"mean", Number(r.grand_mean)},
                  {"stderr", Number(r.grand_stderr)}};
  out["marginals_spilled"] = !r.marginals_spill_path.empty();
  return out;
}

Json MetricJson(const MetricResult& m) {
  return {{"value", Optional(m.value)},
          {"episodes_used", m.episodes_used},
          {"episodes_excluded", m.episodes_excluded}};
}

// Mean relative difference, in percent, of `a` against reference `b`.
Json RelDiff(double a, double b) {
  if (b == 0.0) return nullptr;
  return Number(100.0 * std::abs(a - b) / std::abs(b));
}

Json BuildJson(const ReportBundle& b) {
  const ExperimentConfig& c = b.config;
  const std::vector<int> scope = ScopeOf(c);
  Json root;
  root["schema_version"] = 1;
  root["command"] = ToString(b.command);
  root["config"] = ConfigJson(c);
  Json players = Json::array();
  for (std::size_t i = 0; i < scope.size(); ++i) {
    players.push_back({{"player", i}, {"agent", scope[i]}, {"name", c.agents[scope[i]].name}});
  }
  root["players"] = players;

  if (b.command == Command::kSweep) {
    Json sweep;
    sweep["agent"] = b.sweep->agent;
    sweep["name"] = c.agents[b.sweep->agent].name;
    sweep["player"] = b.sweep_player;
    sweep["param"] = b.sweep->param;
    sweep["mode"] = ToString(c.exclusion_modes.front());
    Json points = Json::array();
    for (const auto& p : b.sweep_points) {
      Json point;
      point["value"] = p.value;
      point["phi"] = Number(p.estimate.values[b.sweep_player]);
      point["stderr"] = Number(p.estimate.stderrs[b.sweep_player]);
      point["rollouts"] = p.rollouts;
      point["grand_mean"] = Number(p.grand_mean);
      point["efficiency"] = Number(p.efficiency);
      point["equality"] = MetricJson(p.equality);
      point["sustainability"] = MetricJson(p.sustainability);
      point["shapley"] = EstimateJson(p.estimate, scope, c);
      points.push_back(point);
    }
    sweep["points"] = points;
    sweep["spearman"] = Number(b.sweep_spearman);
    root["sweep"] = sweep;
    return root;
  }

  Json modes = Json::array();
  for (const auto& m : b.modes) {
    Json mode;
    mode["mode"] = ToString(m.mode);
    mode["monte_carlo"] = AttributionJson(m.monte_carlo, scope, c);
    if (m.exact) {
      mode["exact"] = AttributionJson(*m.exact, scope, c);
      Json rows = Json::array();
      double total = 0.0;
      int counted = 0;
      for (int i = 0; i < m.exact->estimate.players(); ++i) {
        const double mc = m.monte_carlo.estimate.values[i];
        const double ex = m.exact->estimate.values[i];
        Json rel = RelDiff(mc, ex);
        if (!rel.is_null()) {
          total += rel.get<double>();
          ++counted;
        }
        rows.push_back({{"player", i},
                        {"name", c.agents[scope[i]].name},
                        {"phi_mc", Number(mc)},
                        {"stderr_mc", Number(m.monte_carlo.estimate.stderrs[i])},
                        {"phi_exact", Number(ex)},
                        {"stderr_exact", Number(m.exact->estimate.stderrs[i])},
                        {"rel_diff_pct", rel}});
      }
      mode["comparison"] = {{"agents", rows},
                            {"mean_rel_diff_pct",
                             counted ? Number(total / counted) : Json(nullptr)}};
    }
    modes.push_back(mode);
  }
  root["modes"] = modes;

  Json gaps = Json::array();
  for (std::size_t a = 0; a < b.modes.size(); ++a) {
    for (std::size_t z = a + 1; z < b.modes.size(); ++z) {
      const auto& va = b.modes[a].monte_carlo.estimate;
      const auto& vz = b.modes[z].monte_carlo.estimate;
      Json per = Json::array();
      double mean = 0.0;
      for (int i = 0; i < va.players(); ++i) {
        const double gap = va.values[i] - vz.values[i];
        const double se = std::sqrt(va.stderrs[i] * va.stderrs[i] +
                                    vz.stderrs[i] * vz.stderrs[i]);
        per.push_back({{"player", i},
                       {"name", c.agents[scope[i]].name},
                       {"gap", Number(gap)},
                       {"combined_stderr", Number(se)}});
        mean += gap / va.players();
      }
      gaps.push_back({{"mode_a", ToString(b.modes[a].mode)},
                      {"mode_b", ToString(b.modes[z].mode)},
                      {"mean_gap", Number(mean)},
                      {"agents", per}});
    }
  }
  root["exclusion_gaps"] = gaps;

  Json events;
  events["event"] = EventName(c);
  events["episodes"] = c.performance_episodes;
  Json rows = Json::array();
  for (std::size_t a = 0; a < c.agents.size(); ++a) {
    rows.push_back({{"agent", a},
                    {"name", c.agents[a].name},
                    {"role", ToString(c.agents[a].role)},
                    {"mean_events", Number(b.mean_event_counts.at(a))}});
  }
  events["agents"] = rows;
  root["performance"] = events;

  auto names = [&](const std::vector<int>& order) {
    Json out = Json::array();
    for (int p : order) out.push_back(c.agents[scope[p]].name);
    return out;
  };
  root["ordering"] = {{"shapley", names(b.shapley_ranking)},
                      {"events", names(b.event_ranking)},
                      {"matches", b.ranking_matches}};

  Json metrics;
  metrics["episodes"] = c.grand_episodes;
  metrics["efficiency"] = Number(b.efficiency);
  metrics["equality"] = MetricJson(b.equality);
  metrics["sustainability"] = MetricJson(b.sustainability);
  Json per = Json::array();
  for (std::size_t i = 0; i < scope.size(); ++i) {
    per.push_back({{"player", i},
                   {"name", c.agents[scope[i]].name},
                   {"efficiency", Number(b.per_agent.efficiency[i])},
                   {"sustainability", Optional(b.per_agent.sustainability[i])},
                   {"sustainability_excluded", b.per_agent.sustainability_excluded[i]},
                   {"equality", Optional(b.per_agent.equality[i])}});
  }
  metrics["per_agent"] = per;
  metrics["per_agent_equality_excluded"] = b.per_agent.equality_excluded;
  Json skipped = Json::array();
  if (!b.equality.value) {
    skipped.push_back({{"metric", "equality"},
                       {"reason", "every episode had zero total reward"}});
  }
  if (!b.sustainability.value) {
    skipped.push_back({{"metric", "sustainability"},
                       {"reason", "no agent received a positive reward in any episode"}});
  }
  for (std::size_t i = 0; i < scope.size(); ++i) {
    if (!b.per_agent.sustainability[i]) {
      skipped.push_back({{"metric", "sustainability[" + c.agents[scope[i]].name + "]"},
                         {"reason", "agent never received a positive reward"}});
    }
  }
  metrics["skipped"] = skipped;
  root["metrics"] = metrics;
  return root;
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw IoError(path.string(), "cannot open for writing");
    out_ << header << '\n';
  }
  ~CsvWriter() = default;
  template <class... Cells>
  void Row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cells, first = false), ...);
    out_ << '\n';
  }
  void Close() {
    out_.close();
    if (!out_) throw IoError(path_.string(), "write failed");
  }

 private:
  fs::path path_;
  std::ofstream out_;
};

void WriteText(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << text;
  out.close();
  if (!out) throw IoError(path.string(), "write failed");
}

std::string Str(const Json& v) { return v.get<std::string>(); }

void WriteTables(const Json& r, const ReportBundle& b, const fs::path& dir,
                 std::vector<std::string>& files) {
  const fs::path series = dir / "series";
  fs::create_directories(series);
  auto track = [&](const fs::path& p) { files.push_back(fs::relative(p, dir).generic_string()); };

  if (r.contains("sweep")) {
    const Json& s = r["sweep"];
    CsvWriter table(dir / "sweep.csv",
                    "value,phi,stderr,grand_mean,efficiency,equality,sustainability");
    CsvWriter phi(series / "sweep_phi.csv", "x,y,yerr");
    CsvWriter eff(series / "sweep_efficiency.csv", "x,y");
    CsvWriter eq(series / "sweep_equality.csv", "x,y");
    CsvWriter sus(series / "sweep_sustainability.csv", "x,y");
    for (const Json& p : s["points"]) {
      table.Row(Num(p["value"]), Num(p["phi"]), Num(p["stderr"]), Num(p["grand_mean"]),
                Num(p["efficiency"]), Num(p["equality"]["value"]),
                Num(p["sustainability"]["value"]));
      phi.Row(Num(p["value"]), Num(p["phi"]), Num(p["stderr"]));
      eff.Row(Num(p["value"]), Num(p["efficiency"]));
      eq.Row(Num(p["value"]), Num(p["equality"]["value"]));
      sus.Row(Num(p["value"]), Num(p["sustainability"]["value"]));
    }
    table.Close();
    phi.Close();
    eff.Close();
    eq.Close();
    sus.Close();
    track(dir / "sweep.csv");
    track(series / "sweep_phi.csv");
    track(series / "sweep_efficiency.csv");
    track(series / "sweep_equality.csv");
    track(series / "sweep_sustainability.csv");
    return;
  }

  {
    CsvWriter table(dir / "shapley.csv", "mode,method,player,agent,name,phi,stderr,samples");
    for (const Json& m : r["modes"]) {
      for (const char* key : {"monte_carlo", "exact"}) {
        if (!m.contains(key)) continue;
        const Json& est = m[key];
        CsvWriter s(series / ("shapley_" + Str(m["mode"]) + "_" + key + ".csv"), "x,y,yerr");
        for (const Json& v : est["values"]) {
          table.Row(Str(m["mode"]), Str(est["method"]), v["player"].get<int>(),
                    v["agent"].get<int>(), Str(v["name"]), Num(v["phi"]), Num(v["stderr"]),
                    v["samples"].get<std::uint64_t>());
          s.Row(v["player"].get<int>(), Num(v["phi"]), Num(v["stderr"]));
        }
        s.Close();
        track(series / ("shapley_" + Str(m["mode"]) + "_" + key + ".csv"));
      }
    }
    table.Close();
    track(dir / "shapley.csv");
  }
  {
    CsvWriter table(dir / "events.csv", "agent,name,role,event,mean_events");
    CsvWriter s(series / "events.csv", "x,y");
    const Json& perf = r["performance"];
    for (const Json& a : perf["agents"]) {
      table.Row(a["agent"].get<int>(), Str(a["name"]), Str(a["role"]), Str(perf["event"]),
                Num(a["mean_events"]));
      s.Row(a["agent"].get<int>(), Num(a["mean_events"]));
    }
    table.Close();
    s.Close();
    track(dir / "events.csv");
    track(series / "events.csv");
  }
  {
    CsvWriter table(dir / "metrics_per_agent.csv",
                    "player,name,efficiency,sustainability,sustainability_excluded,equality");
    for (const Json& a : r["metrics"]["per_agent"]) {
      table.Row(a["player"].get<int>(), Str(a["name"]), Num(a["efficiency"]),
                Num(a["sustainability"]), a["sustainability_excluded"].get<std::uint64_t>(),
                Num(a["equality"]));
    }
    table.Close();
    track(dir / "metrics_per_agent.csv");
  }
  bool any_exact = false;
  for (const Json& m : r["modes"]) any_exact = any_exact || m.contains("comparison");
  if (any_exact) {
    CsvWriter table(dir / "comparison.csv",
                    "mode,player,name,phi_mc,stderr_mc,phi_exact,stderr_exact,rel_diff_pct");
    for (const Json& m : r["modes"]) {
      if (!m.contains("comparison")) continue;
      const std::string series_name = "mc_vs_exact_" + Str(m["mode"]) + ".csv";
      CsvWriter s(series / series_name, "x,y");
      for (const Json& a : m["comparison"]["agents"]) {
        table.Row(Str(m["mode"]), a["player"].get<int>(), Str(a["name"]), Num(a["phi_mc"]),
                  Num(a["stderr_mc"]), Num(a["phi_exact"]), Num(a["stderr_exact"]),
                  Num(a["rel_diff_pct"]));
        s.Row(Num(a["phi_exact"]), Num(a["phi_mc"]));
      }
      s.Close();
      track(series / series_name);
    }
    table.Close();
    track(dir / "comparison.csv");
  }
  if (!r["exclusion_gaps"].empty()) {
    CsvWriter table(dir / "exclusion_gaps.csv",
                    "mode_a,mode_b,player,name,gap,combined_stderr");
    CsvWriter means(dir / "exclusion_mean_gaps.csv", "mode_a,mode_b,mean_gap");
    for (const Json& g : r["exclusion_gaps"]) {
      means.Row(Str(g["mode_a"]), Str(g["mode_b"]), Num(g["mean_gap"]));
      for (const Json& a : g["agents"]) {
        table.Row(Str(g["mode_a"]), Str(g["mode_b"]), a["player"].get<int>(), Str(a["name"]),
                  Num(a["gap"]), Num(a["combined_stderr"]));
      }
    }
    table.Close();
    means.Close();
    track(dir / "exclusion_gaps.csv");
    track(dir / "exclusion_mean_gaps.csv");
  }
  for (const auto& m : b.modes) {
    if (m.monte_carlo.marginals.empty()) {
      if (!m.monte_carlo.marginals_spill_path.empty()) {
        files.push_back(fs::path(m.monte_carlo.marginals_spill_path).filename().string());
      }
      continue;
    }
    const fs::path path = dir / ("marginals_" + std::string(ToString(m.mode)) + ".csv");
    CsvWriter table(path, "player,draw,marginal");
    const auto& marg = m.monte_carlo.marginals;
    for (std::size_t i = 0; i < marg.size(); ++i) {
      for (std::size_t d = 0; d < marg[i].size(); ++d) table.Row(i, d, Num(marg[i][d]));
    }
    table.Close();
    track(path);
  }
}

std::string Summary(const Json& r) {
  std::ostringstream out;
  const Json& c = r["config"];
  out << "Experiment: " << Str(c["name"]) << " (" << Str(r["command"]) << ")\n";
  out << "Environment: " << Str(c["environment"]["type"])
      << ", episode length " << c["environment"]["episode_length"].get<int>()
      << ", seed " << c["seed"].get<std::uint64_t>() << ", M " << c["M"].get<std::uint64_t>()
      << "\n";
  out << "Agents:";
  for (const Json& a : c["agents"]) {
    out << ' ' << Str(a["name"]) << '[' << Str(a["policy"]) << ", speed "
        << Fixed(a["speed"], 2) << ", skill " << Fixed(a["skill"], 2)
        << (a["fixed"].get<bool>() ? ", fixed" : "") << ']';
  }
  out << "\n\n";

  auto estimate = [&](const Json& est, const std::string& label) {
    out << "  " << label << " (" << Str(est["method"]) << ")\n";
    for (const Json& v : est["values"]) {
      out << "    " << Str(v["name"]) << ": phi = " << Fixed(v["phi"]) << " +- "
          << Fixed(v["stderr"]) << "\n";
    }
    out << "    total phi = " << Fixed(est["sum_phi"]) << " +- " << Fixed(est["sum_phi_stderr"])
        << "\n";
    if (est.contains("grand")) {
      out << "    grand coalition mean reward = " << Fixed(est["grand"]["mean"]) << " +- "
          << Fixed(est["grand"]["stderr"]) << " over "
          << est["grand"]["episodes"].get<int>() << " episodes\n";
      out << "    rollouts = " << est["rollouts"].get<std::uint64_t>() << "\n";
    }
  };

  if (r.contains("sweep")) {
    const Json& s = r["sweep"];
    out << "Sweep of " << Str(s["param"]) << " for " << Str(s["name"]) << " ("
        << Str(s["mode"]) << " exclusion)\n";
    for (const Json& p : s["points"]) {
      out << "  " << Str(s["param"]) << " = " << Fixed(p["value"], 2)
          << ": phi = " << Fixed(p["phi"]) << " +- " << Fixed(p["stderr"])
          << ", efficiency = " << Fixed(p["efficiency"])
          << ", equality = " << Fixed(p["equality"]["value"])
          << ", sustainability = " << Fixed(p["sustainability"]["value"]) << "\n";
    }
    out << "  Spearman rho = " << Fixed(s["spearman"]) << "\n";
    return out.str();
  }

  out << "Shapley values\n";
  for (const Json& m : r["modes"]) {
    estimate(m["monte_carlo"], Str(m["mode"]));
    if (m.contains("exact")) {
      estimate(m["exact"], Str(m["mode"]));
      out << "    MC vs exact relative difference (%):";
      for (const Json& a : m["comparison"]["agents"]) {
        out << ' ' << Str(a["name"]) << '=' << Fixed(a["rel_diff_pct"], 2);
      }
      out << ", mean " << Fixed(m["comparison"]["mean_rel_diff_pct"], 2) << "\n";
    }
  }
  if (!r["exclusion_gaps"].empty()) {
    out << "\nExclusion-mode gaps (mean phi difference)\n";
    for (const Json& g : r["exclusion_gaps"]) {
      out << "  " << Str(g["mode_a"]) << " - " << Str(g["mode_b"]) << " = "
          << Fixed(g["mean_gap"]) << "\n";
    }
  }
  const Json& perf = r["performance"];
  out << "\nMean " << Str(perf["event"]) << " per episode over "
      << perf["episodes"].get<int>() << " full-roster episodes\n";
  for (const Json& a : perf["agents"]) {
    out << "  " << Str(a["name"]) << " (" << Str(a["role"]) << "): "
        << Fixed(a["mean_events"]) << "\n";
  }
  const Json& ord = r["ordering"];
  auto list = [](const Json& names) {
    std::string s;
    for (const Json& n : names) s += (s.empty() ? "" : " > ") + n.get<std::string>();
    return s;
  };
  out << "Ordering by Shapley value: " << list(ord["shapley"]) << "\n";
  out << "Ordering by events:        " << list(ord["events"]) << "\n";
  out << "Orderings match: " << (ord["matches"].get<bool>() ? "yes" : "no") << "\n";

  const Json& met = r["metrics"];
  out << "\nSocial metrics over " << met["episodes"].get<int>()
      << " grand-coalition episodes\n";
  out << "  efficiency = " << Fixed(met["efficiency"]) << "\n";
  out << "  equality = " << Fixed(met["equality"]["value"]) << " ("
      << met["equality"]["episodes_excluded"].get<std::uint64_t>()
      << " zero-reward episodes excluded)\n";
  out << "  sustainability = " << Fixed(met["sustainability"]["value"]) << " ("
      << met["sustainability"]["episodes_excluded"].get<std::uint64_t>()
      << " episodes without reward excluded)\n";
  for (const Json& a : met["per_agent"]) {
    out << "  " << Str(a["name"]) << ": U = " << Fixed(a["efficiency"])
        << ", S = " << Fixed(a["sustainability"]) << ", E = " << Fixed(a["equality"]) << "\n";
  }
  if (!met["skipped"].empty()) {
    out << "  Skipped:\n";
    for (const Json& s : met["skipped"]) {
      out << "    " << Str(s["metric"]) << ": " << Str(s["reason"]) << "\n";
    }
  }
  return out.str();
}

Json TimingJson(const ReportBundle& b) {
  Json out;
  double total = 0.0;
  std::uint64_t rollouts = 0;
  Json runs = Json::array();
  for (const auto& m : b.modes) {
    runs.push_back({{"mode", ToString(m.mode)},
                    {"method", "monte_carlo"},
                    {"wall_seconds", m.monte_carlo.wall_seconds},
                    {"rollouts", m.monte_carlo.rollouts}});
    total += m.monte_carlo.wall_seconds;
    rollouts += m.monte_carlo.rollouts;
    if (m.exact) {
      runs.push_back({{"mode", ToString(m.mode)},
                      {"method", "exact"},
                      {"wall_seconds", m.exact->wall_seconds},
                      {"rollouts", m.exact->rollouts}});
      total += m.exact->wall_seconds;
      rollouts += m.exact->rollouts;
    }
  }
  out["runs"] = runs;
  out["attribution_wall_seconds"] = total;
  out["attribution_rollouts"] = rollouts;
  out["workers"] = b.config.workers;
  return out;
}

}  // namespace

std::string ResultsJson(const ReportBundle& bundle) {
  return BuildJson(bundle).dump(2) + "\n";
}

std::string SummaryText(const ReportBundle& bundle) {
  return Summary(Json::parse(ResultsJson(bundle)));
}

void MarkIncomplete(const std::string& directory, const std::string& stage,
                    const std::string& message) {
  fs::create_directories(directory);
  Json status = {{"status", "incomplete"}, {"stage", stage}, {"error", message}};
  WriteText(fs::path(directory) / "status.json", status.dump(2) + "\n");
}

void EmitReport(const ReportBundle& bundle, const std::string& directory) {
  const fs::path dir(directory);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError(directory, "cannot create output directory: " + ec.message());
  MarkIncomplete(directory, "emit", "report writing did not finish");

  const std::string results = ResultsJson(bundle);
  const Json parsed = Json::parse(results);
  std::vector<std::string> files{"results.json"};
  WriteText(dir / "results.json", results);
  WriteTables(parsed, bundle, dir, files);
  WriteText(dir / "summary.txt", Summary(parsed));
  files.push_back("summary.txt");
  WriteText(dir / "timing.json", TimingJson(bundle).dump(2) + "\n");
  files.push_back("timing.json");

  Json status = {{"status", "complete"}, {"files", files}};
  WriteText(dir / "status.json", status.dump(2) + "\n");
}

}  // namespace shapmarl
