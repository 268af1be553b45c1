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

#include "shapmarl/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include "gtest/gtest.h"
#include "nlohmann/json.hpp"

namespace shapmarl {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path TempDir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("shapmarl_experiment_" + name);
  fs::remove_all(dir);
  return dir;
}

json SmallPredatorPrey() {
  return json::parse(R"({
    "name": "small",
    "environment": {"type": "predator_prey", "episode_length": 40},
    "agents": [
      {"name": "slow", "policy": "pursuit", "speed": 0.2, "skill": 0.9},
      {"name": "mid", "policy": "pursuit", "speed": 0.8, "skill": 0.9},
      {"name": "fast", "policy": "pursuit", "speed": 2.0, "skill": 0.9},
      {"name": "prey", "policy": "evader", "speed": 1.3, "fixed": true}
    ],
    "M": 30, "grand_episodes": 6, "performance_episodes": 30,
    "samples_per_coalition": 10, "seed": 3
  })");
}

json SmallHarvest() {
  return json::parse(R"({
    "name": "harvest_small",
    "environment": {"type": "harvest", "episode_length": 60},
    "agents": [
      {"name": "a", "policy": "harvester"},
      {"name": "b", "policy": "harvester"},
      {"name": "idle", "policy": "lazy"}
    ],
    "M": 10, "grand_episodes": 4, "performance_episodes": 4, "seed": 2
  })");
}

std::string ConfigErrorField(const std::string& text) {
  try {
    ParseConfig(text);
  } catch (const ConfigError& e) {
    return e.field();
  }
  return "<none>";
}

TEST(ConfigTest, MinimalDefaults) {
  const ExperimentConfig c = LoadConfig(std::string(SHAPMARL_SOURCE_DIR) + "/configs/minimal.json");
  EXPECT_EQ(c.draws, 1000u);
  EXPECT_EQ(EpisodeLength(c.environment), 100);
  EXPECT_EQ(c.exclusion_modes, (std::vector<ExclusionMode>{ExclusionMode::kNoOp}));
  EXPECT_EQ(c.agents.size(), 4u);
  EXPECT_TRUE(c.agents[3].fixed);
  EXPECT_EQ(c.agents[3].role, Role::kPrey);
  EXPECT_EQ(c.seed, 0u);
  EXPECT_FALSE(c.is_harvest());

  const ExperimentConfig h =
      ParseConfig(R"({"environment": {"type": "harvest"}, "agents": [{"policy": "harvester"}]})");
  EXPECT_TRUE(h.is_harvest());
  EXPECT_EQ(EpisodeLength(h.environment), 1000);
  EXPECT_EQ(h.agents[0].name, "agent0");
  EXPECT_EQ(h.agents[0].role, Role::kHarvester);
  EXPECT_EQ(std::get<HarvestConfig>(h.environment).map.apple_count(), 159);
}

TEST(ConfigTest, SpeedsRoster) {
  const ExperimentConfig c =
      LoadConfig(std::string(SHAPMARL_SOURCE_DIR) + "/configs/exp2_speeds.json");
  ASSERT_EQ(c.agents.size(), 4u);
  EXPECT_EQ(c.agents[0].policy.speed, 0.2);
  EXPECT_EQ(c.agents[1].policy.speed, 0.8);
  EXPECT_EQ(c.agents[2].policy.speed, 2.0);
  EXPECT_EQ(c.agents[3].policy.kind, PolicyKind::kEvader);
  EXPECT_EQ(c.agents[3].policy.speed, 1.3);
}

TEST(ConfigTest, AllShippedConfigsLoad) {
  for (const auto& entry : fs::directory_iterator(fs::path(SHAPMARL_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(LoadConfig(entry.path().string())) << entry.path();
  }
}

TEST(ConfigTest, ZeroDrawsNamesM) {
  json j = SmallPredatorPrey();
  j["M"] = 0;
  EXPECT_EQ(ConfigErrorField(j.dump()), "M");
}

TEST(ConfigTest, UnknownKeysAreNamed) {
  json j = SmallPredatorPrey();
  j["bogus"] = 1;
  EXPECT_EQ(ConfigErrorField(j.dump()), "bogus");
  j = SmallPredatorPrey();
  j["environment"]["colour"] = "red";
  EXPECT_EQ(ConfigErrorField(j.dump()), "environment.colour");
  j = SmallPredatorPrey();
  j["agents"][1]["hat"] = true;
  EXPECT_EQ(ConfigErrorField(j.dump()), "agents[1].hat");
}

TEST(ConfigTest, ValidationErrors) {
  json j = SmallPredatorPrey();
  j["agents"][0]["skill"] = 2.0;
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["agents"][0]["policy"] = "telepath";
  EXPECT_EQ(ConfigErrorField(j.dump()), "agents[0].policy");
  j = SmallPredatorPrey();
  j["agents"][1]["name"] = "slow";
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["exclusion"] = json::array({"noop", "noop"});
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["exclusion"] = "teleport";
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["agents"] = json::array();
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["sweep"] = {{"agent", 3}, {"param", "speed"}, {"values", {1.0}}};
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
  j = SmallPredatorPrey();
  j["sweep"] = {{"agent", 0}, {"param", "colour"}, {"values", {1.0}}};
  EXPECT_THROW(ParseConfig(j.dump()), ConfigError);
}

TEST(ConfigTest, ParseErrorLocation) {
  try {
    ParseConfig("{\n  \"M\": 10,\n  \"seed\": ,\n}");
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3);
    EXPECT_GT(e.column(), 0);
  }
}

TEST(ConfigTest, MissingMapIsConfigError) {
  json j = SmallHarvest();
  j["environment"]["map"] = "does_not_exist.txt";
  EXPECT_EQ(ConfigErrorField(j.dump()), "environment.map");
}

TEST(ConfigTest, CustomMapRelativeToConfig) {
  const fs::path dir = TempDir("map");
  fs::create_directories(dir);
  std::ofstream(dir / "tiny.txt") << "#######\n#0A1A2#\n#AAAAA#\n#######\n";
  json j = SmallHarvest();
  j["environment"]["map"] = "tiny.txt";
  std::ofstream(dir / "cfg.json") << j.dump();
  const ExperimentConfig c = LoadConfig((dir / "cfg.json").string());
  EXPECT_EQ(std::get<HarvestConfig>(c.environment).map.width, 7);
  fs::remove_all(dir);
}

TEST(SpearmanTest, Values) {
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3, 4}, {10, 20, 30, 40}), 1.0);
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3, 4}, {4, 3, 2, 1}), -1.0);
  EXPECT_DOUBLE_EQ(SpearmanCorrelation({1, 2, 3}, {1, 3, 2}), 0.5);
  EXPECT_TRUE(std::isnan(SpearmanCorrelation({1}, {1})));
  EXPECT_TRUE(std::isnan(SpearmanCorrelation({1, 2}, {3, 3})));
}

TEST(SpearmanTest, TiesUseAverageRanks) {
  // Ranks x: 1, 2.5, 2.5, 4; y: 1, 2, 3, 4.
  const double r = SpearmanCorrelation({1, 2, 2, 3}, {1, 2, 3, 4});
  EXPECT_NEAR(r, 0.9486832980505138, 1e-12);
}

TEST(RankingTest, DescendingStable) {
  EXPECT_EQ(DescendingRanking({1.0, 3.0, 2.0, 3.0}), (std::vector<int>{1, 3, 2, 0}));
}

TEST(ExperimentTest, RunReportContents) {
  const ExperimentConfig c = ParseConfig(SmallPredatorPrey().dump());
  const ReportBundle b = RunExperiment(c, Command::kRun);
  ASSERT_EQ(b.modes.size(), 1u);
  EXPECT_FALSE(b.modes[0].exact);
  const json r = json::parse(ResultsJson(b));
  EXPECT_EQ(r["command"], "run");
  EXPECT_EQ(r["modes"][0]["monte_carlo"]["values"].size(), 3u);
  EXPECT_EQ(r["modes"][0]["monte_carlo"]["rollouts"], 2 * 30 * 3);
  EXPECT_EQ(r["performance"]["event"], "catches");
  EXPECT_EQ(r["performance"]["agents"].size(), 4u);
  EXPECT_EQ(r["ordering"]["shapley"].size(), 3u);
  EXPECT_FALSE(r["config"].contains("workers"));

  double sum = 0.0;
  for (const json& v : r["modes"][0]["monte_carlo"]["values"]) sum += v["phi"].get<double>();
  EXPECT_NEAR(sum, r["modes"][0]["monte_carlo"]["sum_phi"].get<double>(), 1e-9);

  const std::string summary = SummaryText(b);
  char expected[64];
  std::snprintf(expected, sizeof expected, "total phi = %.4f",
                r["modes"][0]["monte_carlo"]["sum_phi"].get<double>());
  EXPECT_NE(summary.find(expected), std::string::npos) << summary;
  EXPECT_NE(summary.find("Orderings match: "), std::string::npos);
}

TEST(ExperimentTest, CompareExactIncludesComparison) {
  const ExperimentConfig c = ParseConfig(SmallPredatorPrey().dump());
  const ReportBundle b = RunExperiment(c, Command::kCompareExact);
  ASSERT_TRUE(b.modes[0].exact);
  const json r = json::parse(ResultsJson(b));
  const json& cmp = r["modes"][0]["comparison"];
  EXPECT_EQ(cmp["agents"].size(), 3u);
  EXPECT_EQ(r["modes"][0]["exact"]["method"], "exact");
  EXPECT_EQ(r["modes"][0]["exact"]["rollouts"], 8 * 10);
}

TEST(ExperimentTest, ExclusionGaps) {
  json j = SmallPredatorPrey();
  j["exclusion"] = json::array({"noop", "random", "replace"});
  const ReportBundle b = RunExperiment(ParseConfig(j.dump()), Command::kRun);
  ASSERT_EQ(b.modes.size(), 3u);
  const json r = json::parse(ResultsJson(b));
  ASSERT_EQ(r["exclusion_gaps"].size(), 3u);
  const json& g = r["exclusion_gaps"][0];
  double mean = 0.0;
  for (int i = 0; i < 3; ++i) {
    const double gap =
        b.modes[0].monte_carlo.estimate.values[i] - b.modes[1].monte_carlo.estimate.values[i];
    EXPECT_NEAR(g["agents"][i]["gap"].get<double>(), gap, 1e-9);
    mean += gap / 3.0;
  }
  EXPECT_NEAR(g["mean_gap"].get<double>(), mean, 1e-9);
}

TEST(ExperimentTest, SweepReport) {
  json j = SmallPredatorPrey();
  j["sweep"] = {{"agent", 0}, {"param", "speed"}, {"values", {0.4, 1.2, 2.4}}};
  const ReportBundle b = RunExperiment(ParseConfig(j.dump()), Command::kSweep);
  ASSERT_EQ(b.sweep_points.size(), 3u);
  EXPECT_EQ(b.sweep_player, 0);
  const json r = json::parse(ResultsJson(b));
  EXPECT_EQ(r["sweep"]["points"].size(), 3u);
  std::vector<double> x;
  std::vector<double> y;
  for (const SweepPoint& p : b.sweep_points) {
    x.push_back(p.value);
    y.push_back(p.estimate.values[0]);
  }
  EXPECT_EQ(b.sweep_spearman, SpearmanCorrelation(x, y));
  EXPECT_THROW(RunExperiment(ParseConfig(SmallPredatorPrey().dump()), Command::kSweep), StageError);
}

TEST(ExperimentTest, HarvestMetricsAndSkipped) {
  const ReportBundle b = RunExperiment(ParseConfig(SmallHarvest().dump()), Command::kRun);
  const json r = json::parse(ResultsJson(b));
  EXPECT_EQ(r["performance"]["event"], "apples_eaten");
  const json& met = r["metrics"];
  double sum = 0.0;
  for (const json& a : met["per_agent"]) sum += a["efficiency"].get<double>();
  EXPECT_NEAR(sum, met["efficiency"].get<double>(), 1e-9);
  bool idle_skipped = false;
  for (const json& s : met["skipped"]) {
    if (s["metric"] == "sustainability[idle]") idle_skipped = true;
  }
  EXPECT_TRUE(idle_skipped);
  EXPECT_NE(SummaryText(b).find("sustainability[idle]: agent never received"), std::string::npos);
}

TEST(ExperimentTest, AllZeroRewardMetricsSkipped) {
  json j = SmallHarvest();
  for (auto& a : j["agents"]) a["policy"] = "lazy";
  const ReportBundle b = RunExperiment(ParseConfig(j.dump()), Command::kRun);
  EXPECT_FALSE(b.equality.value);
  EXPECT_FALSE(b.sustainability.value);
  const json r = json::parse(ResultsJson(b));
  EXPECT_TRUE(r["metrics"]["equality"]["value"].is_null());
  EXPECT_GE(r["metrics"]["skipped"].size(), 2u);
  EXPECT_NE(SummaryText(b).find("Skipped:"), std::string::npos);
}

TEST(ExperimentTest, IdenticalAcrossRerunsAndWorkers) {
  ExperimentConfig c = ParseConfig(SmallPredatorPrey().dump());
  const std::string a = ResultsJson(RunExperiment(c, Command::kRun));
  const std::string b = ResultsJson(RunExperiment(c, Command::kRun));
  c.workers = 4;
  const std::string d = ResultsJson(RunExperiment(c, Command::kRun));
  EXPECT_EQ(a, b);
  EXPECT_EQ(a, d);
}

TEST(ExperimentTest, StageErrorsCarryStage) {
  json j = SmallPredatorPrey();
  j["exact_capacity"] = 2;
  try {
    RunExperiment(ParseConfig(j.dump()), Command::kCompareExact);
    FAIL() << "expected StageError";
  } catch (const StageError& e) {
    EXPECT_EQ(e.stage(), "exact[noop]");
    EXPECT_EQ(e.kind(), ErrorKind::kCapacity);
  }
}

TEST(ReportTest, EmitWritesFilesAndStatus) {
  const fs::path dir = TempDir("emit");
  json j = SmallPredatorPrey();
  j["exclusion"] = json::array({"noop", "random"});
  const ReportBundle b = RunExperiment(ParseConfig(j.dump()), Command::kCompareExact);
  EmitReport(b, dir.string());
  for (const char* f :
       {"results.json", "shapley.csv", "events.csv", "metrics_per_agent.csv", "comparison.csv",
        "exclusion_gaps.csv", "summary.txt", "timing.json", "status.json", "marginals_noop.csv"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const json status = json::parse(ReadFile(dir / "status.json"));
  EXPECT_EQ(status["status"], "complete");
  EXPECT_EQ(ReadFile(dir / "results.json"), ResultsJson(b));
  EXPECT_EQ(ReadFile(dir / "summary.txt"), SummaryText(b));
  const std::string shapley = ReadFile(dir / "shapley.csv");
  EXPECT_EQ(shapley.substr(0, shapley.find('\n')),
            "mode,method,player,agent,name,phi,stderr,samples");
  fs::remove_all(dir);
}

TEST(ReportTest, MarkIncomplete) {
  const fs::path dir = TempDir("incomplete");
  MarkIncomplete(dir.string(), "attribution[noop]", "boom");
  const json status = json::parse(ReadFile(dir / "status.json"));
  EXPECT_EQ(status["status"], "incomplete");
  EXPECT_EQ(status["stage"], "attribution[noop]");
  EXPECT_EQ(status["error"], "boom");
  fs::remove_all(dir);
}

}  // namespace
}  // namespace shapmarl
