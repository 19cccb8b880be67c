// Copyright 2026 The noise-tailor Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "noise_tailor/io.hpp"
#include "noise_tailor/pipeline.hpp"

namespace nt = noise_tailor;
namespace fs = std::filesystem;

namespace {

const std::string kCli = NOISE_TAILOR_CLI;
const std::string kConfigs = std::string(NOISE_TAILOR_SOURCE_DIR) + "/configs/";

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("noise_tailor_cli_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

int run_cli(const std::string& args) {
  const std::string cmd = "'" + kCli + "' " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

constexpr const char* kNoiselessConfig = R"(name = "noiseless"

[pipeline]
randomizations = [0, 1]
shots = 1000
seed = 3
exact = true
max_depth = 1
restarts = 0
)";

nt::PipelineRun run_with_ratios(int n, double ratio) {
  nt::PipelineRun r;
  r.randomizations = n;
  for (int g = 0; g < nt::kNumCycles; ++g) {
    nt::GateMetric m;
    m.gate = nt::CycleLabel::from_index(g).name();
    m.ratio = ratio;
    r.metrics.push_back(m);
  }
  return r;
}

}  // namespace

TEST(PipelineConfigTest, ParsesPipelineTable) {
  const auto c = nt::PipelineConfig::load(kConfigs + "paperlike.toml");
  EXPECT_EQ(c.randomizations, (std::vector<int>{0, 1, 10, 100}));
  EXPECT_EQ(c.shots, 1000);
  EXPECT_EQ(c.threshold, 0.01);
  EXPECT_EQ(c.hash(), nt::PipelineConfig::load(kConfigs + "paperlike.toml").hash());
}

TEST(PipelineConfigTest, RejectsBadSettings) {
  EXPECT_THROW(nt::PipelineConfig::from_json_text(
                   R"({"pipeline": {"randomizations": [0, 3], "shots": 1000}})"),
               nt::ConfigError);
  EXPECT_THROW(nt::PipelineConfig::from_json_text(R"({"pipeline": {"bogus": 1}})"),
               nt::ConfigError);
  EXPECT_THROW(nt::PipelineConfig::from_json_text(R"({"pipeline": {"randomizations": [1, 1]}})"),
               nt::ConfigError);
}

TEST(CrossoverTest, NonIncreasingRatiosPass) {
  std::vector<nt::PipelineRun> runs{run_with_ratios(10, 1.05), run_with_ratios(0, 3.0),
                                    run_with_ratios(100, 1.01)};
  std::vector<std::string> notes;
  EXPECT_TRUE(nt::check_crossover(runs, &notes));
  EXPECT_TRUE(notes.empty());
}

TEST(CrossoverTest, RiseBeyondToleranceFails) {
  std::vector<nt::PipelineRun> runs{run_with_ratios(0, 1.0), run_with_ratios(10, 1.05)};
  std::vector<std::string> notes;
  EXPECT_FALSE(nt::check_crossover(runs, &notes));
  EXPECT_FALSE(notes.empty());
  // A rise within the pinned tolerance is noise.
  std::vector<nt::PipelineRun> small{run_with_ratios(0, 1.0), run_with_ratios(10, 1.01)};
  EXPECT_TRUE(nt::check_crossover(small, nullptr));
}

TEST(CrossoverTest, LargeFinalRatioFails) {
  std::vector<nt::PipelineRun> runs{run_with_ratios(0, 2.0), run_with_ratios(100, 1.2)};
  std::vector<std::string> notes;
  EXPECT_FALSE(nt::check_crossover(runs, &notes));
  ASSERT_FALSE(notes.empty());
  EXPECT_NE(notes.front().find("largest N"), std::string::npos);
}

TEST(PipelineTest, ZeroNoiseScenarioIsClean) {
  const auto dir = scratch_dir("zero");
  nt::write_text((dir / "config.toml").string(), kNoiselessConfig);
  auto config = nt::PipelineConfig::load((dir / "config.toml").string());
  config.out_dir = (dir / "out").string();
  std::ostringstream log;
  const auto report = nt::run_pipeline(config, log);
  ASSERT_EQ(report.runs.size(), 2u);
  for (const auto& run : report.runs) {
    EXPECT_TRUE(nt::nested_in(run.selection.chosen, nt::ModelFamily::S))
        << nt::family_name(run.selection.chosen);
    for (const auto& m : run.metrics) {
      EXPECT_LT(m.e_f, 1e-6) << m.gate;
      EXPECT_LT(m.eps_diamond, 1e-4) << m.gate;
    }
    EXPECT_LT(run.wildcard.max_gate(), 1e-9);
    EXPECT_LT(run.wildcard.spam, 1e-9);
  }
  for (const char* f : {"manifest.json", "metrics/gates.csv", "metrics/models.csv",
                        "circuits/suite.json", "datasets/N0.json", "fits/N1.json"}) {
    EXPECT_TRUE(fs::exists(dir / "out" / f)) << f;
  }
  fs::remove_all(dir);
}

TEST(PipelineTest, SameConfigGivesIdenticalTables) {
  const auto dir = scratch_dir("repro");
  const std::string cfg = std::string(R"(name = "repro"

[defaults]
pauli_rates = { XI = 0.002, IZ = 0.003 }

[pipeline]
randomizations = [0, 10]
shots = 1000
seed = 4
max_depth = 1
restarts = 0
figures = false
)");
  nt::write_text((dir / "config.toml").string(), cfg);
  for (const char* sub : {"a", "b"}) {
    auto config = nt::PipelineConfig::load((dir / "config.toml").string());
    config.out_dir = (dir / sub).string();
    std::ostringstream log;
    nt::run_pipeline(config, log);
  }
  int compared = 0;
  for (const auto& e : fs::recursive_directory_iterator(dir / "a")) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension();
    if (ext != ".json" && ext != ".csv") continue;
    const auto rel = fs::relative(e.path(), dir / "a");
    EXPECT_EQ(nt::read_text(e.path().string()), nt::read_text((dir / "b" / rel).string()))
        << rel;
    ++compared;
  }
  EXPECT_GT(compared, 5);
  fs::remove_all(dir);
}

TEST(CliTest, StagesChainThroughFiles) {
  const auto dir = scratch_dir("stages");
  const std::string d = dir.string();
  const std::string scen = kConfigs + "scenarios/markov_stochastic.toml";
  ASSERT_EQ(run_cli("gen-circuits --max-depth 1 --out " + d + "/suite.json"), 0);
  ASSERT_EQ(run_cli("compile-rc --suite " + d + "/suite.json -N 2 --out " + d + "/rc.json"), 0);
  ASSERT_EQ(run_cli("simulate --suite " + d + "/suite.json --scenario " + scen +
                    " -K 1000 -N 10 --seed 5 --out " + d + "/data.json"),
            0);
  ASSERT_EQ(run_cli("fit --suite " + d + "/suite.json --dataset " + d +
                    "/data.json --family S --restarts 0 --out " + d + "/fit"),
            0);
  ASSERT_EQ(run_cli("metrics --fit " + d + "/fit/S.json --out " + d + "/metrics.csv"), 0);
  ASSERT_EQ(run_cli("wildcard --suite " + d + "/suite.json --dataset " + d + "/data.json --fit " +
                    d + "/fit/S.json --out " + d + "/wildcard.json"),
            0);
  ASSERT_EQ(run_cli("cer --cycle CZ --scenario " + scen + " --out " + d + "/cer"), 0);
  ASSERT_EQ(run_cli("cb --cycle idle --exact --out " + d + "/cb.json"), 0);
  for (const char* f : {"suite.json", "rc.json", "data.json", "fit/S.json", "metrics.csv",
                        "wildcard.json", "cer/cer.csv", "cer/cer.json", "cb.json"}) {
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  }
  const auto metrics = nt::read_text((dir / "metrics.csv").string());
  EXPECT_EQ(metrics.rfind("module,method,gate,metric,value", 0), 0u);
  EXPECT_EQ(nt::read_json((dir / "rc.json").string()).size(),
            2 * nt::read_json((dir / "suite.json").string()).size());
  fs::remove_all(dir);
}

TEST(CliTest, ExitCodes) {
  const auto dir = scratch_dir("exit");
  EXPECT_NE(run_cli(""), 0);
  EXPECT_EQ(run_cli("run"), 1);  // --config missing
  EXPECT_EQ(run_cli("simulate --suite " + (dir / "missing.json").string()), 1);
  // A scenario whose rates exceed 1 is an invariant violation.
  nt::write_text((dir / "bad.toml").string(),
                 "name = \"bad\"\n[gates.CZ]\npauli_rates = { XX = 0.6, ZZ = 0.6 }\n");
  ASSERT_EQ(run_cli("gen-circuits --max-depth 1 --out " + (dir / "s.json").string()), 0);
  EXPECT_EQ(run_cli("simulate --suite " + (dir / "s.json").string() + " --scenario " +
                    (dir / "bad.toml").string() + " --out " + (dir / "d.json").string()),
            2);
  fs::remove_all(dir);
}

TEST(CliTest, VerifyPassesAndFaultHookNamesViolation) {
  EXPECT_EQ(run_cli("verify"), 0);
  EXPECT_EQ(run_cli("verify --inject-fault sdp-tolerance"), 1);
}
