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

#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "noise_tailor/circuit.hpp"
#include "noise_tailor/inference.hpp"
#include "noise_tailor/report.hpp"
#include "noise_tailor/scenario.hpp"
#include "noise_tailor/wildcard.hpp"

namespace noise_tailor {

inline constexpr const char* kVersion = "0.1.0";

/// Everything `run` needs. Loaded from the [pipeline] table of a config
/// file whose remaining sections describe the noise scenario.
struct PipelineConfig {
  NoiseScenario scenario;
  SuiteOptions suite;
  std::vector<int> randomizations{0, 1, 10, 100};  // N list, 0 = bare circuits
  int shots = 1000;                                // K per base circuit
  std::uint64_t seed = 1;
  int threads = 1;
  bool exact = false;
  FitOptions fit;
  double threshold = 0.01;
  double wildcard_confidence = 0.95;
  bool figures = true;
  std::string out_dir = "out";

  /// Throws ConfigError on unknown keys or an N that does not divide K.
  static PipelineConfig from_json_text(const std::string& text);
  static PipelineConfig load(const std::string& path);

  void validate() const;
  /// Canonical text of the scenario and pipeline settings.
  std::string canonical() const;
  std::uint64_t hash() const;
};

struct PipelineRun {
  int randomizations = 0;
  std::vector<FitResult> fits;
  ModelSelection selection;
  FitResult selected;
  GateSet aligned;
  std::vector<GateMetric> metrics;
  WildcardBudget wildcard;
};

struct PipelineReport {
  std::vector<GateMetric> truth;
  std::vector<PipelineRun> runs;
  /// eps/e_F non-increasing in N and at most the limit at the largest N.
  bool crossover = false;
  std::vector<std::string> crossover_notes;
  std::vector<std::string> files;
};

inline constexpr double kCrossoverRatioLimit = 1.1;
/// Allowed rise of the ratio between consecutive N. Stochastic fits have
/// ratio 1 exactly before alignment; gauge alignment and the SDP move it
/// by a few parts per thousand.
inline constexpr double kCrossoverTolerance = 0.02;

/// Checks the eps_diamond / e_F ordering across the runs (sorted by N).
bool check_crossover(const std::vector<PipelineRun>& runs, std::vector<std::string>* notes,
                     double tolerance = kCrossoverTolerance);

/// Scenario to circuits to data to fits to metrics and figures under
/// config.out_dir. Progress goes to `log`.
PipelineReport run_pipeline(const PipelineConfig& config, std::ostream& log);

}  // namespace noise_tailor
