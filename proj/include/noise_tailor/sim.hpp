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

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "noise_tailor/circuit.hpp"
#include "noise_tailor/rc.hpp"
#include "noise_tailor/scenario.hpp"

namespace noise_tailor {

using Distribution = std::array<double, kNumOutcomes>;
using Counts = std::array<double, kNumOutcomes>;

/// Final Pauli-coordinate state of a circuit before measurement. Dressed
/// layers run the base cycle's error after the ideal dressed gate.
Vector propagate(const Circuit& c, const GateSet& gates);

/// Outcome distribution after the classical frame correction. Throws
/// InvariantViolation on probabilities below -1e-9; tiny negatives are
/// clipped and the result renormalised.
Distribution simulate_probs(const Circuit& c, const GateSet& gates);

/// Multinomial draw by sequential binomials.
Counts sample_counts(const Distribution& p, int shots, std::mt19937_64& rng);

struct DataSetMeta {
  int shots = 0;           // K per base circuit
  int randomizations = 0;  // N, 0 = bare circuits
  std::uint64_t seed = 0;
  std::string scenario_hash;
  bool exact = false;      // counts are K * probabilities
};

/// Counts per base circuit in suite order. Counts are stored as doubles so
/// that exact expected counts can be represented.
struct DataSet {
  DataSetMeta meta;
  std::vector<std::string> ids;
  std::vector<Counts> counts;

  std::size_t size() const { return ids.size(); }
  const Counts& at(const std::string& id) const;
  double total(std::size_t i) const;
};

struct ExperimentOptions {
  ShotPlan plan{1000, 0, 1000};
  std::uint64_t seed = 1;
  int threads = 1;
  /// Replace sampling with expected counts.
  bool exact = false;
};

/// Runs every base circuit: bare with K shots when N = 0, otherwise N
/// randomizations with K/N shots each whose corrected counts are merged.
/// Drift advances with the global index base_index * max(N, 1) + r.
DataSet run_experiment(const std::vector<Circuit>& circuits,
                       const NoiseScenario& scenario,
                       const ExperimentOptions& options);

/// Threads from the CLI flag, then NOISE_TAILOR_THREADS, then 1.
int resolve_threads(int flag_value);

}  // namespace noise_tailor
