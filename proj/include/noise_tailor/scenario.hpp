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
#include <optional>
#include <string>
#include <vector>

#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

/// Coherent error exp(-i angle P / 2) about a two-qubit Pauli axis.
struct Rotation {
  PauliString axis{2};
  double angle = 0.0;
};

/// Error model of one cycle, applied after the ideal gate as
/// Pauli o amplitude damping o rotations.
struct GateErrorSpec {
  std::vector<Rotation> rotations;
  double zz = 0.0;                        // angle of exp(-i zz ZZ / 2)
  std::map<std::string, double> pauli_rates;  // "XI" -> probability
  std::array<double, 2> amplitude_damping{0.0, 0.0};

  bool is_zero() const;
};

struct SpamSpec {
  std::array<double, 2> prep_flip{0.0, 0.0};
  std::array<double, 2> eps01{0.0, 0.0};  // read 1 when the qubit is in 0
  std::array<double, 2> eps10{0.0, 0.0};  // read 0 when the qubit is in 1
};

/// theta(i) = theta0 + amplitude * sin(2 pi i / period) about `axis`,
/// added to the listed cycles, where i is the global execution index.
struct DriftSpec {
  double amplitude = 0.0;
  double period = 100.0;
  double theta0 = 0.0;
  PauliString axis{2};
  std::vector<int> gates;

  bool active() const { return amplitude != 0.0 && !gates.empty(); }
  double angle(std::int64_t index) const;
};

/// Extra rotation on qubit 0 about `axis` whenever qubit 1 runs `partner`
/// in a single-qubit cycle.
struct ContextSpec {
  double angle = 0.0;
  Pauli1 axis = Pauli1::Z;
  Gate1 partner = Gate1::X90;
};

struct NoiseScenario {
  std::string name = "unnamed";
  GateErrorSpec defaults;
  std::map<int, GateErrorSpec> gates;
  SpamSpec spam;
  DriftSpec drift;
  ContextSpec context;

  const GateErrorSpec& spec_for(int label) const;

  static NoiseScenario from_json_text(const std::string& text);
  static NoiseScenario from_toml_text(const std::string& text);
  /// Loads .toml or .json by extension.
  static NoiseScenario load(const std::string& path);

  /// Canonical JSON text, used for hashing and provenance.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Error PTM of a cycle. With `drift_index` the drift angle at that index is
/// used, otherwise the drift's mean angle theta0. Throws InvariantViolation
/// naming the cycle when the result is not CPTP; `verify` = false skips the
/// Choi check for callers that already validated the same structure.
SuperOp build_error(const NoiseScenario& s, int label,
                    std::optional<std::int64_t> drift_index = std::nullopt,
                    bool verify = true);

/// Ideal gates composed with their errors, plus noisy SPAM.
GateSet build_gateset(const NoiseScenario& s,
                      std::optional<std::int64_t> drift_index = std::nullopt);

Spam build_spam(const SpamSpec& spec);

/// Converts a TOML document to JSON text.
std::string toml_to_json(const std::string& toml_text);

std::uint64_t fnv1a64(const std::string& text);

}  // namespace noise_tailor
