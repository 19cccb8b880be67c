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
#include <string>
#include <string_view>

#include "noise_tailor/superop.hpp"

namespace noise_tailor {

/// Native single-qubit gates of the two-qubit gate set.
enum class Gate1 : std::uint8_t { I = 0, X90 = 1, Y90 = 2 };

const char* gate1_name(Gate1 g);
Gate1 parse_gate1(std::string_view s);

/// The ten cycles of the gate set: nine products g0 (x) g1 (index 3*g0 + g1)
/// followed by CZ at index 9.
inline constexpr int kNumCycles = 10;
inline constexpr int kCzCycle = 9;
inline constexpr int kNumOutcomes = 4;

struct CycleLabel {
  bool cz = false;
  Gate1 g0 = Gate1::I;
  Gate1 g1 = Gate1::I;

  int index() const;
  static CycleLabel from_index(int idx);
  /// "X90:I" or "CZ".
  std::string name() const;
  static CycleLabel parse(std::string_view s);
  friend bool operator==(const CycleLabel&, const CycleLabel&) = default;
};

/// 2x2 unitary of a native gate; X90 = exp(-i pi/4 X).
CMatrix gate1_unitary(Gate1 g);
CMatrix pauli1_unitary(Pauli1 p);
CMatrix cz_unitary();
/// 4x4 unitary of a cycle, qubit 0 most significant.
CMatrix cycle_unitary(int label);

/// Ideal PTMs of the ten cycles (orthogonal signed permutations).
const std::array<SuperOp, kNumCycles>& ideal_cycles();

/// Prepared state and measurement in Pauli coordinates.
///
/// rho_P = Tr(P rho) / 4 and effect_o[P] = Tr(E_o P), so that the outcome
/// probability of state v is effect_o . v. Outcome o = 2 * b0 + b1.
struct Spam {
  Vector rho;
  std::array<Vector, kNumOutcomes> effects;

  static Spam ideal();
  CMatrix rho_matrix() const;
  CMatrix effect_matrix(int o) const;
  /// Probabilities of the state vector v.
  std::array<double, kNumOutcomes> probabilities(const Vector& v) const;
};

struct GateSet {
  std::array<SuperOp, kNumCycles> gates;
  Spam spam;

  static GateSet ideal();
};

/// PTM of the quantum-to-classical channel rho -> sum_o Tr(E_o rho) |o><o|.
SuperOp measurement_channel(const Spam& spam);

/// Worst-case SPAM error: trace distance of the prepared states plus the
/// diamond distance of the measurement channels.
double spam_distance(const Spam& spam, const Spam& target);

}  // namespace noise_tailor
