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

#include "noise_tailor/gateset.hpp"

#include <cmath>
#include <numbers>

#include <unsupported/Eigen/KroneckerProduct>

#include "noise_tailor/diamond.hpp"

namespace noise_tailor {

const char* gate1_name(Gate1 g) {
  switch (g) {
    case Gate1::I: return "I";
    case Gate1::X90: return "X90";
    case Gate1::Y90: return "Y90";
  }
  return "?";
}

Gate1 parse_gate1(std::string_view s) {
  if (s == "I") return Gate1::I;
  if (s == "X90") return Gate1::X90;
  if (s == "Y90") return Gate1::Y90;
  throw InvalidInput("unknown single-qubit gate '" + std::string(s) + "'");
}

int CycleLabel::index() const {
  if (cz) return kCzCycle;
  return 3 * static_cast<int>(g0) + static_cast<int>(g1);
}

CycleLabel CycleLabel::from_index(int idx) {
  if (idx < 0 || idx >= kNumCycles) {
    throw InvalidInput("cycle index out of range");
  }
  if (idx == kCzCycle) return {true, Gate1::I, Gate1::I};
  return {false, static_cast<Gate1>(idx / 3), static_cast<Gate1>(idx % 3)};
}

std::string CycleLabel::name() const {
  if (cz) return "CZ";
  return std::string(gate1_name(g0)) + ":" + gate1_name(g1);
}

CycleLabel CycleLabel::parse(std::string_view s) {
  if (s == "CZ") return {true, Gate1::I, Gate1::I};
  const auto colon = s.find(':');
  if (colon == std::string_view::npos) {
    throw InvalidInput("cycle label '" + std::string(s) +
                       "' must be CZ or g0:g1");
  }
  return {false, parse_gate1(s.substr(0, colon)),
          parse_gate1(s.substr(colon + 1))};
}

CMatrix pauli1_unitary(Pauli1 p) {
  return PauliString::single(1, 0, p).matrix();
}

CMatrix gate1_unitary(Gate1 g) {
  const double c = std::cos(std::numbers::pi / 4);
  const complex mi_s(0.0, -std::sin(std::numbers::pi / 4));
  switch (g) {
    case Gate1::I:
      return CMatrix::Identity(2, 2);
    case Gate1::X90:
      return c * CMatrix::Identity(2, 2) + mi_s * pauli1_unitary(Pauli1::X);
    case Gate1::Y90:
      return c * CMatrix::Identity(2, 2) + mi_s * pauli1_unitary(Pauli1::Y);
  }
  throw InvalidInput("unknown gate");
}

CMatrix cz_unitary() {
  CMatrix u = CMatrix::Identity(4, 4);
  u(3, 3) = -1.0;
  return u;
}

CMatrix cycle_unitary(int label) {
  const CycleLabel c = CycleLabel::from_index(label);
  if (c.cz) return cz_unitary();
  return Eigen::kroneckerProduct(gate1_unitary(c.g0), gate1_unitary(c.g1))
      .eval();
}

const std::array<SuperOp, kNumCycles>& ideal_cycles() {
  static const std::array<SuperOp, kNumCycles> kIdeal = [] {
    std::array<SuperOp, kNumCycles> g;
    for (int i = 0; i < kNumCycles; ++i) {
      SuperOp s = ptm_from_unitary(cycle_unitary(i));
      // Clifford PTMs are signed permutations; remove rounding noise.
      s.matrix() = s.matrix().array().round();
      g[static_cast<std::size_t>(i)] = std::move(s);
    }
    return g;
  }();
  return kIdeal;
}

Spam Spam::ideal() {
  Spam s;
  s.rho = Vector::Zero(16);
  for (int a : {0, 3}) {
    for (int b : {0, 3}) s.rho(4 * a + b) = 0.25;
  }
  for (int o = 0; o < kNumOutcomes; ++o) {
    Vector e = Vector::Zero(16);
    const double z0 = (o >> 1) ? -1.0 : 1.0;
    const double z1 = (o & 1) ? -1.0 : 1.0;
    e(0) = 1.0;
    e(3) = z1;
    e(12) = z0;
    e(15) = z0 * z1;
    s.effects[static_cast<std::size_t>(o)] = e;
  }
  return s;
}

CMatrix Spam::rho_matrix() const { return from_pauli_vector(2, rho); }

CMatrix Spam::effect_matrix(int o) const {
  // E = sum_P Tr(E P) P / d.
  return from_pauli_vector(2, effects.at(static_cast<std::size_t>(o)) / 4.0);
}

std::array<double, kNumOutcomes> Spam::probabilities(const Vector& v) const {
  std::array<double, kNumOutcomes> p{};
  for (int o = 0; o < kNumOutcomes; ++o) {
    p[static_cast<std::size_t>(o)] = effects[static_cast<std::size_t>(o)].dot(v);
  }
  return p;
}

GateSet GateSet::ideal() {
  return GateSet{ideal_cycles(), Spam::ideal()};
}

SuperOp measurement_channel(const Spam& spam) {
  const Spam ref = Spam::ideal();
  Matrix m = Matrix::Zero(16, 16);
  for (int o = 0; o < kNumOutcomes; ++o) {
    // <o|P_i|o> is the ideal effect vector entry for P_i.
    const Vector& diag = ref.effects[static_cast<std::size_t>(o)];
    const Vector& e = spam.effects[static_cast<std::size_t>(o)];
    m += diag * e.transpose() / 4.0;
  }
  return SuperOp(2, std::move(m));
}

double spam_distance(const Spam& spam, const Spam& target) {
  const double prep = trace_distance(spam.rho_matrix(), target.rho_matrix());
  const double meas = diamond_distance(measurement_channel(spam),
                                       measurement_channel(target))
                          .value;
  return prep + meas;
}

}  // namespace noise_tailor
