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

#include "noise_tailor/rc.hpp"

#include <random>
#include <vector>

namespace noise_tailor {

Circuit compile_with_paulis(const Circuit& base,
                            std::span<const PauliString> paulis) {
  Circuit out = base;
  out.base_id = base.base_id.empty() ? base.id() : base.base_id;
  PauliString frame(2);
  std::size_t next = 0;
  static constexpr int kCzQubits[] = {0, 1};
  for (Layer& layer : out.layers) {
    if (layer.dressed()) {
      throw InvalidInput("circuit is already randomized");
    }
    if (layer.cz) {
      frame = conjugate_through_clifford(frame, CliffordLabel::CZ, kCzQubits);
      continue;
    }
    if (next >= paulis.size()) {
      throw InvalidInput("too few frame Paulis for the circuit");
    }
    const PauliString& p = paulis[next++];
    if (p.num_qubits() != 2) throw DimensionMismatch("frame Paulis act on 2 qubits");
    for (int q = 0; q < 2; ++q) {
      auto& op = layer.ops[static_cast<std::size_t>(q)];
      op.post = p.factor(q);
      op.pre = frame.factor(q);
    }
    frame = p.unsigned_part();
  }
  if (next != paulis.size()) {
    throw InvalidInput("more frame Paulis than single-qubit layers");
  }
  out.frame = frame.unsigned_part();
  out.flips = {frame.x_bit(0) ? 1 : 0, frame.x_bit(1) ? 1 : 0};
  return out;
}

Circuit randomize(const Circuit& base, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, 15);
  std::vector<PauliString> paulis;
  for (const Layer& l : base.layers) {
    if (!l.cz) paulis.push_back(PauliString::from_index(2, pick(rng)));
  }
  return compile_with_paulis(base, paulis);
}

Circuit randomize_indexed(const Circuit& base, std::uint64_t master, int r) {
  const std::string key = base.base_id.empty() ? base.id() : base.base_id;
  Circuit c = randomize(base, derive_seed(master, key, r));
  c.randomization = r;
  return c;
}

int correct_outcome(int outcome, const std::array<int, 2>& flips) {
  return outcome ^ (2 * flips[0] + flips[1]);
}

ShotPlan plan_shots(int k, int n) {
  if (k <= 0) throw InvalidInput("shot count must be positive");
  if (n < 0) throw InvalidInput("randomization count must be nonnegative");
  if (n == 0) return {k, 0, k};
  if (k % n != 0) {
    throw InvalidInput("K = " + std::to_string(k) +
                       " is not divisible by N = " + std::to_string(n));
  }
  return {k, n, k / n};
}

SuperOp sampled_twirl(const SuperOp& e, int count, std::mt19937_64& rng) {
  if (count < 1) throw InvalidInput("sampled twirl needs at least one Pauli");
  const int n = e.num_qubits();
  std::uniform_int_distribution<std::size_t> pick(0, static_cast<std::size_t>(e.dim()) - 1);
  Matrix acc = Matrix::Zero(e.dim(), e.dim());
  for (int k = 0; k < count; ++k) {
    const Vector d = pauli_conjugation_diagonal(PauliString::from_index(n, pick(rng)));
    acc += d.asDiagonal() * e.matrix() * d.asDiagonal();
  }
  return SuperOp(n, acc / static_cast<double>(count));
}

double off_diagonal_mass(const SuperOp& e) {
  Matrix off = e.matrix();
  off.diagonal().setZero();
  return off.norm();
}

}  // namespace noise_tailor
