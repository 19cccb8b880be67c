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
#include <string>
#include <vector>

#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

/// Single-qubit operation of a layer: post * base * pre, where post and pre
/// are Paulis absorbed by randomized compiling.
struct QubitOp {
  Gate1 base = Gate1::I;
  Pauli1 post = Pauli1::I;
  Pauli1 pre = Pauli1::I;

  bool dressed() const { return post != Pauli1::I || pre != Pauli1::I; }
  friend bool operator==(const QubitOp&, const QubitOp&) = default;
};

/// One cycle. A CZ layer carries no dressing.
struct Layer {
  bool cz = false;
  std::array<QubitOp, 2> ops{};

  static Layer from_label(int label);
  static Layer parse(const std::vector<std::string>& tokens);

  int label() const;
  bool dressed() const { return ops[0].dressed() || ops[1].dressed(); }
  /// JSON tokens: ["X90", "I"], ["CZ"], or dressed ["Z.X90.X", "I"].
  std::vector<std::string> tokens() const;
  std::string str() const;
  friend bool operator==(const Layer&, const Layer&) = default;
};

/// Where a suite circuit came from: prep fiducial, germ power, meas fiducial.
struct CircuitStructure {
  int prep = -1;
  int germ = -1;
  int power = 0;
  int meas = -1;
};

struct Circuit {
  std::vector<Layer> layers;
  /// Pauli frame left after the last layer (bookkeeping only).
  PauliString frame{2};
  /// Classical bit flips applied to the measured outcome.
  std::array<int, 2> flips{0, 0};
  std::string base_id;
  int randomization = -1;
  CircuitStructure structure;

  /// Canonical id of the layer sequence; "{}" for the empty circuit.
  std::string id() const;
  std::size_t depth() const { return layers.size(); }
};

using LayerSequence = std::vector<Layer>;

/// Parameters of the structured suite.
struct SuiteOptions {
  int max_depth = 8;
  int pairs_per_germ = 24;
  int max_extra_germs = 6;
  std::uint64_t seed = 1;
};

struct CircuitSuite {
  std::vector<LayerSequence> prep_fiducials;
  std::vector<LayerSequence> meas_fiducials;
  std::vector<LayerSequence> germs;
  std::vector<int> depths;
  std::vector<Circuit> circuits;
  SuiteOptions options;
};

/// Two-qubit fiducials built from single-qubit sequences, padded with idle.
std::vector<LayerSequence> prep_fiducials();
std::vector<LayerSequence> meas_fiducials();

/// Rank of the 16 x 16 frame matrices spanned by the fiducials applied to
/// the ideal state (prep) or ideal effects (meas).
int prep_frame_rank(const std::vector<LayerSequence>& fids);
int meas_frame_rank(const std::vector<LayerSequence>& fids);

/// Rank of the amplified Jacobian of the germ list with respect to the
/// Hamiltonian and stochastic error rates of all ten cycles.
int germ_amplification_rank(const std::vector<LayerSequence>& germs);

/// Greedy germ selection: every single cycle, then pairs that raise the
/// amplified rank.
std::vector<LayerSequence> select_germs(int max_extra);

/// Builds prep-fiducial, germ^(L/|germ|), meas-fiducial circuits for
/// L = 1, 2, 4, ..., max_depth. Throws when the fiducials are not
/// informationally complete.
CircuitSuite generate_suite(const SuiteOptions& options);

/// Ideal PTM of a (possibly dressed) layer.
Matrix ideal_layer_ptm(const Layer& layer);

/// splitmix64 finaliser, used for derived random streams.
std::uint64_t mix64(std::uint64_t x);
/// Seed for the stream of (master, key, index), independent of scheduling.
std::uint64_t derive_seed(std::uint64_t master, const std::string& key,
                          std::int64_t index);

}  // namespace noise_tailor
