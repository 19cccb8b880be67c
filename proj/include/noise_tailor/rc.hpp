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
#include <random>
#include <span>

#include "noise_tailor/circuit.hpp"

namespace noise_tailor {

/// Randomized compiling with explicit frame Paulis, one per single-qubit
/// layer in circuit order. Each such layer becomes P_k L_k F, where F is
/// the frame carried in from the previous layers; CZ layers are untouched
/// and conjugate the frame. The frame left at the end is recorded in
/// `frame` and `flips`.
Circuit compile_with_paulis(const Circuit& base,
                            std::span<const PauliString> paulis);

/// Randomized compiling with Paulis drawn from the stream `seed`.
Circuit randomize(const Circuit& base, std::uint64_t seed);

/// Randomization r of `base` under the master seed, using the derived
/// stream (master, base id, r).
Circuit randomize_indexed(const Circuit& base, std::uint64_t master, int r);

/// Outcome index after the classical frame correction.
int correct_outcome(int outcome, const std::array<int, 2>& flips);

struct ShotPlan {
  int total = 0;           // K
  int randomizations = 0;  // N, 0 for bare circuits
  int per_randomization = 0;
};

/// K shots split over N randomizations; N = 0 means no randomization.
/// Throws InvalidInput unless N divides K.
ShotPlan plan_shots(int k, int n);

/// Mean of P E P over `count` Paulis drawn uniformly with replacement: the
/// channel an error E looks like after `count` randomizations.
SuperOp sampled_twirl(const SuperOp& e, int count, std::mt19937_64& rng);

/// Frobenius norm of the off-diagonal part of a PTM.
double off_diagonal_mass(const SuperOp& e);

}  // namespace noise_tailor
