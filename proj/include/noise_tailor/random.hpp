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

#include <random>

#include "noise_tailor/superop.hpp"

namespace noise_tailor {

/// Haar-random d x d unitary (QR of a complex Ginibre matrix with phases
/// fixed).
CMatrix random_unitary(int d, std::mt19937_64& rng);

/// Random CPTP channel on n qubits with `rank` Kraus operators, taken
/// from a Haar-random isometry. `strength` in [0, 1] mixes it with the
/// identity channel: (1 - strength) id + strength E.
SuperOp random_cptp(int n, int rank, std::mt19937_64& rng, double strength = 1.0);

/// Random Pauli channel whose total error probability is uniform in
/// [0, max_error].
PauliChannel random_pauli_channel(int n, std::mt19937_64& rng, double max_error = 0.2);

}  // namespace noise_tailor
