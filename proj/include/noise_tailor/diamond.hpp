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

#include <string>

#include "noise_tailor/sdp.hpp"
#include "noise_tailor/superop.hpp"

namespace noise_tailor {

enum class DiamondMethod { sdp, pauli_exact, unitary_exact };

const char* method_name(DiamondMethod m);

struct DiamondResult {
  double value = 0.0;
  double primal_dual_gap = 0.0;
  DiamondMethod method = DiamondMethod::sdp;
  int iterations = 0;
};

/// Half the diamond norm of e - target, computed by semidefinite
/// programming:  max <J, W>  s.t.  0 <= W <= rho (x) I,  Tr rho = 1,
/// where J is the unnormalised Choi matrix of the difference.
///
/// Throws SdpNotConverged when the solver misses its tolerances.
DiamondResult diamond_distance(const SuperOp& e, const SuperOp& target,
                               const SdpOptions& options = {});

/// Closed form for a Pauli channel against the identity: sum_{P != I} c_P.
double pauli_diamond(const PauliChannel& c);

/// Closed form for two unitary channels: sin(arc / 2) where arc is the
/// shortest arc of the unit circle containing the spectrum of v^dagger u,
/// or 1 when no such arc shorter than pi exists.
double unitary_diamond(const CMatrix& u, const CMatrix& v);

/// 1/2 |rho - sigma|_1.
double trace_distance(const CMatrix& rho, const CMatrix& sigma);

struct BoundReport {
  std::string channel;
  double e_f = 0.0;
  double eps_diamond = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  double ratio = 1.0;
};

/// Checks e_F <= eps_diamond <= sqrt(e_F) * 2^n within `slack`. Throws
/// InvariantViolation naming `channel` when either side fails.
BoundReport check_bounds(double e_f, double eps_diamond, int n,
                         const std::string& channel, double slack = 1e-9);

}  // namespace noise_tailor
