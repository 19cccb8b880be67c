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

#include <span>

#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

/// Gauge transform G -> T^-1 G T, rho -> T^-1 rho, e -> T^T e.
GateSet apply_gauge(const GateSet& gs, const Matrix& t);

/// T = PTM(exp(-i sum_P h_P P)) diag(1, exp(a_P)) over the 15 non-identity
/// Paulis: 30 parameters, h first.
Matrix gauge_transform(std::span<const double> params);

struct GaugeOptions {
  double spam_weight = 1.0;
  int max_iterations = 400;
  /// Also optimise the diagonal factor. Off by default: a non-uniform
  /// diagonal gauge rescales Pauli fidelities and can leave gates that are
  /// no longer completely positive, which inflates diamond distances.
  bool diagonal = false;
};

struct GaugeResult {
  GateSet aligned;
  Matrix transform;
  double distance_before = 0.0;  // squared Frobenius objective
  double distance_after = 0.0;
};

/// Gauge that minimises the summed squared Frobenius distance of gates and
/// SPAM vectors to `target`. Probabilities are unchanged.
GaugeResult gauge_align(const GateSet& gs, const GateSet& target,
                        const GaugeOptions& opts = {});

double gauge_objective(const GateSet& gs, const GateSet& target, double spam_weight);

}  // namespace noise_tailor
