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

#include "noise_tailor/inference.hpp"
#include "noise_tailor/sdp.hpp"

namespace noise_tailor {

struct WildcardOptions {
  double confidence = 0.95;
  /// Split 1 - confidence evenly over the circuits so that the slack holds
  /// for all of them at once. Per-circuit slack leaves a few circuits
  /// uncovered by chance alone once the suite has thousands of circuits.
  bool simultaneous = true;
  SdpOptions sdp{};
};

/// Per-cycle and SPAM wildcard error rates.
struct WildcardBudget {
  std::array<double, kNumCycles> gates{};
  double spam = 0.0;
  double total = 0.0;
  int active_constraints = 0;  // circuits whose TVD exceeds the slack
  int violated_after = 0;      // circuits still uncovered (should be 0)
  double max_tvd = 0.0;

  double max_gate() const;
};

/// Statistical slack sqrt(ln(2^outcomes / alpha) / (2 K)) of the TVD
/// between an empirical and true distribution at confidence 1 - alpha.
double wildcard_slack(double shots, double alpha, int outcomes = kNumOutcomes);

/// Smallest sum of rates with 0 <= w <= 1 such that every circuit C obeys
/// sum_G n_G(C) w_G + w_spam >= TVD(f_C, p_C) - slack_C, solved as a linear
/// program by the SDP engine.
WildcardBudget wildcard_budget(const Likelihood& lik, const GateSet& model,
                               const WildcardOptions& opts = {});

}  // namespace noise_tailor
