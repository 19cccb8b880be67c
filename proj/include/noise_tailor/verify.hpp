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
#include <string>
#include <vector>

#include "noise_tailor/sdp.hpp"

namespace noise_tailor {

struct VerifyCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 7;
  /// Solver settings for every diamond-norm SDP. The CLI fault hook
  /// loosens them to show that the checklist catches a bad solver.
  SdpOptions sdp{};
};

/// Settings used by the fault-injection hook.
SdpOptions corrupted_sdp_options();

/// Oracle checklist: SDP against closed forms, diamond bounds, twirl
/// identities, RC equivalence and Walsh-Hadamard round trips.
std::vector<VerifyCheck> run_verify(const VerifyOptions& opts = {});

}  // namespace noise_tailor
