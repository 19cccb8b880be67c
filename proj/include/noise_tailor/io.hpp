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
#include <vector>

#include <json.hpp>

#include "noise_tailor/circuit.hpp"
#include "noise_tailor/gateset.hpp"
#include "noise_tailor/inference.hpp"
#include "noise_tailor/sim.hpp"
#include "noise_tailor/superop.hpp"
#include "noise_tailor/wildcard.hpp"

namespace noise_tailor {

using Json = nlohmann::ordered_json;

inline constexpr const char* kPauliBasisTag = "pauli-IXYZ-msbfirst";

/// {n, basis, rows} with rows in row-major order.
Json superop_to_json(const SuperOp& op);
SuperOp superop_from_json(const Json& j);

/// {qubits, layers, frame: {pauli, flips}, provenance: {base, r}} plus the
/// suite position when known.
Json circuit_to_json(const Circuit& c);
Circuit circuit_from_json(const Json& j);

/// A suite is an array of circuits. Circuits carrying a structure block are
/// regrouped into fiducials and germs on load so that the fast likelihood
/// path applies.
Json suite_to_json(const CircuitSuite& suite);
CircuitSuite suite_from_json(const Json& j);
Json circuits_to_json(const std::vector<Circuit>& circuits);
std::vector<Circuit> circuits_from_json(const Json& j);

/// {"_meta": {...}, "<circuit id>": {"00": n, "01": n, "10": n, "11": n}, ...}
Json dataset_to_json(const DataSet& ds);
DataSet dataset_from_json(const Json& j);

Json spam_to_json(const Spam& spam);
Json gateset_to_json(const GateSet& gs);
GateSet gateset_from_json(const Json& j);

Json fit_to_json(const FitResult& fit);
Json wildcard_to_json(const WildcardBudget& w);

/// Outcome key "b0b1" of outcome index 2 b0 + b1.
std::string outcome_key(int outcome);

std::string read_text(const std::string& path);
/// Writes atomically enough for our purposes: creates parent directories.
void write_text(const std::string& path, const std::string& text);
Json read_json(const std::string& path);
void write_json(const std::string& path, const Json& j);

}  // namespace noise_tailor
