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

#include "noise_tailor/wildcard.hpp"

#include <algorithm>
#include <cmath>

namespace noise_tailor {

namespace {

constexpr int kSpamVar = kNumCycles;
constexpr int kVars = kNumCycles + 1;

}  // namespace

double WildcardBudget::max_gate() const {
  return *std::max_element(gates.begin(), gates.end());
}

double wildcard_slack(double shots, double alpha, int outcomes) {
  if (shots <= 0.0) throw InvalidInput("wildcard slack needs positive shots");
  if (alpha <= 0.0 || alpha >= 1.0) throw InvalidInput("alpha must lie in (0, 1)");
  return std::sqrt(std::log(std::pow(2.0, outcomes) / alpha) / (2.0 * shots));
}

WildcardBudget wildcard_budget(const Likelihood& lik, const GateSet& model,
                               const WildcardOptions& opts) {
  const auto probs = lik.probabilities(model);
  const auto& counts = lik.counts();
  const auto& circuits = lik.circuits();

  double alpha = 1.0 - opts.confidence;
  if (opts.simultaneous && !circuits.empty()) alpha /= static_cast<double>(circuits.size());

  WildcardBudget out;
  SdpProblem prob;
  prob.b = Vector::Constant(kVars, -1.0);  // maximise -sum w
  for (int v = 0; v < kVars; ++v) {
    SdpBlock lower(1);  // w_v >= 0
    lower.add_hermitian(v, 0, 0, -1.0);
    prob.blocks.push_back(std::move(lower));
    SdpBlock upper(1);  // 1 - w_v >= 0
    upper.c(0, 0) = 1.0;
    upper.add_hermitian(v, 0, 0, 1.0);
    prob.blocks.push_back(std::move(upper));
  }
  struct Row {
    std::array<double, kVars> n{};
    double rhs;
  };
  std::vector<Row> rows;
  for (std::size_t i = 0; i < circuits.size(); ++i) {
    double shots = 0.0;
    for (double c : counts[i]) shots += c;
    if (shots <= 0.0) continue;
    std::array<double, kNumOutcomes> f{};
    for (int o = 0; o < kNumOutcomes; ++o) f[static_cast<std::size_t>(o)] = counts[i][static_cast<std::size_t>(o)] / shots;
    double d = 0.0;
    for (int o = 0; o < kNumOutcomes; ++o) {
      d += std::abs(f[static_cast<std::size_t>(o)] - probs[i][static_cast<std::size_t>(o)]);
    }
    d *= 0.5;
    out.max_tvd = std::max(out.max_tvd, d);
    const double rhs = d - wildcard_slack(shots, alpha);
    if (rhs <= 0.0) continue;
    Row r;
    r.rhs = rhs;
    for (const Layer& l : circuits[i].layers) r.n[static_cast<std::size_t>(l.label())] += 1.0;
    r.n[kSpamVar] = 1.0;
    rows.push_back(r);
  }
  out.active_constraints = static_cast<int>(rows.size());
  if (rows.empty()) return out;
  for (const Row& r : rows) {
    SdpBlock blk(1);  // sum n w - rhs >= 0
    blk.c(0, 0) = -r.rhs;
    for (int v = 0; v < kVars; ++v) {
      if (r.n[static_cast<std::size_t>(v)] != 0.0) {
        blk.add_hermitian(v, 0, 0, -r.n[static_cast<std::size_t>(v)]);
      }
    }
    prob.blocks.push_back(std::move(blk));
  }
  const SdpSolution sol = solve_sdp(prob, opts.sdp);
  if (!sol.converged) {
    throw SdpNotConverged("wildcard linear program did not converge",
                          sol.primal_objective, sol.dual_objective);
  }
  for (int v = 0; v < kNumCycles; ++v) {
    out.gates[static_cast<std::size_t>(v)] = std::clamp(sol.y(v), 0.0, 1.0);
  }
  out.spam = std::clamp(sol.y(kSpamVar), 0.0, 1.0);
  out.total = out.spam;
  for (double w : out.gates) out.total += w;
  for (const Row& r : rows) {
    double cover = 0.0;
    for (int v = 0; v < kVars; ++v) {
      const double w = v == kSpamVar ? out.spam : out.gates[static_cast<std::size_t>(v)];
      cover += r.n[static_cast<std::size_t>(v)] * w;
    }
    if (cover < r.rhs - 1e-6) ++out.violated_after;
  }
  return out;
}

}  // namespace noise_tailor
