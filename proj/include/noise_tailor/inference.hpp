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
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "noise_tailor/circuit.hpp"
#include "noise_tailor/model.hpp"
#include "noise_tailor/sim.hpp"

namespace noise_tailor {

/// Probabilities below this use a quadratic extension of -n log p.
inline constexpr double kDefaultMinProbability = 1e-4;

/// Log-likelihood ratio of a gate set against observed counts.
///
/// Circuits with suite structure share germ-power prefix products, so one
/// evaluation costs O(germs * max_power) matrix products plus O(circuits)
/// matrix-vector products. Circuits without structure are evaluated as
/// single sequences.
class Likelihood {
 public:
  Likelihood(const CircuitSuite& suite, const DataSet& data,
             double p_min = kDefaultMinProbability);
  Likelihood(const std::vector<Circuit>& circuits, const DataSet& data,
             double p_min = kDefaultMinProbability);

  std::size_t num_circuits() const { return circuit_count_; }
  /// Independent outcome frequencies: 3 per circuit.
  int n_max() const { return 3 * static_cast<int>(circuit_count_); }
  double p_min() const { return p_min_; }

  /// F = sum n log(f / p); lambda = 2 F. Fills `adj` with dF/d(gates,
  /// rho, effects) when non-null.
  double half_lambda(const GateSetModel::Eval& ev, GateSetModel::Adjoint* adj) const;
  double lambda(const GateSet& gs) const;
  /// Model probabilities per circuit, in construction order.
  std::vector<Distribution> probabilities(const GateSet& gs) const;
  const std::vector<Counts>& counts() const { return counts_; }
  const std::vector<Circuit>& circuits() const { return circuits_; }

 private:
  struct Term {
    int prep;
    int meas;
    int power;
    int circuit;
  };
  struct Germ {
    std::vector<int> labels;
    int max_power = 0;
    std::vector<Term> terms;  // sorted by power
  };

  void build(const std::vector<LayerSequence>& preps,
             const std::vector<LayerSequence>& meas,
             const std::vector<LayerSequence>& germs, const DataSet& data);
  int add_custom(const Circuit& c);
  static GateSetModel::Eval eval_of(const GateSet& gs);

  double p_min_;
  std::size_t circuit_count_ = 0;
  std::vector<Circuit> circuits_;
  std::vector<Counts> counts_;
  std::vector<std::vector<int>> preps_;
  std::vector<std::vector<int>> meas_;
  std::vector<Germ> germs_;
};

struct FitOptions {
  int restarts = 3;
  int max_iterations = 5000;
  double gradient_tolerance = 1e-6;
  double function_tolerance = 1e-12;
  double max_seconds = 600.0;
  double restart_scale = 0.02;
  std::uint64_t seed = 1;
};

struct FitResult {
  ModelFamily family = ModelFamily::CPTP;
  Vector params;
  GateSet gateset;
  double lambda = 0.0;
  int n_max = 0;
  int n_params = 0;  // non-gauge count
  int n_params_structural = 0;
  int k = 0;         // n_max - n_params
  double n_sigma = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Maximum-likelihood fit by L-BFGS from `start` (default: ideal gates),
/// followed by `restarts` perturbed restarts from the incumbent.
FitResult fit_model(const Likelihood& lik, ModelFamily family, const FitOptions& opts,
                    const std::optional<GateSet>& start = std::nullopt);

/// Fits all six families bottom-up, each warm-started from the best fit of
/// the families nested inside it.
std::vector<FitResult> fit_all_families(const Likelihood& lik, const FitOptions& opts);

/// Non-gauge parameter count rank([J_model J_gauge]) - rank(J_gauge) at a
/// generic point, computed once per family and cached.
int nongauge_parameter_count(ModelFamily family);

/// N_sigma = (lambda - k) / sqrt(2k).
double n_sigma(double lambda, int k);

/// gamma = (lambda_small - lambda_large) / (Np_large - Np_small), clamped at 0.
double gamma_statistic(const FitResult& small, const FitResult& large);

struct ModelSelection {
  ModelFamily chosen = ModelFamily::CPTP;
  std::vector<std::vector<ModelFamily>> branches;  // visited path per branch
  std::map<std::string, double> gammas;            // "CPTP>S" -> gamma
};

/// Descends CPTP > S > SCD > SCF and CPTP > CD > CF > SCF while gamma <= 1,
/// then keeps the endpoint with fewer parameters.
ModelSelection select_model(const std::vector<FitResult>& fits);

const FitResult& find_fit(const std::vector<FitResult>& fits, ModelFamily f);

}  // namespace noise_tailor
