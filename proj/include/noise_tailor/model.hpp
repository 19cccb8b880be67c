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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

using Mat16 = Eigen::Matrix<double, 16, 16>;
using Vec16 = Eigen::Matrix<double, 16, 1>;

/// The six nested error-model families.
///
/// CPTP: a general two-qubit CPTP error per cycle. S: a two-qubit Pauli
/// channel per cycle. CD / SCD: single-qubit-layer errors factorise into a
/// CPTP / Pauli channel per (layer, qubit). CF / SCF: the factors depend
/// only on (qubit, native gate). CZ keeps a two-qubit error everywhere,
/// CPTP in CD / CF and Pauli in SCD / SCF.
enum class ModelFamily { CPTP, S, CD, SCD, CF, SCF };

const char* family_name(ModelFamily f);
ModelFamily parse_family(std::string_view s);
const std::array<ModelFamily, 6>& all_families();
/// True when every gate set of `small` is also a gate set of `large`.
bool nested_in(ModelFamily small, ModelFamily large);

enum class ComponentKind { Choi2Q, Choi1Q, Stoch2Q, Stoch1Q };

struct Component {
  ComponentKind kind;
  int offset = 0;
  std::string name;

  int size() const;
  /// Structural count after removing the trace-preservation constraint.
  int structural_size() const;
  int dim() const;  // PTM size: 16 or 4
};

/// Prepared-state parameterisation: rho = A A^dagger / Tr(A A^dagger) with A
/// lower triangular (16 reals). Measurement: three free effects in Pauli
/// coordinates, the fourth fixed by completeness (48 reals).
inline constexpr int kPrepParams = 16;
inline constexpr int kPovmParams = 48;
inline constexpr int kSpamStructural = 15 + 48;

/// Gate sets produced by one model family, as functions of a flat real
/// parameter vector.
class GateSetModel {
 public:
  struct GateMap {
    int two_qubit = -1;  // component index, or -1
    int q0 = -1;         // single-qubit factor components
    int q1 = -1;
  };

  struct Eval {
    std::vector<Matrix> component_ptm;
    std::array<Mat16, kNumCycles> errors;
    std::array<Mat16, kNumCycles> gates;
    Vec16 rho;
    std::array<Vec16, kNumOutcomes> effects;
  };

  struct Adjoint {
    std::array<Mat16, kNumCycles> gates;
    Vec16 rho;
    std::array<Vec16, kNumOutcomes> effects;

    void set_zero();
  };

  explicit GateSetModel(ModelFamily family);

  ModelFamily family() const { return family_; }
  int num_params() const { return num_params_; }
  /// Sum of structural component sizes plus SPAM.
  int structural_param_count() const;
  const std::vector<Component>& components() const { return components_; }
  const std::array<GateMap, kNumCycles>& gate_map() const { return gate_map_; }
  int prep_offset() const { return prep_offset_; }
  int povm_offset() const { return povm_offset_; }

  void forward(std::span<const double> x, Eval& out) const;
  /// Chain rule from gradients with respect to the gate PTMs and SPAM
  /// vectors to the parameters. `grad` is overwritten.
  void backward(std::span<const double> x, const Eval& ev, const Adjoint& adj,
                std::span<double> grad) const;

  GateSet to_gateset(std::span<const double> x) const;
  /// Parameters whose gate set approximates `gs` (exactly when gs lies in
  /// the family, up to a 1e-6 depolarising regulariser on Choi factors).
  Vector embed(const GateSet& gs, double regulariser = 1e-6) const;

 private:
  ModelFamily family_;
  std::vector<Component> components_;
  std::array<GateMap, kNumCycles> gate_map_{};
  int prep_offset_ = 0;
  int povm_offset_ = 0;
  int num_params_ = 0;
};

/// Component-level maps, exposed for testing.
Matrix choi_component_ptm(int n, std::span<const double> a_params);
void choi_component_backward(int n, std::span<const double> a_params,
                             const Matrix& dptm, std::span<double> grad);
std::vector<double> choi_component_embed(int n, const Matrix& ptm,
                                         double regulariser = 1e-6);

Matrix stochastic_component_ptm(int n, std::span<const double> s);
void stochastic_component_backward(int n, std::span<const double> s,
                                   const Matrix& dptm, std::span<double> grad);
std::vector<double> stochastic_component_embed(int n, const Matrix& ptm);

}  // namespace noise_tailor
