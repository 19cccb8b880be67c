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
#include <string>
#include <vector>

#include "noise_tailor/superop.hpp"

namespace noise_tailor {

/// Raised when the error channel has an eigenvalue on or near the branch cut
/// of the principal logarithm.
class BranchCutError : public InvalidInput {
 public:
  BranchCutError(const std::string& what, complex eigenvalue)
      : InvalidInput(what), eigenvalue_(eigenvalue) {}
  complex eigenvalue() const { return eigenvalue_; }

 private:
  complex eigenvalue_;
};

/// Hamiltonian and stochastic coefficients indexed by Pauli basis index
/// (entry 0 is unused and kept at zero).
struct HSProjection {
  Vector h;
  Vector s;
  double residual = 0.0;
};

struct ErrorGenerator {
  int n = 1;
  Matrix l;
  Vector h;
  Vector s;
  double residual = 0.0;
};

/// Principal real logarithm of a PTM. Throws BranchCutError when an
/// eigenvalue lies within `tol` of zero or the negative real axis.
Matrix principal_log(const Matrix& lambda, double tol = kTol.branch_cut);

/// L = log(gate * ideal^-1) with its H/S projection.
ErrorGenerator error_generator(const SuperOp& gate, const SuperOp& ideal);

/// PTM of rho -> -i[P, rho].
Matrix hamiltonian_generator(const PauliString& p);
/// PTM of rho -> P rho P - rho.
Matrix stochastic_generator(const PauliString& p);

/// Least-squares projection of L onto span{H_P, S_P}. The residual is the
/// Frobenius norm of what the projection leaves behind.
HSProjection project_hs(const Matrix& l);

/// sum_P h_P H_P + s_P S_P.
Matrix synthesize_generator(int n, const Vector& h, const Vector& s);

struct ErrorBudget {
  double eps_agg = 0.0;
  double theta_agg = 0.0;
  double eps_tot = 0.0;
  double stochastic_fraction = 0.0;
  bool negative_rates = false;
};

/// Convention tag written next to every budget.
inline constexpr const char* kBudgetConvention =
    "eps_agg=sum(s_P);theta_agg=sqrt(sum(h_P^2))";

ErrorBudget error_budget(const Vector& h, const Vector& s);

/// Weight-resolved view of a Pauli-indexed coefficient vector.
///
/// marginal[q][a] sums every coefficient whose factor on qubit q is a
/// (a = 1, 2, 3 for X, Y, Z). joint entries sum coefficients whose factors
/// on the pair are (a, b), both non-identity; at n = 2 each such entry is a
/// single coefficient.
struct WeightMap {
  struct Pair {
    int q0 = 0;
    int q1 = 1;
    std::array<std::array<double, 4>, 4> value{};
  };
  int n = 2;
  std::vector<std::array<double, 4>> marginal;
  std::vector<Pair> joint;
};

WeightMap weight_maps(const Vector& coeffs);

/// Long-format CSV: module,method,kind,qubits,pauli,value.
std::string weight_map_csv(const WeightMap& map, const std::string& method);

}  // namespace noise_tailor
