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

#include <vector>

#include "noise_tailor/types.hpp"

namespace noise_tailor {

/// One nonzero of a constraint matrix A_con restricted to a block.
struct SdpEntry {
  int con = 0;
  int row = 0;
  int col = 0;
  complex value;
};

/// A Hermitian PSD block: cost C and the sparse pieces of every A_i that
/// touch it.
struct SdpBlock {
  explicit SdpBlock(int size)
      : size(size), c(CMatrix::Zero(size, size)) {}

  /// Adds value at (row, col) of A_con and its conjugate mirror, so the
  /// stored constraint stays Hermitian.
  void add_hermitian(int con, int row, int col, complex value);

  int size;
  CMatrix c;
  std::vector<SdpEntry> entries;
};

/// Primal:  min <C, X>  s.t.  <A_i, X> = b_i,  X >= 0
/// Dual:    max b^T y   s.t.  S = C - sum_i y_i A_i >= 0
///
/// Inner products are Re Tr(A X) over block-diagonal Hermitian matrices.
struct SdpProblem {
  std::vector<SdpBlock> blocks;
  Vector b;
};

struct SdpOptions {
  double gap_tol = 1e-8;
  double feas_tol = 1e-9;
  int max_iterations = 200;
  double step_fraction = 0.95;
};

struct SdpSolution {
  std::vector<CMatrix> x;
  std::vector<CMatrix> s;
  Vector y;
  double primal_objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Raised when the interior-point iteration stalls. Carries the last primal
/// and dual objective values.
class SdpNotConverged : public Error {
 public:
  SdpNotConverged(const std::string& what, double primal, double dual)
      : Error(what), primal_(primal), dual_(dual) {}
  double primal_objective() const { return primal_; }
  double dual_objective() const { return dual_; }

 private:
  double primal_;
  double dual_;
};

/// Infeasible primal-dual path-following method with the HKM search
/// direction and a Mehrotra predictor-corrector step.
///
/// Returns the final iterate. When the stopping test is not met within the
/// iteration limit the result has converged == false; callers decide whether
/// that is fatal.
SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options = {});

}  // namespace noise_tailor
