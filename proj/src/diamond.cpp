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

#include "noise_tailor/diamond.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include <Eigen/Eigenvalues>

namespace noise_tailor {

const char* method_name(DiamondMethod m) {
  switch (m) {
    case DiamondMethod::sdp: return "sdp";
    case DiamondMethod::pauli_exact: return "pauli_exact";
    case DiamondMethod::unitary_exact: return "unitary_exact";
  }
  return "unknown";
}

DiamondResult diamond_distance(const SuperOp& e, const SuperOp& target,
                               const SdpOptions& options) {
  if (e.num_qubits() != target.num_qubits()) {
    throw DimensionMismatch("diamond distance between different qubit counts");
  }
  const int n = e.num_qubits();
  const int d = 1 << n;
  const int big = d * d;
  const CMatrix j =
      static_cast<double>(d) * (to_choi(e).c - to_choi(target).c);
  const double herm_dev = (j - j.adjoint()).cwiseAbs().maxCoeff();
  if (herm_dev > 1e-10) {
    throw InvalidInput("channel difference is not Hermiticity preserving");
  }

  // Dual variables: Hermitian Z in a real basis, then t.
  const int t_con = big * big;
  SdpProblem prob;
  prob.b = Vector::Zero(t_con + 1);
  prob.b(t_con) = -1.0;
  SdpBlock dominate(big);   // Z - J >= 0
  SdpBlock positive(big);   // Z >= 0
  SdpBlock spectral(d);     // t I - Tr_out Z >= 0
  dominate.c = -0.5 * (j + j.adjoint());

  int con = 0;
  auto add_basis = [&](int k, int l, complex v) {
    dominate.add_hermitian(con, k, l, -v);
    positive.add_hermitian(con, k, l, -v);
    if (k % d == l % d) spectral.add_hermitian(con, k / d, l / d, v);
    ++con;
  };
  for (int k = 0; k < big; ++k) {
    add_basis(k, k, 1.0);
    for (int l = k + 1; l < big; ++l) {
      add_basis(k, l, 1.0);
      add_basis(k, l, complex(0.0, 1.0));
    }
  }
  for (int a = 0; a < d; ++a) spectral.add_hermitian(t_con, a, a, -1.0);

  prob.blocks.push_back(std::move(dominate));
  prob.blocks.push_back(std::move(positive));
  prob.blocks.push_back(std::move(spectral));

  const SdpSolution sol = solve_sdp(prob, options);
  if (!sol.converged) {
    std::ostringstream msg;
    msg << "diamond SDP did not converge after " << sol.iterations
        << " iterations; value lies between " << -sol.primal_objective
        << " and " << -sol.dual_objective;
    throw SdpNotConverged(msg.str(), sol.primal_objective, sol.dual_objective);
  }
  DiamondResult r;
  r.value = -0.5 * (sol.primal_objective + sol.dual_objective);
  r.primal_dual_gap = sol.gap;
  r.method = DiamondMethod::sdp;
  r.iterations = sol.iterations;
  return r;
}

double pauli_diamond(const PauliChannel& c) {
  c.validate();
  return c.probs.tail(c.probs.size() - 1).sum();
}

double unitary_diamond(const CMatrix& u, const CMatrix& v) {
  if (u.rows() != v.rows() || u.cols() != v.cols()) {
    throw DimensionMismatch("unitaries differ in size");
  }
  Eigen::ComplexEigenSolver<CMatrix> es(v.adjoint() * u, false);
  std::vector<double> angles;
  for (const complex& ev : es.eigenvalues()) angles.push_back(std::arg(ev));
  std::sort(angles.begin(), angles.end());
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  double widest_gap = angles.front() + kTwoPi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) {
    widest_gap = std::max(widest_gap, angles[i] - angles[i - 1]);
  }
  const double arc = kTwoPi - widest_gap;
  if (arc >= std::numbers::pi) return 1.0;
  return std::sin(0.5 * arc);
}

double trace_distance(const CMatrix& rho, const CMatrix& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols()) {
    throw DimensionMismatch("states differ in size");
  }
  const CMatrix diff = rho - sigma;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (diff + diff.adjoint()),
                                            Eigen::EigenvaluesOnly);
  return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

BoundReport check_bounds(double e_f, double eps_diamond, int n,
                         const std::string& channel, double slack) {
  if (e_f < -slack || e_f > 1.0 + slack) {
    throw InvalidInput("process infidelity of " + channel +
                       " is outside [0, 1]");
  }
  BoundReport r;
  r.channel = channel;
  r.e_f = std::max(0.0, e_f);
  r.eps_diamond = eps_diamond;
  r.lower = r.e_f;
  r.upper = std::sqrt(r.e_f) * std::ldexp(1.0, n);
  if (r.e_f == 0.0) {
    r.ratio = 1.0;
    if (std::abs(eps_diamond) > slack) {
      throw InvariantViolation("bound violation for " + channel +
                               ": zero infidelity but nonzero diamond error");
    }
    r.eps_diamond = 0.0;
    return r;
  }
  r.ratio = eps_diamond / r.e_f;
  if (eps_diamond < r.lower - slack) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "bound violation for " << channel << ": eps_diamond "
        << eps_diamond << " below e_F " << r.e_f;
    throw InvariantViolation(msg.str());
  }
  if (eps_diamond > r.upper + slack) {
    std::ostringstream msg;
    msg.precision(10);
    msg << "bound violation for " << channel << ": eps_diamond "
        << eps_diamond << " above sqrt(e_F) d = " << r.upper;
    throw InvariantViolation(msg.str());
  }
  return r;
}

}  // namespace noise_tailor
