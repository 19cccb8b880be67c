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

#include "noise_tailor/errorgen.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

namespace noise_tailor {

namespace {

// Anticommutation indicator matrix A(j, p) = <P_p, P_j>, used for the
// stochastic part of the projection.
Matrix anticommutation_matrix(int n) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  Matrix a(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto pj = PauliString::from_index(n, static_cast<std::size_t>(j));
    for (Eigen::Index p = 0; p < dim; ++p) {
      a(j, p) = commutation_sign(
          PauliString::from_index(n, static_cast<std::size_t>(p)), pj);
    }
  }
  return a;
}

}  // namespace

Matrix principal_log(const Matrix& lambda, double tol) {
  Eigen::EigenSolver<Matrix> es(lambda, false);
  if (es.info() != Eigen::Success) {
    throw InvalidInput("eigendecomposition of error channel failed");
  }
  for (const complex& ev : es.eigenvalues()) {
    const bool near_zero = std::abs(ev) < tol;
    const bool near_cut = ev.real() < 0.0 && std::abs(ev.imag()) < tol;
    if (near_zero || near_cut) {
      std::ostringstream msg;
      msg << "error channel eigenvalue (" << ev.real() << ", " << ev.imag()
          << ") lies on the logarithm branch cut";
      throw BranchCutError(msg.str(), ev);
    }
  }
  Matrix l = lambda.log();
  if (!l.allFinite()) throw InvalidInput("matrix logarithm did not converge");
  return l;
}

ErrorGenerator error_generator(const SuperOp& gate, const SuperOp& ideal) {
  if (gate.num_qubits() != ideal.num_qubits()) {
    throw DimensionMismatch("gate and ideal act on different qubits");
  }
  const Matrix lambda = gate.matrix() * ideal_inverse(ideal).matrix();
  ErrorGenerator g;
  g.n = gate.num_qubits();
  g.l = principal_log(lambda);
  HSProjection proj = project_hs(g.l);
  g.h = std::move(proj.h);
  g.s = std::move(proj.s);
  g.residual = proj.residual;
  return g;
}

Matrix hamiltonian_generator(const PauliString& p) {
  const int n = p.num_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  Matrix m = Matrix::Zero(dim, dim);
  const PauliString bare = p.unsigned_part();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto pj = PauliString::from_index(n, static_cast<std::size_t>(j));
    if (!commutation_sign(bare, pj)) continue;
    // -i [P, P_j] = -2i P P_j = -2i * i^k Q, real because k is odd.
    const PhasedPauli prod = multiply(bare, pj);
    m(static_cast<Eigen::Index>(prod.pauli.index()), j) =
        (prod.phase == 1 ? 2.0 : -2.0) * p.sign();
  }
  return m;
}

Matrix stochastic_generator(const PauliString& p) {
  const int n = p.num_qubits();
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  Matrix m = Matrix::Zero(dim, dim);
  const PauliString bare = p.unsigned_part();
  for (Eigen::Index j = 0; j < dim; ++j) {
    const auto pj = PauliString::from_index(n, static_cast<std::size_t>(j));
    if (commutation_sign(bare, pj)) m(j, j) = -2.0;
  }
  return m;
}

HSProjection project_hs(const Matrix& l) {
  const int n = qubits_for_dimension(static_cast<std::size_t>(l.rows()));
  if (l.rows() != l.cols()) throw DimensionMismatch("generator must be square");
  const Eigen::Index dim = l.rows();
  HSProjection out;
  out.h = Vector::Zero(dim);
  out.s = Vector::Zero(dim);

  // H_P have disjoint supports and squared norm 2 * 4^n each.
  for (Eigen::Index p = 1; p < dim; ++p) {
    const Matrix hp =
        hamiltonian_generator(PauliString::from_index(n, static_cast<std::size_t>(p)));
    out.h(p) = hp.cwiseProduct(l).sum() / (2.0 * static_cast<double>(dim));
  }

  // S_P live on the diagonal: diag(L)_j = -2 sum_P s_P <P, P_j>.
  const Matrix a = anticommutation_matrix(n).rightCols(dim - 1);
  const Vector rhs = -0.5 * l.diagonal();
  const Vector s = a.colPivHouseholderQr().solve(rhs);
  out.s.tail(dim - 1) = s;

  out.residual = (l - synthesize_generator(n, out.h, out.s)).norm();
  return out;
}

Matrix synthesize_generator(int n, const Vector& h, const Vector& s) {
  const auto dim = static_cast<Eigen::Index>(std::size_t{1} << (2 * n));
  if (h.size() != dim || s.size() != dim) {
    throw DimensionMismatch("coefficient vectors must have 4^n entries");
  }
  Matrix l = Matrix::Zero(dim, dim);
  for (Eigen::Index p = 1; p < dim; ++p) {
    const auto pauli = PauliString::from_index(n, static_cast<std::size_t>(p));
    if (h(p) != 0.0) l += h(p) * hamiltonian_generator(pauli);
    if (s(p) != 0.0) l += s(p) * stochastic_generator(pauli);
  }
  return l;
}

ErrorBudget error_budget(const Vector& h, const Vector& s) {
  if (h.size() != s.size() || h.size() == 0) {
    throw DimensionMismatch("budget needs equally sized coefficient vectors");
  }
  ErrorBudget b;
  double h2 = 0.0;
  for (Eigen::Index p = 1; p < h.size(); ++p) {
    b.eps_agg += s(p);
    h2 += h(p) * h(p);
    if (s(p) < kTol.negative_probability) b.negative_rates = true;
  }
  b.theta_agg = std::sqrt(h2);
  b.eps_tot = b.eps_agg + b.theta_agg;
  b.stochastic_fraction = b.eps_tot > 0.0 ? b.eps_agg / b.eps_tot : 0.0;
  return b;
}

WeightMap weight_maps(const Vector& coeffs) {
  const int n = qubits_for_dimension(static_cast<std::size_t>(coeffs.size()));
  WeightMap w;
  w.n = n;
  w.marginal.assign(static_cast<std::size_t>(n), {});
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) w.joint.push_back({a, b, {}});
  }
  for (Eigen::Index idx = 1; idx < coeffs.size(); ++idx) {
    const auto p = PauliString::from_index(n, static_cast<std::size_t>(idx));
    const double c = coeffs(idx);
    for (int q = 0; q < n; ++q) {
      const auto f = static_cast<int>(p.factor(q));
      if (f != 0) w.marginal[static_cast<std::size_t>(q)][f] += c;
    }
    for (auto& pair : w.joint) {
      const auto fa = static_cast<int>(p.factor(pair.q0));
      const auto fb = static_cast<int>(p.factor(pair.q1));
      if (fa != 0 && fb != 0) pair.value[fa][fb] += c;
    }
  }
  return w;
}

std::string weight_map_csv(const WeightMap& map, const std::string& method) {
  std::ostringstream out;
  out.precision(17);
  out << "module,method,kind,qubits,pauli,value\n";
  constexpr const char* kLetters = "IXYZ";
  for (int q = 0; q < map.n; ++q) {
    for (int a = 1; a < 4; ++a) {
      out << "errorgen," << method << ",marginal_w1," << q << ','
          << kLetters[a] << ',' << map.marginal[static_cast<std::size_t>(q)][a]
          << '\n';
    }
  }
  for (const auto& pair : map.joint) {
    for (int a = 1; a < 4; ++a) {
      for (int b = 1; b < 4; ++b) {
        out << "errorgen," << method << ",joint_w2," << pair.q0 << '-'
            << pair.q1 << ',' << kLetters[a] << kLetters[b] << ','
            << pair.value[a][b] << '\n';
      }
    }
  }
  return out.str();
}

}  // namespace noise_tailor
