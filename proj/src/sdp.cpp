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

#include "noise_tailor/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

namespace noise_tailor {

namespace {

using Blocks = std::vector<CMatrix>;

CMatrix herm(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

double real_inner(const CMatrix& a, const CMatrix& b) {
  // Re Tr(a^dagger b); equals Re Tr(a b) for Hermitian a.
  return (a.conjugate().cwiseProduct(b)).sum().real();
}

class Operator {
 public:
  Operator(const SdpProblem& p) : p_(p), m_(static_cast<int>(p.b.size())) {}

  // A(Y)_i = Re Tr(A_i Y_block) summed over blocks.
  Vector apply(const Blocks& y) const {
    Vector out = Vector::Zero(m_);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const CMatrix& yk = y[k];
      for (const SdpEntry& e : p_.blocks[k].entries) {
        out(e.con) += (e.value * yk(e.col, e.row)).real();
      }
    }
    return out;
  }

  // sum_i v_i A_i, block by block.
  Blocks adjoint(const Vector& v) const {
    Blocks out;
    out.reserve(p_.blocks.size());
    for (const SdpBlock& blk : p_.blocks) {
      CMatrix acc = CMatrix::Zero(blk.size, blk.size);
      for (const SdpEntry& e : blk.entries) {
        acc(e.row, e.col) += v(e.con) * e.value;
      }
      out.push_back(std::move(acc));
    }
    return out;
  }

  // Schur complement M_ij = Re Tr(A_i X A_j S^-1).
  Matrix schur(const Blocks& x, const Blocks& sinv) const {
    Matrix m = Matrix::Zero(m_, m_);
    for (std::size_t k = 0; k < p_.blocks.size(); ++k) {
      const auto& entries = p_.blocks[k].entries;
      const CMatrix& xk = x[k];
      const CMatrix& sk = sinv[k];
      for (const SdpEntry& a : entries) {
        for (const SdpEntry& b : entries) {
          if (b.con < a.con) continue;
          const double v =
              (a.value * xk(a.col, b.row) * b.value * sk(b.col, a.row)).real();
          m(a.con, b.con) += v;
        }
      }
    }
    // Pairs were accumulated into the upper triangle only.
    for (int i = 0; i < m_; ++i) {
      for (int j = i + 1; j < m_; ++j) {
        const double v = m(i, j) + m(j, i);
        m(i, j) = v;
        m(j, i) = v;
      }
    }
    // Diagonal pairs (a, b) and (b, a) with the same constraint were both
    // visited, so the diagonal is already complete.
    return m;
  }

 private:
  const SdpProblem& p_;
  int m_;
};

// Largest alpha in (0, inf] with x + alpha * dx PSD, given x = L L^dagger.
double max_step(const Eigen::LLT<CMatrix>& chol, const CMatrix& dx) {
  const auto& l = chol.matrixL();
  CMatrix t = l.solve(dx);
  t = l.solve(t.adjoint().eval()).adjoint();
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm(t), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues().minCoeff();
  if (lmin >= 0.0) return std::numeric_limits<double>::infinity();
  return -1.0 / lmin;
}

double block_norm(const Blocks& b) {
  double acc = 0.0;
  for (const CMatrix& m : b) acc += m.squaredNorm();
  return std::sqrt(acc);
}

}  // namespace

void SdpBlock::add_hermitian(int con, int row, int col, complex value) {
  if (row < 0 || col < 0 || row >= size || col >= size) {
    throw DimensionMismatch("SDP entry outside its block");
  }
  entries.push_back({con, row, col, value});
  if (row != col) entries.push_back({con, col, row, std::conj(value)});
}

SdpSolution solve_sdp(const SdpProblem& problem, const SdpOptions& options) {
  const int m = static_cast<int>(problem.b.size());
  const std::size_t nb = problem.blocks.size();
  if (m == 0 || nb == 0) throw InvalidInput("empty SDP");
  for (const SdpBlock& blk : problem.blocks) {
    if (blk.c.rows() != blk.size || blk.c.cols() != blk.size) {
      throw DimensionMismatch("SDP cost block has wrong size");
    }
    for (const SdpEntry& e : blk.entries) {
      if (e.con < 0 || e.con >= m) {
        throw DimensionMismatch("SDP entry refers to unknown constraint");
      }
    }
  }

  const Operator op(problem);
  Blocks c;
  double total_size = 0.0;
  for (const SdpBlock& blk : problem.blocks) {
    c.push_back(blk.c);
    total_size += blk.size;
  }

  // Starting point scaled to the data, as is customary for infeasible
  // path-following methods.
  Vector a_norm = Vector::Zero(m);
  for (const SdpBlock& blk : problem.blocks) {
    for (const SdpEntry& e : blk.entries) a_norm(e.con) += std::norm(e.value);
  }
  a_norm = a_norm.cwiseSqrt();
  double xi = std::max(10.0, std::sqrt(total_size));
  double eta = std::max({10.0, std::sqrt(total_size), a_norm.maxCoeff(),
                         block_norm(c)});
  for (int i = 0; i < m; ++i) {
    xi = std::max(xi, (1.0 + std::abs(problem.b(i))) / (1.0 + a_norm(i)));
  }

  SdpSolution sol;
  sol.y = Vector::Zero(m);
  for (const SdpBlock& blk : problem.blocks) {
    sol.x.push_back(xi * CMatrix::Identity(blk.size, blk.size));
    sol.s.push_back(eta * CMatrix::Identity(blk.size, blk.size));
  }

  const double b_scale = 1.0 + problem.b.norm();
  const double c_scale = 1.0 + block_norm(c);

  for (int iter = 0; iter <= options.max_iterations; ++iter) {
    sol.iterations = iter;
    // Residuals and objectives.
    const Vector rp = problem.b - op.apply(sol.x);
    Blocks rd = op.adjoint(sol.y);
    for (std::size_t k = 0; k < nb; ++k) rd[k] = c[k] - sol.s[k] - rd[k];

    sol.primal_objective = 0.0;
    double xs = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      sol.primal_objective += real_inner(c[k], sol.x[k]);
      xs += real_inner(sol.x[k], sol.s[k]);
    }
    sol.dual_objective = problem.b.dot(sol.y);
    sol.gap = std::abs(sol.primal_objective - sol.dual_objective);
    sol.primal_infeasibility = rp.norm() / b_scale;
    sol.dual_infeasibility = block_norm(rd) / c_scale;

    if (sol.gap < options.gap_tol &&
        sol.primal_infeasibility < options.feas_tol &&
        sol.dual_infeasibility < options.feas_tol) {
      sol.converged = true;
      return sol;
    }
    if (iter == options.max_iterations) break;

    const double mu = xs / total_size;

    std::vector<Eigen::LLT<CMatrix>> chol_x;
    std::vector<Eigen::LLT<CMatrix>> chol_s;
    Blocks sinv;
    for (std::size_t k = 0; k < nb; ++k) {
      chol_x.emplace_back(herm(sol.x[k]));
      chol_s.emplace_back(herm(sol.s[k]));
      if (chol_x.back().info() != Eigen::Success ||
          chol_s.back().info() != Eigen::Success) {
        throw SdpNotConverged("SDP iterate left the PSD cone",
                              sol.primal_objective, sol.dual_objective);
      }
      const auto sz = problem.blocks[k].size;
      sinv.push_back(herm(chol_s.back().solve(CMatrix::Identity(sz, sz))));
    }

    Matrix schur = op.schur(sol.x, sinv);
    Eigen::LLT<Matrix> schur_llt(schur);
    if (schur_llt.info() != Eigen::Success) {
      const double shift = 1e-14 * std::max(1.0, schur.diagonal().maxCoeff());
      schur.diagonal().array() += shift;
      schur_llt.compute(schur);
      if (schur_llt.info() != Eigen::Success) {
        throw SdpNotConverged("Schur complement is singular",
                              sol.primal_objective, sol.dual_objective);
      }
    }

    Blocks x_rd_sinv(nb);
    for (std::size_t k = 0; k < nb; ++k) {
      x_rd_sinv[k] = sol.x[k] * rd[k] * sinv[k];
    }
    const Vector base_rhs = rp + op.apply(sol.x) + op.apply(x_rd_sinv);

    // Solves for the direction with centring target sigma_mu and optional
    // second-order term dxa * dsa * S^-1.
    auto direction = [&](double sigma_mu, const Blocks* second, Blocks& dx,
                         Vector& dy, Blocks& ds) {
      Blocks target(nb);
      for (std::size_t k = 0; k < nb; ++k) {
        target[k] = sigma_mu * sinv[k];
        if (second != nullptr) target[k] -= (*second)[k];
      }
      dy = schur_llt.solve(Vector(base_rhs - op.apply(target)));
      ds = op.adjoint(dy);
      dx.assign(nb, CMatrix());
      for (std::size_t k = 0; k < nb; ++k) {
        ds[k] = rd[k] - ds[k];
        dx[k] = target[k] - sol.x[k] - herm(sol.x[k] * ds[k] * sinv[k]);
        dx[k] = herm(dx[k]);
      }
    };

    auto step_lengths = [&](const Blocks& dx, const Blocks& ds) {
      double ap = std::numeric_limits<double>::infinity();
      double ad = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < nb; ++k) {
        ap = std::min(ap, max_step(chol_x[k], dx[k]));
        ad = std::min(ad, max_step(chol_s[k], ds[k]));
      }
      return std::pair<double, double>(ap, ad);
    };

    // Predictor.
    Blocks dxa, dsa;
    Vector dya;
    direction(0.0, nullptr, dxa, dya, dsa);
    auto [ap_aff, ad_aff] = step_lengths(dxa, dsa);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double mu_aff = 0.0;
    for (std::size_t k = 0; k < nb; ++k) {
      mu_aff += real_inner(sol.x[k] + ap_aff * dxa[k],
                           sol.s[k] + ad_aff * dsa[k]);
    }
    mu_aff /= total_size;
    const double ratio = std::clamp(mu_aff / mu, 0.0, 1.0);
    const double sigma = ratio * ratio * ratio;

    // Corrector.
    Blocks second(nb);
    for (std::size_t k = 0; k < nb; ++k) second[k] = dxa[k] * dsa[k] * sinv[k];
    Blocks dx, ds;
    Vector dy;
    direction(sigma * mu, &second, dx, dy, ds);
    auto [ap, ad] = step_lengths(dx, ds);
    ap = std::min(1.0, options.step_fraction * ap);
    ad = std::min(1.0, options.step_fraction * ad);

    for (std::size_t k = 0; k < nb; ++k) {
      sol.x[k] = herm(sol.x[k] + ap * dx[k]);
      sol.s[k] = herm(sol.s[k] + ad * ds[k]);
    }
    sol.y += ad * dy;
  }
  sol.converged = false;
  return sol;
}

}  // namespace noise_tailor
