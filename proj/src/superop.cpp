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

#include "noise_tailor/superop.hpp"

#include <array>
#include <cmath>

#include <Eigen/Eigenvalues>

namespace noise_tailor {

namespace {

constexpr int kMaxDenseQubits = 4;

Eigen::Index pow4(int n) { return Eigen::Index{1} << (2 * n); }

// Tr(a * b) without forming the product.
complex trace_of_product(const CMatrix& a, const CMatrix& b) {
  return (a.transpose().cwiseProduct(b)).sum();
}

void check_square_power_of_two(const CMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() < 2 ||
      (m.rows() & (m.rows() - 1)) != 0) {
    throw DimensionMismatch(std::string(what) +
                            " must be square with power-of-two size");
  }
}

int qubits_for_hilbert_dim(Eigen::Index d) {
  int n = 0;
  while ((Eigen::Index{1} << n) < d) ++n;
  return n;
}

}  // namespace

SuperOp::SuperOp(int n) : n_(n), m_(Matrix::Zero(pow4(n), pow4(n))) {}

SuperOp::SuperOp(int n, Matrix m) : n_(n), m_(std::move(m)) {
  if (m_.rows() != pow4(n) || m_.cols() != pow4(n)) {
    throw DimensionMismatch("PTM for " + std::to_string(n) +
                            " qubits must be " + std::to_string(pow4(n)) +
                            " x " + std::to_string(pow4(n)));
  }
}

SuperOp SuperOp::identity(int n) {
  return SuperOp(n, Matrix::Identity(pow4(n), pow4(n)));
}

bool SuperOp::is_trace_preserving(double tol) const {
  for (Eigen::Index j = 0; j < dim(); ++j) {
    if (std::abs(m_(0, j) - (j == 0 ? 1.0 : 0.0)) > tol) return false;
  }
  return true;
}

bool SuperOp::is_unital(double tol) const {
  for (Eigen::Index i = 0; i < dim(); ++i) {
    if (std::abs(m_(i, 0) - (i == 0 ? 1.0 : 0.0)) > tol) return false;
  }
  return true;
}

PauliChannel PauliChannel::identity(int n) {
  PauliChannel c{n, Vector::Zero(pow4(n))};
  c.probs(0) = 1.0;
  return c;
}

void PauliChannel::validate(double tol) const {
  if (probs.size() != pow4(n)) {
    throw DimensionMismatch("Pauli channel needs 4^n probabilities");
  }
  if (probs.minCoeff() < -tol) {
    throw InvalidInput("Pauli channel has negative probability");
  }
  if (std::abs(probs.sum() - 1.0) > tol) {
    throw InvalidInput("Pauli channel probabilities do not sum to 1");
  }
}

Vector PauliChannel::fidelities() const {
  return error_probs_to_fidelities(probs);
}

SuperOp PauliChannel::superop() const {
  return SuperOp(n, fidelities().asDiagonal().toDenseMatrix());
}

const std::vector<CMatrix>& pauli_basis(int n) {
  static const std::array<std::vector<CMatrix>, kMaxDenseQubits + 1> kBases =
      [] {
        std::array<std::vector<CMatrix>, kMaxDenseQubits + 1> bases;
        for (int k = 1; k <= kMaxDenseQubits; ++k) {
          const auto count = static_cast<std::size_t>(pow4(k));
          bases[k].reserve(count);
          for (std::size_t idx = 0; idx < count; ++idx) {
            bases[k].push_back(PauliString::from_index(k, idx).matrix());
          }
        }
        return bases;
      }();
  if (n < 1 || n > kMaxDenseQubits) {
    throw InvalidInput("dense Pauli basis supports 1..4 qubits");
  }
  return kBases[n];
}

SuperOp ptm_from_unitary(const CMatrix& u, double tol) {
  check_square_power_of_two(u, "unitary");
  const Eigen::Index d = u.rows();
  const double dev =
      (u.adjoint() * u - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (dev > tol) {
    throw InvalidInput("matrix is not unitary (deviation " +
                       std::to_string(dev) + ")");
  }
  const CMatrix kraus[] = {u};
  return ptm_from_kraus(kraus, false, tol);
}

SuperOp ptm_from_kraus(std::span<const CMatrix> kraus, bool allow_non_tp,
                       double tol) {
  if (kraus.empty()) throw InvalidInput("empty Kraus list");
  check_square_power_of_two(kraus.front(), "Kraus operator");
  const Eigen::Index d = kraus.front().rows();
  CMatrix completeness = CMatrix::Zero(d, d);
  for (const CMatrix& k : kraus) {
    if (k.rows() != d || k.cols() != d) {
      throw DimensionMismatch("Kraus operators differ in size");
    }
    completeness += k.adjoint() * k;
  }
  if (!allow_non_tp) {
    const double dev =
        (completeness - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
    if (dev > tol) {
      throw InvalidInput("Kraus operators violate completeness (deviation " +
                         std::to_string(dev) + ")");
    }
  }
  const int n = qubits_for_hilbert_dim(d);
  const auto& basis = pauli_basis(n);
  const Eigen::Index dim = pow4(n);
  Matrix m = Matrix::Zero(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    CMatrix image = CMatrix::Zero(d, d);
    for (const CMatrix& k : kraus) image += k * basis[j] * k.adjoint();
    for (Eigen::Index i = 0; i < dim; ++i) {
      m(i, j) = trace_of_product(basis[i], image).real() /
                static_cast<double>(d);
    }
  }
  return SuperOp(n, std::move(m));
}

SuperOp compose(const SuperOp& a, const SuperOp& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionMismatch("cannot compose channels on different qubits");
  }
  return SuperOp(a.num_qubits(), a.matrix() * b.matrix());
}

SuperOp ideal_inverse(const SuperOp& target) {
  const Matrix& t = target.matrix();
  const Eigen::Index dim = t.rows();
  const double orth =
      (t.transpose() * t - Matrix::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (orth < 1e-10) return target.transpose();
  Eigen::FullPivLU<Matrix> lu(t);
  if (!lu.isInvertible()) {
    throw InvalidInput("target PTM is singular");
  }
  return SuperOp(target.num_qubits(), lu.inverse());
}

double process_fidelity(const SuperOp& e, const SuperOp& target) {
  if (e.num_qubits() != target.num_qubits()) {
    throw DimensionMismatch("fidelity between different qubit counts");
  }
  const Matrix err = e.matrix() * ideal_inverse(target).matrix();
  return err.trace() / static_cast<double>(err.rows());
}

Vector pauli_conjugation_diagonal(const PauliString& p) {
  const int n = p.num_qubits();
  const Eigen::Index dim = pow4(n);
  Vector d(dim);
  const PauliString bare = p.unsigned_part();
  for (Eigen::Index q = 0; q < dim; ++q) {
    d(q) = commutation_sign(bare, PauliString::from_index(
                                      n, static_cast<std::size_t>(q)))
               ? -1.0
               : 1.0;
  }
  return d;
}

SuperOp pauli_twirl(const SuperOp& e, std::span<const PauliString> paulis) {
  if (paulis.empty()) throw InvalidInput("twirl needs at least one Pauli");
  Matrix acc = Matrix::Zero(e.dim(), e.dim());
  for (const PauliString& p : paulis) {
    if (p.num_qubits() != e.num_qubits()) {
      throw DimensionMismatch("twirl Pauli size differs from channel");
    }
    const Vector d = pauli_conjugation_diagonal(p);
    acc += d.asDiagonal() * e.matrix() * d.asDiagonal();
  }
  acc /= static_cast<double>(paulis.size());
  return SuperOp(e.num_qubits(), std::move(acc));
}

SuperOp pauli_twirl(const SuperOp& e) {
  std::vector<PauliString> all;
  all.reserve(static_cast<std::size_t>(e.dim()));
  for (Eigen::Index i = 0; i < e.dim(); ++i) {
    all.push_back(
        PauliString::from_index(e.num_qubits(), static_cast<std::size_t>(i)));
  }
  return pauli_twirl(e, all);
}

ChoiMatrix to_choi(const SuperOp& e) {
  const int n = e.num_qubits();
  const auto& basis = pauli_basis(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  const Eigen::Index dim = e.dim();
  CMatrix c = CMatrix::Zero(d * d, d * d);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const CMatrix pj_t = basis[j].transpose();
    for (Eigen::Index i = 0; i < dim; ++i) {
      const double lij = e.matrix()(i, j);
      if (lij == 0.0) continue;
      const CMatrix& pi = basis[i];
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          if (pj_t(a, b) == 0.0) continue;
          c.block(a * d, b * d, d, d) += (lij * pj_t(a, b)) * pi;
        }
      }
    }
  }
  c /= static_cast<double>(d * d);
  return {n, std::move(c)};
}

SuperOp from_choi(const ChoiMatrix& choi) {
  const int n = choi.n;
  const auto& basis = pauli_basis(n);
  const Eigen::Index d = Eigen::Index{1} << n;
  if (choi.c.rows() != d * d || choi.c.cols() != d * d) {
    throw DimensionMismatch("Choi matrix size does not match qubit count");
  }
  const Eigen::Index dim = pow4(n);
  Matrix m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j) {
    const CMatrix pj_t = basis[j].transpose();
    for (Eigen::Index i = 0; i < dim; ++i) {
      // Tr[(P_j^T (x) P_i) C] using the block structure of the Kronecker
      // product.
      complex acc = 0.0;
      for (Eigen::Index a = 0; a < d; ++a) {
        for (Eigen::Index b = 0; b < d; ++b) {
          if (pj_t(a, b) == 0.0) continue;
          acc += pj_t(a, b) *
                 trace_of_product(basis[i], choi.c.block(b * d, a * d, d, d));
        }
      }
      m(i, j) = acc.real();
    }
  }
  return SuperOp(n, std::move(m));
}

double choi_min_eigenvalue(const SuperOp& e) {
  const ChoiMatrix choi = to_choi(e);
  const CMatrix herm = 0.5 * (choi.c + choi.c.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
  // Report on the trace-one scale times d so the floor is comparable to
  // eigenvalues of the unnormalised Choi matrix.
  return es.eigenvalues().minCoeff() *
         static_cast<double>(Eigen::Index{1} << e.num_qubits());
}

bool is_cptp(const SuperOp& e, double psd_floor, double tp_tol) {
  return e.is_trace_preserving(tp_tol) && choi_min_eigenvalue(e) >= psd_floor;
}

double tvd(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw DimensionMismatch("distributions have different supports");
  }
  double sp = 0.0;
  double sq = 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p[i] < 0.0 || q[i] < 0.0) {
      throw InvalidInput("distribution has negative mass");
    }
    sp += p[i];
    sq += q[i];
    acc += std::abs(p[i] - q[i]);
  }
  if (std::abs(sp - 1.0) > kTol.distribution_sum ||
      std::abs(sq - 1.0) > kTol.distribution_sum) {
    throw InvalidInput("distribution does not sum to 1");
  }
  return 0.5 * acc;
}

Vector pauli_vector(const CMatrix& rho) {
  check_square_power_of_two(rho, "density matrix");
  const int n = qubits_for_hilbert_dim(rho.rows());
  const auto& basis = pauli_basis(n);
  Vector v(pow4(n));
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    v(i) = trace_of_product(basis[i], rho).real() /
           static_cast<double>(rho.rows());
  }
  return v;
}

CMatrix from_pauli_vector(int n, const Vector& v) {
  const auto& basis = pauli_basis(n);
  if (v.size() != pow4(n)) throw DimensionMismatch("Pauli vector size");
  const Eigen::Index d = Eigen::Index{1} << n;
  CMatrix rho = CMatrix::Zero(d, d);
  for (Eigen::Index i = 0; i < v.size(); ++i) rho += v(i) * basis[i];
  return rho;
}

}  // namespace noise_tailor
