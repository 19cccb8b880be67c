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

#include <span>
#include <vector>

#include "noise_tailor/pauli.hpp"
#include "noise_tailor/types.hpp"

namespace noise_tailor {

/// Pauli transfer matrix of an n-qubit channel.
///
/// Entry (i, j) is Tr[P_i E(P_j)] / d with Paulis in IXYZ order, qubit 0
/// most significant. Composition of channels is the matrix product.
class SuperOp {
 public:
  explicit SuperOp(int n = 1);
  SuperOp(int n, Matrix m);

  static SuperOp identity(int n);

  int num_qubits() const { return n_; }
  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }

  bool is_trace_preserving(double tol = 1e-10) const;
  bool is_unital(double tol = 1e-10) const;
  SuperOp transpose() const { return SuperOp(n_, m_.transpose()); }

 private:
  int n_;
  Matrix m_;
};

/// Normalised Choi matrix (trace one), input factor first.
///
/// For E with PTM L the matrix is (1/d^2) sum_ij L_ij conj(P_j) (x) P_i.
struct ChoiMatrix {
  int n = 1;
  CMatrix c;
};

/// Pauli channel rho -> sum_P c_P P rho P, with probs indexed by Pauli index.
struct PauliChannel {
  int n = 1;
  Vector probs;

  static PauliChannel identity(int n);
  /// Throws InvalidInput unless probabilities are nonnegative and sum to 1.
  void validate(double tol = 1e-9) const;
  Vector fidelities() const;
  SuperOp superop() const;
};

/// Dense Pauli matrices for n qubits in basis order, cached per n.
const std::vector<CMatrix>& pauli_basis(int n);

SuperOp ptm_from_unitary(const CMatrix& u, double tol = kTol.unitarity);

/// PTM of rho -> sum_k K rho K^dagger. Unless `allow_non_tp`, the operators
/// must satisfy sum K^dagger K = I within tolerance.
SuperOp ptm_from_kraus(std::span<const CMatrix> kraus, bool allow_non_tp = false,
                       double tol = kTol.completeness);

/// a after b, i.e. a.m * b.m.
SuperOp compose(const SuperOp& a, const SuperOp& b);

/// Inverse of an ideal gate PTM. Orthogonal matrices (unitary channels) are
/// inverted by transposition; other maps fall back to LU and throw when
/// singular.
SuperOp ideal_inverse(const SuperOp& target);

/// 4^-n sum_P L_PP for the error channel e * target^-1.
double process_fidelity(const SuperOp& e, const SuperOp& target);
inline double process_infidelity(const SuperOp& e, const SuperOp& target) {
  return 1.0 - process_fidelity(e, target);
}

/// Average of P L P over the given Paulis (signs are irrelevant).
SuperOp pauli_twirl(const SuperOp& e, std::span<const PauliString> paulis);
/// Twirl over the full n-qubit Pauli group.
SuperOp pauli_twirl(const SuperOp& e);

/// PTM of the Pauli superoperator rho -> P rho P (diagonal, entries +-1).
Vector pauli_conjugation_diagonal(const PauliString& p);

ChoiMatrix to_choi(const SuperOp& e);
SuperOp from_choi(const ChoiMatrix& choi);

/// Smallest eigenvalue of the Hermitian part of the trace-one Choi matrix,
/// scaled by d (the unnormalised Choi scale).
double choi_min_eigenvalue(const SuperOp& e);
/// CP within the PSD floor and TP within `tp_tol`.
bool is_cptp(const SuperOp& e, double psd_floor = kTol.psd_floor,
             double tp_tol = 1e-9);

/// Total variation distance 1/2 |p - q|_1. Both inputs must be
/// nonnegative and sum to one within tolerance.
double tvd(std::span<const double> p, std::span<const double> q);

/// Real coordinates of a Hermitian matrix in the Pauli basis:
/// v_P = Tr(P rho) / d.
Vector pauli_vector(const CMatrix& rho);
/// Inverse of pauli_vector.
CMatrix from_pauli_vector(int n, const Vector& v);

}  // namespace noise_tailor
