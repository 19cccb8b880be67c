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

#include "noise_tailor/random.hpp"

namespace noise_tailor {

CMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix z(d, d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) z(i, k) = complex(g(rng), g(rng));
  }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int k = 0; k < d; ++k) {
    const complex diag = r(k, k);
    if (std::abs(diag) > 0) q.col(k) *= diag / std::abs(diag);
  }
  return q;
}

SuperOp random_cptp(int n, int rank, std::mt19937_64& rng, double strength) {
  const int d = 1 << n;
  if (rank < 1) throw InvalidInput("Kraus rank must be positive");
  // Columns 0..d-1 of a (rank d) x (rank d) unitary form an isometry.
  const CMatrix u = random_unitary(rank * d, rng);
  std::vector<CMatrix> kraus;
  for (int k = 0; k < rank; ++k) kraus.push_back(u.block(k * d, 0, d, d));
  SuperOp e = ptm_from_kraus(kraus, false, 1e-9);
  if (strength < 1.0) {
    e.matrix() = (1.0 - strength) * Matrix::Identity(e.dim(), e.dim()) + strength * e.matrix();
  }
  return e;
}

PauliChannel random_pauli_channel(int n, std::mt19937_64& rng, double max_error) {
  const auto size = static_cast<Eigen::Index>(1) << (2 * n);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Vector w(size);
  for (Eigen::Index i = 0; i < size; ++i) w(i) = -std::log(1.0 - u(rng));
  w(0) = 0.0;
  const double total = max_error * u(rng);
  PauliChannel c;
  c.n = n;
  c.probs = w * (total / w.sum());
  c.probs(0) = 1.0 - total;
  return c;
}

}  // namespace noise_tailor
