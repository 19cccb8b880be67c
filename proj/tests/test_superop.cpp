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

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "noise_tailor/pauli.hpp"
#include "noise_tailor/random.hpp"
#include "noise_tailor/superop.hpp"

namespace nt = noise_tailor;

namespace {

constexpr double kPi = 3.14159265358979323846;

nt::CMatrix rx(double theta) {
  nt::CMatrix u(2, 2);
  const nt::complex i(0, 1);
  u << std::cos(theta / 2), -i * std::sin(theta / 2), -i * std::sin(theta / 2),
      std::cos(theta / 2);
  return u;
}

// Brute-force PTM: Tr[P_i E(P_j)] / d with E given by Kraus operators.
nt::Matrix brute_ptm(const std::vector<nt::CMatrix>& kraus) {
  const auto d = kraus.front().rows();
  const int n = d == 2 ? 1 : 2;
  const auto& basis = nt::pauli_basis(n);
  const auto size = static_cast<Eigen::Index>(basis.size());
  nt::Matrix m(size, size);
  for (Eigen::Index j = 0; j < size; ++j) {
    nt::CMatrix out = nt::CMatrix::Zero(d, d);
    for (const auto& k : kraus) out += k * basis[static_cast<std::size_t>(j)] * k.adjoint();
    for (Eigen::Index i = 0; i < size; ++i) {
      m(i, j) = (basis[static_cast<std::size_t>(i)] * out).trace().real() / static_cast<double>(d);
    }
  }
  return m;
}

double max_off_diagonal(const nt::Matrix& m) {
  nt::Matrix off = m;
  off.diagonal().setZero();
  return off.cwiseAbs().maxCoeff();
}

}  // namespace

TEST(PtmFromUnitaryTest, IdentityGivesIdentity) {
  const auto e = nt::ptm_from_unitary(nt::CMatrix::Identity(4, 4));
  EXPECT_LT((e.matrix() - nt::Matrix::Identity(16, 16)).norm(), 1e-15);
  EXPECT_TRUE(e.is_trace_preserving());
  EXPECT_TRUE(e.is_unital());
}

TEST(PtmFromUnitaryTest, RotationBlock) {
  const double theta = 0.3;
  const auto e = nt::ptm_from_unitary(rx(theta));
  nt::Matrix expect = nt::Matrix::Identity(4, 4);
  expect(2, 2) = std::cos(theta);
  expect(2, 3) = -std::sin(theta);
  expect(3, 2) = std::sin(theta);
  expect(3, 3) = std::cos(theta);
  EXPECT_LT((e.matrix() - expect).norm(), 1e-14);
}

TEST(PtmFromUnitaryTest, QuarterTurnMapsYToZ) {
  const auto e = nt::ptm_from_unitary(rx(kPi / 2));
  EXPECT_NEAR(e.matrix()(3, 2), 1.0, 1e-15);
  EXPECT_NEAR(e.matrix()(2, 3), -1.0, 1e-15);
  EXPECT_LT((e.matrix() - brute_ptm({rx(kPi / 2)})).norm(), 1e-14);
}

TEST(PtmFromUnitaryTest, RejectsNonUnitary) {
  nt::CMatrix m = nt::CMatrix::Identity(2, 2);
  m(0, 0) = 1.1;
  EXPECT_THROW(nt::ptm_from_unitary(m), nt::InvalidInput);
}

TEST(PtmFromKrausTest, BitFlipDiagonal) {
  std::vector<nt::CMatrix> k{std::sqrt(0.99) * nt::CMatrix::Identity(2, 2),
                             std::sqrt(0.01) * nt::PauliString::parse("X").matrix()};
  const auto e = nt::ptm_from_kraus(k);
  nt::Vector d(4);
  d << 1.0, 1.0, 0.98, 0.98;
  EXPECT_LT((e.matrix() - nt::Matrix(d.asDiagonal())).norm(), 1e-14);
  EXPECT_LT((e.matrix() - brute_ptm(k)).norm(), 1e-14);
}

TEST(PtmFromKrausTest, AmplitudeDamping) {
  auto damp = [](double g) {
    nt::CMatrix k0 = nt::CMatrix::Zero(2, 2);
    nt::CMatrix k1 = nt::CMatrix::Zero(2, 2);
    k0(0, 0) = 1.0;
    k0(1, 1) = std::sqrt(1.0 - g);
    k1(0, 1) = std::sqrt(g);
    return std::vector<nt::CMatrix>{k0, k1};
  };
  EXPECT_LT((nt::ptm_from_kraus(damp(0.0)).matrix() - nt::Matrix::Identity(4, 4)).norm(), 1e-15);
  const auto full = nt::ptm_from_kraus(damp(1.0));
  nt::Matrix expect = nt::Matrix::Zero(4, 4);
  expect(0, 0) = 1.0;
  expect(3, 0) = 1.0;
  EXPECT_LT((full.matrix() - expect).norm(), 1e-15);
  EXPECT_LT((full.matrix() - brute_ptm(damp(1.0))).norm(), 1e-15);
  EXPECT_FALSE(full.is_unital());
  EXPECT_TRUE(full.is_trace_preserving());
}

TEST(PtmFromKrausTest, CompletenessViolation) {
  std::vector<nt::CMatrix> k{0.9 * nt::CMatrix::Identity(2, 2)};
  EXPECT_THROW(nt::ptm_from_kraus(k), nt::InvalidInput);
  EXPECT_NO_THROW(nt::ptm_from_kraus(k, /*allow_non_tp=*/true));
}

TEST(ComposeTest, RotationsAdd) {
  const auto a = nt::ptm_from_unitary(rx(0.2));
  const auto b = nt::ptm_from_unitary(rx(0.5));
  EXPECT_LT((nt::compose(a, b).matrix() - nt::ptm_from_unitary(rx(0.7)).matrix()).norm(), 1e-14);
  EXPECT_LT((nt::compose(a, nt::SuperOp::identity(1)).matrix() - a.matrix()).norm(), 1e-15);
  EXPECT_THROW(nt::compose(a, nt::SuperOp::identity(2)), nt::DimensionMismatch);
}

TEST(ComposeTest, RepeatedRotationInfidelityIsQuadratic) {
  const double theta = 0.01;
  const auto step = nt::ptm_from_unitary(rx(theta));
  nt::CMatrix zero = nt::CMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  for (int m : {1, 4, 16}) {
    nt::Vector v = nt::pauli_vector(zero);
    for (int k = 0; k < m; ++k) v = step.matrix() * v;
    const double f = (zero * nt::from_pauli_vector(1, v)).trace().real();
    const double x = m * theta;
    EXPECT_NEAR(f, 1.0 - std::pow(std::sin(x / 2), 2), 1e-13);
    EXPECT_NEAR(1.0 - f, x * x / 4, x * x * x * x / 40);
  }
}

TEST(ComposeTest, HomomorphismOnRandomUnitaries) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const auto u = nt::random_unitary(4, rng);
    const auto v = nt::random_unitary(4, rng);
    const auto lhs = nt::ptm_from_unitary(u * v);
    const auto rhs = nt::compose(nt::ptm_from_unitary(u), nt::ptm_from_unitary(v));
    EXPECT_LT((lhs.matrix() - rhs.matrix()).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(FidelityTest, Examples) {
  const auto e = nt::ptm_from_unitary(rx(0.4));
  EXPECT_NEAR(nt::process_fidelity(e, e), 1.0, 1e-15);

  nt::PauliChannel c = nt::PauliChannel::identity(2);
  c.probs(0) = 0.99;
  c.probs(nt::PauliString::parse("XI").index()) = 0.01;
  EXPECT_NEAR(nt::process_fidelity(c.superop(), nt::SuperOp::identity(2)), 0.99, 1e-15);

  for (double theta : {0.05, 0.3, 1.1}) {
    // Oracle: entanglement fidelity |Tr U / d|^2 of the maximally entangled state.
    const auto u = rx(theta);
    const double oracle = std::norm(u.trace() / 2.0);
    const double got = nt::process_infidelity(nt::ptm_from_unitary(u), nt::SuperOp::identity(1));
    EXPECT_NEAR(got, 1.0 - oracle, 1e-14);
    EXPECT_NEAR(got, std::pow(std::sin(theta / 2), 2), 1e-14);
  }
}

TEST(FidelityTest, NonIdentityTargetUsesErrorChannel) {
  const auto target = nt::ptm_from_unitary(rx(kPi / 2));
  const auto noisy = nt::compose(nt::ptm_from_unitary(rx(0.1)), target);
  EXPECT_NEAR(nt::process_infidelity(noisy, target), std::pow(std::sin(0.05), 2), 1e-14);
}

TEST(TwirlTest, RotationTwirlIsDiagonal) {
  const double theta = 0.3;
  const auto t = nt::pauli_twirl(nt::ptm_from_unitary(rx(theta)));
  nt::Vector d(4);
  d << 1.0, 1.0, std::cos(theta), std::cos(theta);
  EXPECT_LT((t.matrix() - nt::Matrix(d.asDiagonal())).norm(), 1e-15);
}

TEST(TwirlTest, IdentitySubsetLeavesInputUnchanged) {
  std::mt19937_64 rng(2);
  const auto e = nt::random_cptp(2, 3, rng);
  const std::vector<nt::PauliString> only{nt::PauliString(2)};
  EXPECT_EQ(nt::pauli_twirl(e, only).matrix(), e.matrix());
  EXPECT_THROW(nt::pauli_twirl(e, std::vector<nt::PauliString>{}), nt::InvalidInput);
}

TEST(TwirlTest, FullTwirlPropertiesOnRandomChannels) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = nt::random_cptp(2, 1 + trial % 4, rng);
    const auto t = nt::pauli_twirl(e);
    EXPECT_LT(max_off_diagonal(t.matrix()), 1e-12);
    EXPECT_LT((t.matrix().diagonal() - e.matrix().diagonal()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT((nt::pauli_twirl(t).matrix() - t.matrix()).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(nt::process_fidelity(t, nt::SuperOp::identity(2)),
                nt::process_fidelity(e, nt::SuperOp::identity(2)), 1e-12);
  }
}

TEST(ChoiTest, RoundTripAndPositivity) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 2;
    const auto e = nt::random_cptp(n, 1 + trial % 3, rng);
    const auto back = nt::from_choi(nt::to_choi(e));
    EXPECT_LT((back.matrix() - e.matrix()).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_TRUE(nt::is_cptp(e));
    const auto c = nt::to_choi(e).c;
    EXPECT_LT((c - c.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(ChoiTest, NegativeEigenvalueIsDetected) {
  // A unitary channel has a rank-one Choi matrix; push one null direction
  // to -1e-3 on the trace-one scale, which reads -2e-3 after scaling by d.
  std::mt19937_64 rng(6);
  const auto e = nt::ptm_from_unitary(nt::random_unitary(2, rng));
  auto choi = nt::to_choi(e);
  Eigen::SelfAdjointEigenSolver<nt::CMatrix> es(choi.c);
  const nt::CVector v = es.eigenvectors().col(0);
  choi.c -= 1e-3 * (v * v.adjoint());
  const auto bad = nt::from_choi(choi);
  EXPECT_NEAR(nt::choi_min_eigenvalue(bad), -2e-3, 1e-9);
  EXPECT_FALSE(nt::is_cptp(bad));
  EXPECT_TRUE(nt::is_cptp(e));
}

TEST(PauliChannelTest, ValidateAndDiagonal) {
  nt::PauliChannel c = nt::PauliChannel::identity(1);
  EXPECT_NO_THROW(c.validate());
  c.probs << 0.9, 0.2, -0.1, 0.0;
  EXPECT_THROW(c.validate(), nt::InvalidInput);
  c.probs << 0.9, 0.05, 0.03, 0.02;
  const auto m = c.superop().matrix();
  EXPECT_EQ(max_off_diagonal(m), 0.0);
  EXPECT_NEAR(nt::process_fidelity(c.superop(), nt::SuperOp::identity(1)), 0.9, 1e-15);
}

TEST(TvdTest, Examples) {
  const std::array<double, 4> p{0.7, 0.1, 0.1, 0.1};
  const std::array<double, 4> q{0.25, 0.25, 0.25, 0.25};
  EXPECT_EQ(nt::tvd(p, p), 0.0);
  EXPECT_NEAR(nt::tvd(p, q), 0.45, 1e-15);
  EXPECT_NEAR(nt::tvd(q, p), 0.45, 1e-15);
  const std::array<double, 2> a{1.0, 0.0};
  const std::array<double, 2> b{0.5, 0.5};
  EXPECT_NEAR(nt::tvd(a, b), 0.5, 1e-15);
  const std::array<double, 2> neg{1.1, -0.1};
  EXPECT_THROW(nt::tvd(neg, b), nt::InvalidInput);
}

TEST(TvdTest, TriangleInequality) {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  auto draw = [&] {
    std::array<double, 4> x{};
    double s = 0.0;
    for (double& v : x) s += (v = u(rng));
    for (double& v : x) v /= s;
    return x;
  };
  for (int trial = 0; trial < 100; ++trial) {
    const auto p = draw();
    const auto q = draw();
    const auto r = draw();
    const double pq = nt::tvd(p, q);
    EXPECT_GE(pq, 0.0);
    EXPECT_LE(pq, 1.0);
    EXPECT_LE(nt::tvd(p, r), pq + nt::tvd(q, r) + 1e-15);
  }
}
