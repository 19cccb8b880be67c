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

#include <cmath>
#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "noise_tailor/errorgen.hpp"
#include "noise_tailor/gateset.hpp"
#include "noise_tailor/random.hpp"

namespace nt = noise_tailor;
using nt::PauliString;

namespace {

nt::SuperOp rotation(const char* axis, double theta) {
  const auto p = PauliString::parse(axis);
  const auto d = p.matrix().rows();
  const nt::complex i(0, 1);
  const nt::CMatrix u = std::cos(theta / 2) * nt::CMatrix::Identity(d, d) -
                        i * std::sin(theta / 2) * p.matrix();
  return nt::ptm_from_unitary(u);
}

std::size_t idx(const char* label) { return PauliString::parse(label).index(); }

}  // namespace

TEST(ErrorGeneratorTest, IdealGateHasZeroGenerator) {
  const auto& g = nt::ideal_cycles()[nt::kCzCycle];
  const auto eg = nt::error_generator(g, g);
  EXPECT_LT(eg.l.norm(), 1e-12);
  EXPECT_LT(eg.h.norm() + eg.s.norm(), 1e-12);
  EXPECT_LT(eg.residual, 1e-12);
}

TEST(ErrorGeneratorTest, RotationGivesHalfAngle) {
  const auto eg = nt::error_generator(rotation("X", 0.1), nt::SuperOp::identity(1));
  EXPECT_NEAR(eg.h(idx("X")), 0.05, 1e-6);
  EXPECT_LT(eg.s.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT(eg.residual, 1e-9);
}

TEST(ErrorGeneratorTest, DephasingChannelGivesScalarLog) {
  nt::PauliChannel c = nt::PauliChannel::identity(1);
  c.probs << 0.99, 0.0, 0.0, 0.01;
  const auto eg = nt::error_generator(c.superop(), nt::SuperOp::identity(1));
  // Oracle: the X and Y fidelities are 1 - 2p and S_Z scales them by exp(-2 s).
  EXPECT_NEAR(eg.s(idx("Z")), -0.5 * std::log(1.0 - 2 * 0.01), 1e-12);
  EXPECT_LT(eg.h.cwiseAbs().maxCoeff(), 1e-12);
}

TEST(ErrorGeneratorTest, BranchCutIsReported) {
  // A pi rotation has eigenvalue -1 on the negative real axis.
  try {
    nt::error_generator(rotation("X", 3.14159265358979323846), nt::SuperOp::identity(1));
    FAIL() << "expected BranchCutError";
  } catch (const nt::BranchCutError& e) {
    EXPECT_NEAR(e.eigenvalue().real(), -1.0, 1e-9);
  }
}

TEST(ErrorGeneratorTest, ExpRoundTripOnRandomGates) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<int> label(0, nt::kNumCycles - 1);
  std::uniform_real_distribution<double> strength(0.0, 0.08);
  for (int trial = 0; trial < 100; ++trial) {
    const auto err = nt::random_cptp(2, 1 + trial % 4, rng, strength(rng));
    const auto& ideal = nt::ideal_cycles()[static_cast<std::size_t>(label(rng))];
    const auto gate = nt::compose(err, ideal);
    ASSERT_LT(nt::process_infidelity(gate, ideal), 0.1);
    const auto eg = nt::error_generator(gate, ideal);
    // Independent exponential from Eigen's matrix-function module.
    const nt::Matrix back = eg.l.exp() * ideal.matrix();
    EXPECT_LT((back - gate.matrix()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(ProjectHsTest, ZeroGenerator) {
  const auto p = nt::project_hs(nt::Matrix::Zero(16, 16));
  EXPECT_EQ(p.h.norm(), 0.0);
  EXPECT_EQ(p.s.norm(), 0.0);
  EXPECT_EQ(p.residual, 0.0);
}

TEST(ProjectHsTest, RecoversSynthesizedCoefficients) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> g(0.0, 0.01);
  for (int trial = 0; trial < 20; ++trial) {
    nt::Vector h = nt::Vector::Zero(16);
    nt::Vector s = nt::Vector::Zero(16);
    for (int i = 1; i < 16; ++i) {
      h(i) = g(rng);
      s(i) = std::abs(g(rng));
    }
    const auto p = nt::project_hs(nt::synthesize_generator(2, h, s));
    EXPECT_LT((p.h - h).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT((p.s - s).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_LT(p.residual, 1e-9);
  }
}

TEST(ProjectHsTest, GeneratorActionMatchesCommutator) {
  // Finite-difference oracle: d/dt U(t) rho U(t)^dagger at t = 0 equals -i[P, rho].
  const auto p = PauliString::parse("XZ");
  const auto h = nt::hamiltonian_generator(p);
  const auto& basis = nt::pauli_basis(2);
  const nt::complex i(0, 1);
  for (std::size_t j = 0; j < 16; ++j) {
    const nt::CMatrix out = -i * (p.matrix() * basis[j] - basis[j] * p.matrix());
    for (std::size_t k = 0; k < 16; ++k) {
      const double expect = (basis[k] * out).trace().real() / 4.0;
      EXPECT_NEAR(h(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)), expect, 1e-14);
    }
  }
  const auto s = nt::stochastic_generator(p);
  for (std::size_t j = 0; j < 16; ++j) {
    const nt::CMatrix out = p.matrix() * basis[j] * p.matrix() - basis[j];
    for (std::size_t k = 0; k < 16; ++k) {
      const double expect = (basis[k] * out).trace().real() / 4.0;
      EXPECT_NEAR(s(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)), expect, 1e-14);
    }
  }
}

TEST(ProjectHsTest, TwirledRotationIsStochastic) {
  const double theta = 0.1;
  const auto t = nt::pauli_twirl(rotation("X", theta));
  const auto eg = nt::error_generator(t, nt::SuperOp::identity(1));
  EXPECT_LT(eg.h.cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_NEAR(eg.s(idx("X")), -0.5 * std::log(std::cos(theta)), 1e-12);
  EXPECT_NEAR(eg.s(idx("X")), std::pow(std::sin(theta / 2), 2), 1e-5);
}

TEST(ProjectHsTest, TwirlRemovesHamiltonianPart) {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 20; ++trial) {
    const auto e = nt::random_cptp(2, 2, rng, 0.05);
    const auto eg = nt::error_generator(nt::pauli_twirl(e), nt::SuperOp::identity(2));
    EXPECT_LT(eg.h.cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(ProjectHsTest, TwirlSuppressesRotationsQuadratically) {
  for (double theta : {0.02, 0.05, 0.1}) {
    const auto eg = nt::error_generator(nt::pauli_twirl(rotation("ZZ", theta)),
                                        nt::SuperOp::identity(2));
    const auto budget = nt::error_budget(eg.h, eg.s);
    EXPECT_NEAR(budget.eps_agg / (theta * theta), 0.25, 0.25 * 0.05) << theta;
  }
}

TEST(ErrorBudgetTest, Examples) {
  nt::Vector h = nt::Vector::Zero(4);
  nt::Vector s = nt::Vector::Zero(4);
  s(3) = 0.002;
  EXPECT_DOUBLE_EQ(nt::error_budget(h, s).stochastic_fraction, 1.0);
  s.setZero();
  h(1) = 0.03;
  EXPECT_DOUBLE_EQ(nt::error_budget(h, s).stochastic_fraction, 0.0);
  s(3) = 0.001;
  const auto b = nt::error_budget(h, s);
  EXPECT_NEAR(b.eps_tot, 0.031, 1e-15);
  EXPECT_NEAR(b.eps_tot, b.eps_agg + b.theta_agg, 1e-15);
  EXPECT_NEAR(b.stochastic_fraction, 0.001 / 0.031, 1e-12);
  EXPECT_FALSE(b.negative_rates);
  s(2) = -1e-6;
  EXPECT_TRUE(nt::error_budget(h, s).negative_rates);
}

TEST(ErrorBudgetTest, ZeroGeneratorHasZeroFraction) {
  const auto b = nt::error_budget(nt::Vector::Zero(16), nt::Vector::Zero(16));
  EXPECT_EQ(b.eps_tot, 0.0);
  EXPECT_GE(b.stochastic_fraction, 0.0);
  EXPECT_LE(b.stochastic_fraction, 1.0);
}

TEST(WeightMapTest, Examples) {
  nt::Vector c = nt::Vector::Zero(16);
  c(static_cast<Eigen::Index>(idx("XI"))) = 0.01;
  auto m = nt::weight_maps(c);
  EXPECT_DOUBLE_EQ(m.marginal[0][1], 0.01);
  for (const auto& row : m.joint[0].value) {
    for (double v : row) EXPECT_EQ(v, 0.0);
  }

  c.setZero();
  c(static_cast<Eigen::Index>(idx("XZ"))) = 0.004;
  m = nt::weight_maps(c);
  EXPECT_DOUBLE_EQ(m.joint[0].value[1][3], 0.004);
  EXPECT_DOUBLE_EQ(m.marginal[0][1], 0.004);
  EXPECT_DOUBLE_EQ(m.marginal[1][3], 0.004);

  c.setZero();
  c(static_cast<Eigen::Index>(idx("ZZ"))) = 0.02;
  m = nt::weight_maps(c);
  EXPECT_DOUBLE_EQ(m.joint[0].value[3][3], 0.02);
  EXPECT_DOUBLE_EQ(m.marginal[0][3], 0.02);
  EXPECT_DOUBLE_EQ(m.marginal[1][3], 0.02);
}

TEST(WeightMapTest, MarginalsAgreeWithJointPlusWeightOne) {
  std::mt19937_64 rng(24);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  nt::Vector c(16);
  for (int i = 0; i < 16; ++i) c(i) = u(rng);
  const auto m = nt::weight_maps(c);
  for (int a = 1; a < 4; ++a) {
    double row = 0.0;
    double col = 0.0;
    for (int b = 1; b < 4; ++b) {
      row += m.joint[0].value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      col += m.joint[0].value[static_cast<std::size_t>(b)][static_cast<std::size_t>(a)];
    }
    EXPECT_NEAR(m.marginal[0][static_cast<std::size_t>(a)], row + c(4 * a), 1e-14);
    EXPECT_NEAR(m.marginal[1][static_cast<std::size_t>(a)], col + c(a), 1e-14);
  }
  const std::string csv = nt::weight_map_csv(m, "test");
  EXPECT_EQ(csv.rfind("module,method,kind,qubits,pauli,value", 0), 0u);
}
