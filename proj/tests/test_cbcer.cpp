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
#include <string>
#include <vector>

#include "noise_tailor/cbcer.hpp"
#include "noise_tailor/gateset.hpp"
#include "noise_tailor/random.hpp"

namespace nt = noise_tailor;
using nt::PauliString;

namespace {

nt::SuperOp zz_rotation(double theta) {
  const nt::complex i(0, 1);
  const nt::CMatrix u = std::cos(theta / 2) * nt::CMatrix::Identity(4, 4) -
                        i * std::sin(theta / 2) * PauliString::parse("ZZ").matrix();
  return nt::ptm_from_unitary(u);
}

nt::Vector probs_with(int n, std::initializer_list<std::pair<const char*, double>> rates) {
  nt::Vector c = nt::Vector::Zero(static_cast<Eigen::Index>(1) << (2 * n));
  c(0) = 1.0;
  for (const auto& [label, rate] : rates) {
    c(static_cast<Eigen::Index>(PauliString::parse(label).index())) += rate;
    c(0) -= rate;
  }
  return c;
}

const nt::DecayRecord& record_for(const std::vector<nt::DecayRecord>& rs, const char* label) {
  for (const auto& r : rs) {
    if (r.pauli.label() == label) return r;
  }
  throw std::runtime_error("missing record");
}

}  // namespace

TEST(CbTest, IdealCycleHasUnitFidelities) {
  const auto cycle = nt::CbCycle::pauli_idle(2, nt::Vector::Ones(16));
  nt::CbOptions opts;
  const auto recs = nt::run_cb(cycle, opts);
  ASSERT_EQ(recs.size(), 15u);
  for (const auto& r : recs) {
    EXPECT_NEAR(r.fidelity, 1.0, 1e-12) << r.pauli.label();
    for (double e : r.expectations) EXPECT_LE(std::abs(e), 1.0);
  }
}

TEST(CbTest, DephasingOnFirstQubit) {
  const auto c = probs_with(2, {{"ZI", 0.01}});
  const auto cycle = nt::CbCycle::pauli_idle(2, nt::error_probs_to_fidelities(c));
  nt::CbOptions opts;
  opts.seed = 71;
  const auto recs = nt::run_cb(cycle, opts);
  const auto& xi = record_for(recs, "XI");
  EXPECT_NEAR(xi.fidelity, 0.98, 3 * xi.fidelity_stderr);
  EXPECT_GT(xi.fidelity_stderr, 0.0);
  const auto& zi = record_for(recs, "ZI");
  EXPECT_NEAR(zi.fidelity, 1.0, 3 * zi.fidelity_stderr + 1e-12);
}

TEST(CbTest, InfidelityAgreesWithTwirledProcessFidelity) {
  std::mt19937_64 rng(72);
  const auto err = nt::random_cptp(2, 2, rng, 0.03);
  const auto cycle = nt::CbCycle::from_label("CZ", err);
  nt::CbOptions opts;
  opts.seed = 73;
  const auto map = nt::reconstruct(nt::run_cb(cycle, opts));
  const double truth = nt::process_infidelity(nt::pauli_twirl(err), nt::SuperOp::identity(2));
  EXPECT_NEAR(map.infidelity, truth, 2 * map.infidelity_stderr)
      << "stderr " << map.infidelity_stderr;
}

TEST(CbTest, SpamScaleIsAbsorbedByTheAmplitude) {
  const auto c = probs_with(2, {{"XI", 0.004}, {"ZZ", 0.002}, {"IY", 0.003}});
  const auto cycle = nt::CbCycle::pauli_idle(2, nt::error_probs_to_fidelities(c));
  nt::CbOptions opts;
  opts.exact = true;
  const auto clean = nt::run_cb(cycle, opts);
  opts.spam_scale = 0.85;
  const auto scaled = nt::run_cb(cycle, opts);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    EXPECT_NEAR(scaled[i].fidelity, clean[i].fidelity, 1e-12);
    EXPECT_NEAR(scaled[i].amplitude, 0.85 * clean[i].amplitude, 1e-12);
  }
}

TEST(CbTest, SpamScaleWithinStderrWhenSampled) {
  const auto c = probs_with(2, {{"XI", 0.004}, {"ZZ", 0.002}});
  const auto cycle = nt::CbCycle::pauli_idle(2, nt::error_probs_to_fidelities(c));
  nt::CbOptions opts;
  opts.seed = 74;
  const auto clean = nt::run_cb(cycle, opts);
  opts.spam_scale = 0.9;
  const auto scaled = nt::run_cb(cycle, opts);
  for (std::size_t i = 0; i < clean.size(); ++i) {
    const double se = std::hypot(clean[i].fidelity_stderr, scaled[i].fidelity_stderr);
    EXPECT_NEAR(scaled[i].fidelity, clean[i].fidelity, 3 * se) << clean[i].pauli.label();
  }
}

TEST(FitDecayTest, ExactExponential) {
  const std::vector<int> m{4, 16, 64};
  std::vector<double> y;
  for (int d : m) y.push_back(0.9 * std::pow(0.995, d));
  const auto r = nt::fit_decay(PauliString::parse("XZ"), m, y, {0.0, 0.0, 0.0});
  EXPECT_NEAR(r.fidelity, 0.995, 1e-12);
  EXPECT_NEAR(r.amplitude, 0.9, 1e-12);
  EXPECT_FALSE(r.diverged);
  const auto bad = nt::fit_decay(PauliString::parse("XZ"), m, {0.5, -0.1, 0.01}, {0, 0, 0});
  EXPECT_TRUE(bad.diverged);
  EXPECT_THROW(nt::fit_decay(PauliString::parse("X"), {4}, {0.9}, {0.0}), nt::InvalidInput);
}

TEST(ReconstructTest, ExactRoundTripOnPauliChannels) {
  std::mt19937_64 rng(75);
  for (int n : {1, 2, 3}) {
    const auto c = nt::random_pauli_channel(n, rng, 0.05);
    const auto cycle = nt::CbCycle::pauli_idle(n, c.fidelities());
    nt::CbOptions opts;
    opts.exact = true;
    const auto map = nt::reconstruct(nt::run_cb(cycle, opts));
    EXPECT_LT((map.probs - c.probs).cwiseAbs().maxCoeff(), 1e-10) << "n=" << n;
    EXPECT_FALSE(map.unphysical);
  }
}

TEST(ReconstructTest, FourQubitWeightOneNoiseHidesHigherWeights) {
  const auto c = probs_with(4, {{"XIII", 0.002},
                                {"IZII", 0.003},
                                {"IIYI", 0.001},
                                {"IIIZ", 0.0025},
                                {"ZIII", 0.0015}});
  const auto cycle = nt::CbCycle::pauli_idle(4, nt::error_probs_to_fidelities(c));
  nt::CbOptions opts;
  opts.exact = true;
  const auto map = nt::reconstruct(nt::run_cb(cycle, opts));
  for (std::size_t i = 1; i < map.shown.size(); ++i) {
    const auto p = PauliString::from_index(4, i);
    if (p.weight() >= 2) EXPECT_FALSE(map.shown[i]) << p.label();
  }
  EXPECT_TRUE(map.shown[PauliString::parse("IZII").index()]);
  EXPECT_EQ(map.weights.marginal.size(), 4u);
}

TEST(ReconstructTest, TwirledZzRotationIsQuadratic) {
  for (double theta : {0.05, 0.1}) {
    const auto cycle = nt::CbCycle::from_label("I:I", zz_rotation(theta));
    nt::CbOptions opts;
    opts.exact = true;
    opts.randomizations = 200;
    const auto map = nt::reconstruct(nt::run_cb(cycle, opts));
    const double zz = map.probs(static_cast<Eigen::Index>(PauliString::parse("ZZ").index()));
    EXPECT_NEAR(zz / (theta * theta / 4), 1.0, 0.1) << theta;
    EXPECT_NEAR(map.weights.joint[0].value[3][3], zz, 1e-15);
  }
}

TEST(ReconstructTest, RejectsIncompleteRecords) {
  EXPECT_THROW(nt::reconstruct({}), nt::InvalidInput);
  std::vector<nt::DecayRecord> one(1);
  one[0].pauli = PauliString::parse("XI");
  EXPECT_THROW(nt::reconstruct(one), nt::InvalidInput);
}

TEST(ReconstructTest, CsvAndQuantiles) {
  EXPECT_NEAR(nt::bonferroni_z(0.95, 1), 1.959963984540054, 1e-9);
  EXPECT_GT(nt::bonferroni_z(0.95, 16), nt::bonferroni_z(0.95, 1));
  const auto cycle = nt::CbCycle::pauli_idle(1, nt::Vector::Ones(4));
  nt::CbOptions opts;
  opts.exact = true;
  const std::string csv = nt::cer_csv(nt::reconstruct(nt::run_cb(cycle, opts)));
  EXPECT_EQ(csv.rfind("module,method,kind,pauli,weight,value,ci,shown", 0), 0u);
}
