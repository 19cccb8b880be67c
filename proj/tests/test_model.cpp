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
#include <span>
#include <string>
#include <vector>

#include "noise_tailor/inference.hpp"
#include "noise_tailor/model.hpp"
#include "noise_tailor/scenario.hpp"

namespace nt = noise_tailor;
using nt::ModelFamily;

namespace {

std::span<const double> as_span(const nt::Vector& v) {
  return {v.data(), static_cast<std::size_t>(v.size())};
}

const std::string kConfigs = std::string(NOISE_TAILOR_SOURCE_DIR) + "/configs/";

struct Fixture {
  nt::CircuitSuite suite;
  nt::DataSet data;
};

const Fixture& fixture() {
  static const Fixture f = [] {
    Fixture out;
    nt::SuiteOptions so;
    so.max_depth = 2;
    out.suite = nt::generate_suite(so);
    nt::ExperimentOptions eo;
    eo.seed = 61;
    out.data = nt::run_experiment(
        out.suite.circuits, nt::NoiseScenario::load(kConfigs + "scenarios/markov_coherent.toml"),
        eo);
    return out;
  }();
  return f;
}

double value_and_gradient(const nt::GateSetModel& model, const nt::Likelihood& lik,
                          const nt::Vector& x, nt::Vector* grad) {
  nt::GateSetModel::Eval ev;
  const std::span<const double> xs(x.data(), static_cast<std::size_t>(x.size()));
  model.forward(xs, ev);
  if (grad == nullptr) return lik.half_lambda(ev, nullptr);
  nt::GateSetModel::Adjoint adj;
  const double f = lik.half_lambda(ev, &adj);
  grad->resize(x.size());
  model.backward(xs, ev, adj, std::span<double>(grad->data(), xs.size()));
  return f;
}

}  // namespace

TEST(ModelFamilyTest, NamesRoundTrip) {
  for (ModelFamily f : nt::all_families()) {
    EXPECT_EQ(nt::parse_family(nt::family_name(f)), f);
  }
  EXPECT_THROW(nt::parse_family("XYZ"), nt::InvalidInput);
}

TEST(ModelFamilyTest, NestingFollowsHierarchy) {
  using F = ModelFamily;
  EXPECT_TRUE(nt::nested_in(F::SCF, F::SCD));
  EXPECT_TRUE(nt::nested_in(F::SCD, F::S));
  EXPECT_TRUE(nt::nested_in(F::S, F::CPTP));
  EXPECT_TRUE(nt::nested_in(F::SCF, F::CF));
  EXPECT_TRUE(nt::nested_in(F::CF, F::CD));
  EXPECT_TRUE(nt::nested_in(F::SCD, F::CD));
  EXPECT_TRUE(nt::nested_in(F::CD, F::CPTP));
  EXPECT_FALSE(nt::nested_in(F::S, F::CD));
  EXPECT_FALSE(nt::nested_in(F::CD, F::S));
  EXPECT_FALSE(nt::nested_in(F::CPTP, F::SCF));
  // Transitive closure.
  for (F a : nt::all_families()) {
    for (F b : nt::all_families()) {
      for (F c : nt::all_families()) {
        if (nt::nested_in(a, b) && nt::nested_in(b, c)) EXPECT_TRUE(nt::nested_in(a, c));
      }
    }
  }
}

TEST(ModelFamilyTest, StructuralComponentSizes) {
  const nt::GateSetModel cptp(ModelFamily::CPTP);
  for (const auto& c : cptp.components()) {
    EXPECT_EQ(c.kind, nt::ComponentKind::Choi2Q);
    EXPECT_EQ(c.structural_size(), 240);  // d^4 - d^2
  }
  const nt::GateSetModel scd(ModelFamily::SCD);
  for (const auto& c : scd.components()) {
    if (c.kind == nt::ComponentKind::Stoch1Q) EXPECT_EQ(c.structural_size(), 3);
    if (c.kind == nt::ComponentKind::Stoch2Q) EXPECT_EQ(c.structural_size(), 15);
  }
  const nt::GateSetModel cd(ModelFamily::CD);
  for (const auto& c : cd.components()) {
    if (c.kind == nt::ComponentKind::Choi1Q) EXPECT_EQ(c.structural_size(), 12);
  }
}

TEST(ModelFamilyTest, NonGaugeCountsFollowNesting) {
  for (ModelFamily small : nt::all_families()) {
    for (ModelFamily large : nt::all_families()) {
      if (small != large && nt::nested_in(small, large)) {
        EXPECT_LT(nt::nongauge_parameter_count(small), nt::nongauge_parameter_count(large))
            << nt::family_name(small) << " < " << nt::family_name(large);
      }
    }
    const nt::GateSetModel m(small);
    EXPECT_LE(nt::nongauge_parameter_count(small), m.structural_param_count());
  }
}

TEST(ComponentTest, ChoiParameterisationIsAlwaysCptp) {
  std::mt19937_64 rng(62);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int n : {1, 2}) {
    const int size = n == 1 ? 16 : 256;
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<double> a(static_cast<std::size_t>(size));
      for (double& v : a) v = g(rng);
      const nt::SuperOp e(n, nt::choi_component_ptm(n, a));
      EXPECT_TRUE(e.is_trace_preserving(1e-10));
      EXPECT_GT(nt::choi_min_eigenvalue(e), -1e-9);
    }
  }
}

TEST(ComponentTest, StochasticParameterisationIsPauliChannel) {
  std::mt19937_64 rng(63);
  std::normal_distribution<double> g(0.0, 0.1);
  std::vector<double> s(15);
  for (double& v : s) v = g(rng);
  const nt::Matrix m = nt::stochastic_component_ptm(2, s);
  nt::Matrix off = m;
  off.diagonal().setZero();
  EXPECT_EQ(off.cwiseAbs().maxCoeff(), 0.0);
  const auto c = nt::fidelities_to_error_probs(m.diagonal());
  EXPECT_FALSE(c.unphysical);
  EXPECT_NEAR(c.probs.sum(), 1.0, 1e-12);
}

TEST(ComponentTest, EmbedRoundTrips) {
  std::mt19937_64 rng(64);
  std::normal_distribution<double> g(0.0, 0.3);
  std::vector<double> a(256);
  for (double& v : a) v = g(rng);
  a[0] += 8.0;  // near the identity
  const nt::Matrix ptm = nt::choi_component_ptm(2, a);
  const auto back = nt::choi_component_ptm(2, nt::choi_component_embed(2, ptm, 0.0));
  EXPECT_LT((back - ptm).cwiseAbs().maxCoeff(), 1e-8);

  std::vector<double> s(15);
  for (double& v : s) v = g(rng);
  const nt::Matrix sp = nt::stochastic_component_ptm(2, s);
  EXPECT_LT((nt::stochastic_component_ptm(2, nt::stochastic_component_embed(2, sp)) - sp)
                .cwiseAbs()
                .maxCoeff(),
            1e-12);
}

TEST(GateSetModelTest, EmbedReproducesGateSetsInsideTheFamily) {
  // Single-qubit Pauli rates on the 1Q cycles. A factorised family holds
  // the product of the two marginals, which differs from the joint channel
  // by cross terms bounded by 4 p0 p1 per PTM entry.
  const auto truth =
      nt::build_gateset(nt::NoiseScenario::load(kConfigs + "scenarios/drift.toml"));
  const double p0 = 0.0012 + 0.0015 + 0.0005;
  const double p1 = 0.0010 + 0.0013 + 0.0005;
  for (ModelFamily f : nt::all_families()) {
    const bool factorised = f != ModelFamily::CPTP && f != ModelFamily::S;
    const nt::GateSetModel m(f);
    const auto back = m.to_gateset(as_span(m.embed(truth)));
    for (std::size_t g = 0; g < truth.gates.size(); ++g) {
      const double tol = factorised && g + 1 < truth.gates.size() ? 4 * p0 * p1 : 1e-5;
      EXPECT_LT((back.gates[g].matrix() - truth.gates[g].matrix()).cwiseAbs().maxCoeff(), tol)
          << nt::family_name(f) << " gate " << g;
    }
    // The prepared state goes through a regularised Cholesky factor.
    EXPECT_LT((back.spam.rho - truth.spam.rho).cwiseAbs().maxCoeff(), 1e-6);
  }
}

TEST(GateSetModelTest, AnalyticGradientMatchesFiniteDifferences) {
  const auto& fx = fixture();
  const nt::Likelihood lik(fx.suite, fx.data);
  std::mt19937_64 rng(65);
  std::normal_distribution<double> g(0.0, 1.0);
  for (ModelFamily f : nt::all_families()) {
    const nt::GateSetModel model(f);
    const nt::Vector base = model.embed(nt::GateSet::ideal());
    for (int point = 0; point < 10; ++point) {
      nt::Vector x = base;
      for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 0.02 * g(rng);
      nt::Vector grad;
      value_and_gradient(model, lik, x, &grad);
      nt::Vector dir(x.size());
      for (Eigen::Index i = 0; i < x.size(); ++i) dir(i) = g(rng);
      dir.normalize();
      const double h = 1e-5;
      const double fd = (value_and_gradient(model, lik, x + h * dir, nullptr) -
                         value_and_gradient(model, lik, x - h * dir, nullptr)) /
                        (2 * h);
      const double an = grad.dot(dir);
      EXPECT_LT(std::abs(an - fd), 1e-5 * std::max(1.0, std::abs(fd)))
          << nt::family_name(f) << " point " << point << " analytic " << an << " fd " << fd;
    }
  }
}
