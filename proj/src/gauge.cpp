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

#include "noise_tailor/gauge.hpp"

#include <cmath>
#include <vector>

#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>
#include <unsupported/Eigen/MatrixFunctions>

namespace noise_tailor {

namespace {

constexpr int kGaugeParams = 30;

// T and T^-1 without a general inverse: T^-1 = diag(exp(-a)) U^T.
struct GaugePair {
  Matrix t;
  Matrix t_inv;
};

GaugePair gauge_pair(std::span<const double> p) {
  const auto& basis = pauli_basis(2);
  CMatrix h = CMatrix::Zero(4, 4);
  for (int k = 0; k < 15; ++k) h += p[static_cast<std::size_t>(k)] * basis[static_cast<std::size_t>(k + 1)];
  const CMatrix u = (complex(0.0, -1.0) * h).exp();
  const Matrix rot = ptm_from_unitary(u, 1e-8).matrix();
  Vector scale = Vector::Ones(16);
  for (int k = 0; k < 15; ++k) scale(k + 1) = std::exp(p[static_cast<std::size_t>(15 + k)]);
  return {rot * scale.asDiagonal(), scale.cwiseInverse().asDiagonal() * rot.transpose()};
}

GateSet transform(const GateSet& gs, const GaugePair& g) {
  GateSet out;
  for (std::size_t i = 0; i < kNumCycles; ++i) {
    out.gates[i] = SuperOp(2, g.t_inv * gs.gates[i].matrix() * g.t);
  }
  out.spam.rho = g.t_inv * gs.spam.rho;
  for (std::size_t o = 0; o < kNumOutcomes; ++o) {
    out.spam.effects[o] = g.t.transpose() * gs.spam.effects[o];
  }
  return out;
}

class GaugeCost final : public ceres::FirstOrderFunction {
 public:
  GaugeCost(const GateSet& gs, const GateSet& target, double w, int active)
      : gs_(gs), target_(target), w_(w), active_(active) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    std::vector<double> p(kGaugeParams, 0.0);
    std::copy(x, x + active_, p.begin());
    *cost = value(p);
    if (gradient == nullptr) return std::isfinite(*cost);
    const double h = 1e-6;
    for (int i = 0; i < active_; ++i) {
      const double keep = p[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = keep + h;
      const double up = value(p);
      p[static_cast<std::size_t>(i)] = keep - h;
      const double down = value(p);
      p[static_cast<std::size_t>(i)] = keep;
      gradient[i] = (up - down) / (2.0 * h);
    }
    return std::isfinite(*cost);
  }

  int NumParameters() const override { return active_; }

 private:
  double value(std::span<const double> p) const {
    return gauge_objective(transform(gs_, gauge_pair(p)), target_, w_);
  }

  const GateSet& gs_;
  const GateSet& target_;
  double w_;
  int active_;  // leading parameters being optimised
};

}  // namespace

Matrix gauge_transform(std::span<const double> params) {
  if (params.size() != kGaugeParams) throw DimensionMismatch("gauge needs 30 parameters");
  return gauge_pair(params).t;
}

GateSet apply_gauge(const GateSet& gs, const Matrix& t) {
  const Eigen::FullPivLU<Matrix> lu(t);
  if (!lu.isInvertible()) throw InvalidInput("gauge transform is singular");
  return transform(gs, {t, lu.inverse()});
}

double gauge_objective(const GateSet& gs, const GateSet& target, double spam_weight) {
  double d = 0.0;
  for (std::size_t i = 0; i < kNumCycles; ++i) {
    d += (gs.gates[i].matrix() - target.gates[i].matrix()).squaredNorm();
  }
  double s = (gs.spam.rho - target.spam.rho).squaredNorm();
  for (std::size_t o = 0; o < kNumOutcomes; ++o) {
    s += (gs.spam.effects[o] - target.spam.effects[o]).squaredNorm();
  }
  return d + spam_weight * s;
}

GaugeResult gauge_align(const GateSet& gs, const GateSet& target, const GaugeOptions& opts) {
  std::vector<double> x(kGaugeParams, 0.0);
  const int active = opts.diagonal ? kGaugeParams : 15;
  ceres::GradientProblem problem(new GaugeCost(gs, target, opts.spam_weight, active));
  ceres::GradientProblemSolver::Options o;
  o.max_num_iterations = opts.max_iterations;
  o.function_tolerance = 1e-14;
  o.gradient_tolerance = 1e-12;
  o.parameter_tolerance = 1e-14;
  o.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(o, problem, x.data(), &summary);
  GaugeResult r;
  const GaugePair g = gauge_pair(x);
  r.transform = g.t;
  r.aligned = transform(gs, g);
  r.distance_before = gauge_objective(gs, target, opts.spam_weight);
  r.distance_after = gauge_objective(r.aligned, target, opts.spam_weight);
  // The identity gauge is always admissible.
  if (r.distance_after > r.distance_before) {
    r.transform = Matrix::Identity(16, 16);
    r.aligned = gs;
    r.distance_after = r.distance_before;
  }
  return r;
}

}  // namespace noise_tailor
