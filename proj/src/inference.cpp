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

#include "noise_tailor/inference.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <numeric>
#include <random>
#include <unordered_map>

#include <Eigen/SVD>
#include <ceres/gradient_problem.h>
#include <ceres/gradient_problem_solver.h>

namespace noise_tailor {

namespace {

std::vector<int> labels_of(const LayerSequence& seq) {
  std::vector<int> out;
  out.reserve(seq.size());
  for (const Layer& l : seq) {
    if (l.dressed()) throw InvalidInput("likelihood needs undressed circuits");
    out.push_back(l.label());
  }
  return out;
}

// -n log p below p_min is replaced by its second-order expansion at p_min;
// negative probabilities get an extra quadratic penalty.
struct TermValue {
  double value;
  double slope;
};

TermValue outcome_term(double n, double total, double p, double p_min) {
  TermValue t{0.0, 0.0};
  if (n > 0.0) {
    const double f = n / total;
    if (p >= p_min) {
      t.value = n * (std::log(f) - std::log(p));
      t.slope = -n / p;
    } else {
      const double x = p - p_min;
      t.value = n * (std::log(f) -
                     (std::log(p_min) + x / p_min - x * x / (2.0 * p_min * p_min)));
      t.slope = -n * (1.0 / p_min - x / (p_min * p_min));
    }
  }
  if (p < 0.0) {
    t.value += total * p * p / p_min;
    t.slope += 2.0 * total * p / p_min;
  }
  return t;
}

}  // namespace

Likelihood::Likelihood(const CircuitSuite& suite, const DataSet& data, double p_min)
    : p_min_(p_min) {
  circuits_ = suite.circuits;
  build(suite.prep_fiducials, suite.meas_fiducials, suite.germs, data);
}

Likelihood::Likelihood(const std::vector<Circuit>& circuits, const DataSet& data,
                       double p_min)
    : p_min_(p_min) {
  circuits_ = circuits;
  for (Circuit& c : circuits_) c.structure = CircuitStructure{};
  build({}, {}, {}, data);
}

void Likelihood::build(const std::vector<LayerSequence>& preps,
                       const std::vector<LayerSequence>& meas,
                       const std::vector<LayerSequence>& germs, const DataSet& data) {
  std::unordered_map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < data.ids.size(); ++i) index.emplace(data.ids[i], i);
  for (const auto& p : preps) preps_.push_back(labels_of(p));
  for (const auto& m : meas) meas_.push_back(labels_of(m));
  preps_.emplace_back();  // empty sequence for unstructured circuits
  meas_.emplace_back();
  for (const auto& g : germs) germs_.push_back(Germ{labels_of(g), 0, {}});
  // A shared zero-power group carries the germ-free circuits.
  const int empty_germ = static_cast<int>(germs_.size());
  germs_.push_back(Germ{{}, 0, {}});

  counts_.resize(circuits_.size());
  for (std::size_t i = 0; i < circuits_.size(); ++i) {
    const Circuit& c = circuits_[i];
    const std::string id = c.base_id.empty() ? c.id() : c.base_id;
    const auto it = index.find(id);
    if (it == index.end()) throw InvalidInput("dataset has no counts for " + id);
    counts_[i] = data.counts[it->second];
    const CircuitStructure& s = c.structure;
    const bool structured = s.prep >= 0 && s.meas >= 0 &&
                            s.prep < static_cast<int>(preps.size()) &&
                            s.meas < static_cast<int>(meas.size()) &&
                            s.germ < static_cast<int>(germs.size());
    if (!structured) {
      const int g = add_custom(c);
      germs_[static_cast<std::size_t>(g)].terms.push_back(
          {static_cast<int>(preps_.size()) - 1, static_cast<int>(meas_.size()) - 1, 1,
           static_cast<int>(i)});
      continue;
    }
    const int g = s.germ >= 0 ? s.germ : empty_germ;
    const int power = s.germ >= 0 ? s.power : 0;
    germs_[static_cast<std::size_t>(g)].terms.push_back({s.prep, s.meas, power,
                                                         static_cast<int>(i)});
  }
  for (Germ& g : germs_) {
    std::sort(g.terms.begin(), g.terms.end(),
              [](const Term& a, const Term& b) { return a.power < b.power; });
    g.max_power = g.terms.empty() ? 0 : g.terms.back().power;
  }
  circuit_count_ = circuits_.size();
}

int Likelihood::add_custom(const Circuit& c) {
  germs_.push_back(Germ{labels_of(c.layers), 1, {}});
  return static_cast<int>(germs_.size()) - 1;
}

double Likelihood::half_lambda(const GateSetModel::Eval& ev,
                               GateSetModel::Adjoint* adj) const {
  const auto& gates = ev.gates;
  const bool grad = adj != nullptr;
  if (grad) adj->set_zero();

  // Prepared states through each prep fiducial, keeping intermediates.
  std::vector<std::vector<Vec16>> prep_states(preps_.size());
  for (std::size_t p = 0; p < preps_.size(); ++p) {
    auto& st = prep_states[p];
    st.reserve(preps_[p].size() + 1);
    st.push_back(ev.rho);
    for (int l : preps_[p]) st.push_back(gates[static_cast<std::size_t>(l)] * st.back());
  }
  // Effects pulled back through each meas fiducial: E_m = E G_r ... G_1.
  using Eff = Eigen::Matrix<double, kNumOutcomes, 16>;
  Eff e0;
  for (int o = 0; o < kNumOutcomes; ++o) e0.row(o) = ev.effects[static_cast<std::size_t>(o)].transpose();
  std::vector<std::vector<Eff>> meas_effects(meas_.size());
  for (std::size_t m = 0; m < meas_.size(); ++m) {
    auto& w = meas_effects[m];
    const auto& seq = meas_[m];
    w.reserve(seq.size() + 1);
    w.push_back(e0);
    for (auto it = seq.rbegin(); it != seq.rend(); ++it) {
      w.push_back(w.back() * gates[static_cast<std::size_t>(*it)]);
    }
  }
  std::vector<Vec16> d_prep(preps_.size(), Vec16::Zero());
  std::vector<Eff> d_meas(meas_.size(), Eff::Zero());

  double total_value = 0.0;
  std::vector<Mat16> powers;
  std::vector<Mat16> d_powers;
  for (const Germ& germ : germs_) {
    if (germ.terms.empty()) continue;
    Mat16 gm = Mat16::Identity();
    for (int l : germ.labels) gm = gates[static_cast<std::size_t>(l)] * gm;
    powers.assign(static_cast<std::size_t>(germ.max_power + 1), Mat16::Identity());
    for (int k = 1; k <= germ.max_power; ++k) {
      powers[static_cast<std::size_t>(k)] = gm * powers[static_cast<std::size_t>(k - 1)];
    }
    if (grad) d_powers.assign(powers.size(), Mat16::Zero());
    for (const Term& t : germ.terms) {
      const Vec16& rho = prep_states[static_cast<std::size_t>(t.prep)].back();
      const Eff& eff = meas_effects[static_cast<std::size_t>(t.meas)].back();
      const Mat16& pw = powers[static_cast<std::size_t>(t.power)];
      const Vec16 v = pw * rho;
      const Eigen::Matrix<double, kNumOutcomes, 1> probs = eff * v;
      const Counts& n = counts_[static_cast<std::size_t>(t.circuit)];
      double total = 0.0;
      for (double x : n) total += x;
      if (total <= 0.0) continue;
      Eigen::Matrix<double, kNumOutcomes, 1> w;
      for (int o = 0; o < kNumOutcomes; ++o) {
        const TermValue tv = outcome_term(n[static_cast<std::size_t>(o)], total, probs(o), p_min_);
        total_value += tv.value;
        w(o) = tv.slope;
      }
      if (!grad) continue;
      const Vec16 dv = eff.transpose() * w;
      d_meas[static_cast<std::size_t>(t.meas)] += w * v.transpose();
      d_powers[static_cast<std::size_t>(t.power)] += dv * rho.transpose();
      d_prep[static_cast<std::size_t>(t.prep)] += pw.transpose() * dv;
    }
    if (!grad || germ.labels.empty()) continue;
    // Back through Pi_k = G Pi_{k-1}.
    Mat16 d_germ = Mat16::Zero();
    for (int k = germ.max_power; k >= 1; --k) {
      const auto ku = static_cast<std::size_t>(k);
      d_germ.noalias() += d_powers[ku] * powers[ku - 1].transpose();
      d_powers[ku - 1].noalias() += gm.transpose() * d_powers[ku];
    }
    // Back through the germ product G_m ... G_1.
    const auto m = germ.labels.size();
    std::vector<Mat16> prefix(m + 1, Mat16::Identity());
    for (std::size_t i = 0; i < m; ++i) {
      prefix[i + 1] = gates[static_cast<std::size_t>(germ.labels[i])] * prefix[i];
    }
    Mat16 suffix_adj = d_germ;  // S^T dGamma with S = G_m ... G_{i+2}
    for (std::size_t i = m; i-- > 0;) {
      const auto l = static_cast<std::size_t>(germ.labels[i]);
      adj->gates[l].noalias() += suffix_adj * prefix[i].transpose();
      suffix_adj = gates[l].transpose() * suffix_adj;
    }
  }
  if (!grad) return total_value;

  for (std::size_t p = 0; p < preps_.size(); ++p) {
    const auto& seq = preps_[p];
    const auto& st = prep_states[p];
    Vec16 u = d_prep[p];
    for (std::size_t i = seq.size(); i-- > 0;) {
      const auto l = static_cast<std::size_t>(seq[i]);
      adj->gates[l].noalias() += u * st[i].transpose();
      u = gates[l].transpose() * u;
    }
    adj->rho += u;
  }
  for (std::size_t m = 0; m < meas_.size(); ++m) {
    const auto& seq = meas_[m];
    const auto& w = meas_effects[m];
    // w[j] = E G_r ... G_{r-j+1}; w[j+1] = w[j] G_{r-j}.
    Eff dw = d_meas[m];
    for (std::size_t j = seq.size(); j-- > 0;) {
      const auto l = static_cast<std::size_t>(seq[seq.size() - 1 - j]);
      adj->gates[l].noalias() += w[j].transpose() * dw;
      dw = dw * gates[l].transpose();
    }
    for (int o = 0; o < kNumOutcomes; ++o) {
      adj->effects[static_cast<std::size_t>(o)] += dw.row(o).transpose();
    }
  }
  return total_value;
}

GateSetModel::Eval Likelihood::eval_of(const GateSet& gs) {
  GateSetModel::Eval ev;
  for (std::size_t g = 0; g < kNumCycles; ++g) {
    if (gs.gates[g].dim() != 16) throw DimensionMismatch("two-qubit gate set expected");
    ev.gates[g] = gs.gates[g].matrix();
  }
  ev.rho = gs.spam.rho;
  for (std::size_t o = 0; o < kNumOutcomes; ++o) ev.effects[o] = gs.spam.effects[o];
  return ev;
}

double Likelihood::lambda(const GateSet& gs) const {
  return 2.0 * half_lambda(eval_of(gs), nullptr);
}

std::vector<Distribution> Likelihood::probabilities(const GateSet& gs) const {
  std::vector<Distribution> out(circuits_.size());
  for (std::size_t i = 0; i < circuits_.size(); ++i) {
    Vector v = propagate(circuits_[i], gs);
    const auto p = gs.spam.probabilities(v);
    std::copy(p.begin(), p.end(), out[i].begin());
  }
  return out;
}

namespace {

class LikelihoodFunction final : public ceres::FirstOrderFunction {
 public:
  LikelihoodFunction(const Likelihood& lik, const GateSetModel& model)
      : lik_(lik), model_(model) {}

  bool Evaluate(const double* x, double* cost, double* gradient) const override {
    const std::span<const double> xs(x, static_cast<std::size_t>(model_.num_params()));
    GateSetModel::Eval ev;
    model_.forward(xs, ev);
    GateSetModel::Adjoint adj;
    const double v = lik_.half_lambda(ev, gradient != nullptr ? &adj : nullptr);
    if (!std::isfinite(v)) return false;
    *cost = v;
    if (gradient != nullptr) {
      model_.backward(xs, ev, adj,
                      std::span<double>(gradient, static_cast<std::size_t>(model_.num_params())));
      for (int i = 0; i < model_.num_params(); ++i) {
        if (!std::isfinite(gradient[i])) return false;
      }
    }
    return true;
  }

  int NumParameters() const override { return model_.num_params(); }

 private:
  const Likelihood& lik_;
  const GateSetModel& model_;
};

struct RunOutcome {
  Vector x;
  double value;
  int iterations;
  bool converged;
};

RunOutcome run_lbfgs(const Likelihood& lik, const GateSetModel& model, Vector x,
                     const FitOptions& opts) {
  ceres::GradientProblem problem(new LikelihoodFunction(lik, model));
  ceres::GradientProblemSolver::Options o;
  o.line_search_direction_type = ceres::LBFGS;
  o.max_num_iterations = opts.max_iterations;
  o.gradient_tolerance = opts.gradient_tolerance;
  o.function_tolerance = opts.function_tolerance;
  o.parameter_tolerance = 1e-14;
  o.max_solver_time_in_seconds = opts.max_seconds;
  o.logging_type = ceres::SILENT;
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(o, problem, x.data(), &summary);
  return {x, summary.final_cost, static_cast<int>(summary.iterations.size()),
          summary.termination_type == ceres::CONVERGENCE};
}

}  // namespace

double n_sigma(double lambda, int k) {
  if (k <= 0) throw InvalidInput("N_sigma needs positive degrees of freedom");
  return (lambda - k) / std::sqrt(2.0 * k);
}

FitResult fit_model(const Likelihood& lik, ModelFamily family, const FitOptions& opts,
                    const std::optional<GateSet>& start) {
  const GateSetModel model(family);
  const Vector x0 = model.embed(start.value_or(GateSet::ideal()));
  RunOutcome best = run_lbfgs(lik, model, x0, opts);
  std::mt19937_64 rng(derive_seed(opts.seed, family_name(family), 0));
  std::normal_distribution<double> normal;
  int iterations = best.iterations;
  for (int r = 0; r < opts.restarts; ++r) {
    Vector x = best.x;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      x(i) += opts.restart_scale * (std::abs(x(i)) + 0.1) * normal(rng);
    }
    RunOutcome trial = run_lbfgs(lik, model, x, opts);
    iterations += trial.iterations;
    if (trial.value < best.value) best = std::move(trial);
  }
  FitResult fit;
  fit.family = family;
  fit.params = best.x;
  fit.gateset = model.to_gateset({best.x.data(), static_cast<std::size_t>(best.x.size())});
  fit.lambda = 2.0 * best.value;
  fit.n_max = lik.n_max();
  fit.n_params = nongauge_parameter_count(family);
  fit.n_params_structural = model.structural_param_count();
  fit.k = fit.n_max - fit.n_params;
  fit.n_sigma = fit.k > 0 ? n_sigma(fit.lambda, fit.k) : 0.0;
  fit.iterations = iterations;
  fit.converged = best.converged;
  return fit;
}

const FitResult& find_fit(const std::vector<FitResult>& fits, ModelFamily f) {
  for (const FitResult& r : fits) {
    if (r.family == f) return r;
  }
  throw InvalidInput(std::string("no fit for family ") + family_name(f));
}

std::vector<FitResult> fit_all_families(const Likelihood& lik, const FitOptions& opts) {
  using F = ModelFamily;
  std::vector<FitResult> fits;
  auto better = [&](F a, F b) -> const GateSet& {
    const FitResult& x = find_fit(fits, a);
    const FitResult& y = find_fit(fits, b);
    return x.lambda <= y.lambda ? x.gateset : y.gateset;
  };
  fits.push_back(fit_model(lik, F::SCF, opts));
  fits.push_back(fit_model(lik, F::SCD, opts, find_fit(fits, F::SCF).gateset));
  fits.push_back(fit_model(lik, F::CF, opts, find_fit(fits, F::SCF).gateset));
  fits.push_back(fit_model(lik, F::S, opts, find_fit(fits, F::SCD).gateset));
  fits.push_back(fit_model(lik, F::CD, opts, better(F::SCD, F::CF)));
  fits.push_back(fit_model(lik, F::CPTP, opts, better(F::S, F::CD)));
  return fits;
}

namespace {

// Orthonormal basis of the column space, with the numerical rank.
Matrix column_basis(const Matrix& a, double rel_tol) {
  if (a.cols() == 0 || a.rows() == 0) return Matrix(a.rows(), 0);
  Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU);
  const Vector& s = svd.singularValues();
  const double cut = rel_tol * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  Eigen::Index r = 0;
  while (r < s.size() && s(r) > cut) ++r;
  return svd.matrixU().leftCols(r);
}

Eigen::Index numerical_rank(const Matrix& a, double rel_tol) {
  return column_basis(a, rel_tol).cols();
}

// Gate-set vector: 10 gates x 256 entries, rho, four effects.
constexpr int kGateRows = 16 * 16;
constexpr int kRhoRow = kNumCycles * kGateRows;
constexpr int kEffRow = kRhoRow + 16;
constexpr int kVecRows = kEffRow + 16 * kNumOutcomes;

Vector flatten(const GateSetModel::Eval& ev) {
  Vector v(kVecRows);
  for (int g = 0; g < kNumCycles; ++g) {
    v.segment(g * kGateRows, kGateRows) =
        Eigen::Map<const Vector>(ev.gates[static_cast<std::size_t>(g)].data(), kGateRows);
  }
  v.segment(kRhoRow, 16) = ev.rho;
  for (int o = 0; o < kNumOutcomes; ++o) {
    v.segment(kEffRow + 16 * o, 16) = ev.effects[static_cast<std::size_t>(o)];
  }
  return v;
}

int compute_nongauge(ModelFamily family) {
  const GateSetModel model(family);
  std::mt19937_64 rng(derive_seed(7, family_name(family), 0));
  std::normal_distribution<double> normal;
  // A well-mixed interior point keeps every Choi factor far from rank
  // deficiency, so the numerical rank equals the generic rank.
  Vector x = model.embed(GateSet::ideal(), 0.3);
  for (Eigen::Index i = 0; i < x.size(); ++i) x(i) += 0.05 * normal(rng);
  GateSetModel::Eval ev;
  model.forward({x.data(), static_cast<std::size_t>(x.size())}, ev);

  // Connected blocks: components linked through shared gates; SPAM apart.
  const auto& comps = model.components();
  const std::size_t nc = comps.size();
  std::vector<std::size_t> parent(nc);
  std::iota(parent.begin(), parent.end(), 0);
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  std::vector<std::vector<int>> gates_of(nc);
  for (int g = 0; g < kNumCycles; ++g) {
    const auto& m = model.gate_map()[static_cast<std::size_t>(g)];
    if (m.two_qubit >= 0) {
      gates_of[static_cast<std::size_t>(m.two_qubit)].push_back(g);
    } else {
      gates_of[static_cast<std::size_t>(m.q0)].push_back(g);
      gates_of[static_cast<std::size_t>(m.q1)].push_back(g);
      parent[root(static_cast<std::size_t>(m.q0))] = root(static_cast<std::size_t>(m.q1));
    }
  }
  struct Block {
    std::vector<int> rows;
    std::vector<int> cols;
  };
  std::map<std::size_t, Block> blocks;
  for (std::size_t k = 0; k < nc; ++k) {
    Block& b = blocks[root(k)];
    for (int i = 0; i < comps[k].size(); ++i) b.cols.push_back(comps[k].offset + i);
    for (int g : gates_of[k]) {
      for (int r = 0; r < kGateRows; ++r) b.rows.push_back(g * kGateRows + r);
    }
  }
  std::vector<Block> all;
  for (auto& [key, b] : blocks) {
    std::sort(b.rows.begin(), b.rows.end());
    b.rows.erase(std::unique(b.rows.begin(), b.rows.end()), b.rows.end());
    all.push_back(std::move(b));
  }
  {
    Block rho;
    for (int i = 0; i < kPrepParams; ++i) rho.cols.push_back(model.prep_offset() + i);
    for (int r = 0; r < 16; ++r) rho.rows.push_back(kRhoRow + r);
    all.push_back(std::move(rho));
    Block povm;
    for (int i = 0; i < kPovmParams; ++i) povm.cols.push_back(model.povm_offset() + i);
    for (int r = 0; r < 16 * kNumOutcomes; ++r) povm.rows.push_back(kEffRow + r);
    all.push_back(std::move(povm));
  }

  const double h = 1e-5;
  const double tol = 1e-6;
  const Vector base = flatten(ev);
  Eigen::Index model_rank = 0;
  // Gauge generators: X = E_ab with a >= 1 (trace preserving).
  Matrix jg(kVecRows, 240);
  {
    int col = 0;
    for (int a = 1; a < 16; ++a) {
      for (int b = 0; b < 16; ++b, ++col) {
        GateSetModel::Eval d;
        for (std::size_t g = 0; g < kNumCycles; ++g) {
          Mat16 x = Mat16::Zero();
          x(a, b) = 1.0;
          d.gates[g] = x * ev.gates[g] - ev.gates[g] * x;
        }
        d.rho = Vec16::Zero();
        d.rho(a) = ev.rho(b);
        for (std::size_t o = 0; o < kNumOutcomes; ++o) {
          d.effects[o] = Vec16::Zero();
          d.effects[o](b) = -ev.effects[o](a);
        }
        jg.col(col) = flatten(d);
      }
    }
  }
  Matrix residual = jg;
  for (const Block& b : all) {
    Matrix j(static_cast<Eigen::Index>(b.rows.size()), static_cast<Eigen::Index>(b.cols.size()));
    for (std::size_t c = 0; c < b.cols.size(); ++c) {
      Vector xp = x, xm = x;
      xp(b.cols[c]) += h;
      xm(b.cols[c]) -= h;
      GateSetModel::Eval ep, em;
      model.forward({xp.data(), static_cast<std::size_t>(xp.size())}, ep);
      model.forward({xm.data(), static_cast<std::size_t>(xm.size())}, em);
      const Vector diff = (flatten(ep) - flatten(em)) / (2.0 * h);
      for (std::size_t r = 0; r < b.rows.size(); ++r) {
        j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = diff(b.rows[r]);
      }
    }
    const Matrix q = column_basis(j, tol);
    model_rank += q.cols();
    Matrix sub(static_cast<Eigen::Index>(b.rows.size()), jg.cols());
    for (std::size_t r = 0; r < b.rows.size(); ++r) sub.row(static_cast<Eigen::Index>(r)) = jg.row(b.rows[r]);
    const Matrix proj = q * (q.transpose() * sub);
    for (std::size_t r = 0; r < b.rows.size(); ++r) {
      residual.row(b.rows[r]) -= proj.row(static_cast<Eigen::Index>(r));
    }
  }
  const Eigen::Index gauge_rank = numerical_rank(jg, tol);
  const Eigen::Index extra = numerical_rank(residual, tol);
  return static_cast<int>(model_rank + extra - gauge_rank);
}

}  // namespace

int nongauge_parameter_count(ModelFamily family) {
  static std::mutex mu;
  static std::map<ModelFamily, int> cache;
  const std::lock_guard<std::mutex> lock(mu);
  const auto it = cache.find(family);
  if (it != cache.end()) return it->second;
  const int n = compute_nongauge(family);
  cache.emplace(family, n);
  return n;
}

double gamma_statistic(const FitResult& small, const FitResult& large) {
  const int dn = large.n_params - small.n_params;
  if (dn <= 0) throw InvalidInput("gamma needs the larger model to have more parameters");
  return std::max(0.0, (small.lambda - large.lambda) / dn);
}

ModelSelection select_model(const std::vector<FitResult>& fits) {
  using F = ModelFamily;
  ModelSelection sel;
  const std::vector<std::vector<F>> branches{{F::CPTP, F::S, F::SCD, F::SCF},
                                             {F::CPTP, F::CD, F::CF, F::SCF}};
  std::vector<F> ends;
  for (const auto& branch : branches) {
    std::vector<F> path{branch.front()};
    for (std::size_t i = 1; i < branch.size(); ++i) {
      const FitResult& large = find_fit(fits, path.back());
      const FitResult& small = find_fit(fits, branch[i]);
      const double g = gamma_statistic(small, large);
      sel.gammas[std::string(family_name(large.family)) + ">" + family_name(small.family)] = g;
      if (g > 1.0) break;
      path.push_back(branch[i]);
    }
    ends.push_back(path.back());
    sel.branches.push_back(std::move(path));
  }
  const FitResult& a = find_fit(fits, ends[0]);
  const FitResult& b = find_fit(fits, ends[1]);
  if (a.n_params != b.n_params) {
    sel.chosen = a.n_params < b.n_params ? a.family : b.family;
  } else {
    sel.chosen = a.lambda <= b.lambda ? a.family : b.family;
  }
  return sel;
}

}  // namespace noise_tailor
