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

// Acceptance checks. Each criterion prints one PASS or FAIL line with the
// measured quantities; tolerances are fixed below. Run a single criterion
// with --criterion k.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "noise_tailor/cbcer.hpp"
#include "noise_tailor/circuit.hpp"
#include "noise_tailor/diamond.hpp"
#include "noise_tailor/gauge.hpp"
#include "noise_tailor/inference.hpp"
#include "noise_tailor/pipeline.hpp"
#include "noise_tailor/random.hpp"
#include "noise_tailor/rc.hpp"
#include "noise_tailor/report.hpp"
#include "noise_tailor/scenario.hpp"
#include "noise_tailor/sim.hpp"
#include "noise_tailor/wildcard.hpp"

namespace nt = noise_tailor;

namespace {

const std::string kSource = NOISE_TAILOR_SOURCE_DIR;

// Criterion 1
constexpr int kPauliChannels = 50;
constexpr double kPauliTol = 1e-6;
constexpr double kPauliSeconds = 60.0;
// Criterion 2
constexpr double kRotationTol = 1e-6;
constexpr double kAlgebraicTol = 1e-9;
constexpr int kRandomChannels = 200;
// Criterion 3
constexpr int kTwirlChannels = 50;
constexpr double kTwirlEntryTol = 1e-12;
constexpr double kTwirlDiamondTol = 1e-6;
// Criterion 4
constexpr double kWalkTheta = 0.1;
constexpr int kWalkRepeats = 64;
constexpr double kWalkSlope = -0.5;
constexpr double kWalkSlopeTol = 0.1;
constexpr double kWalkSeconds = 120.0;
// Criterion 5
constexpr int kRcCircuits = 200;
constexpr double kRcTol = 1e-12;
// Criterion 6
constexpr int kMleSeeds = 20;
constexpr int kMleDepth = 64;
constexpr int kMleShots = 1000;
constexpr double kMleSigmas = 3.0;
constexpr double kMleSelectFraction = 0.8;
// Criterion 7
constexpr int kDriftSeeds = 20;
constexpr int kDriftDepth = 2;
constexpr int kDriftShots = 1024;  // divisible by N = 16
constexpr int kDriftRandomizations = 16;
constexpr double kDriftOrderFraction = 0.9;
constexpr double kControlLow = -1.0;
constexpr double kControlHigh = 1.5;
// Criterion 8
constexpr int kWildcardShots = 1000;
constexpr double kWildcardRatio = 5.0;
constexpr double kWildcardMarkovMax = 1e-3;
// Criterion 9
constexpr double kZzTheta = 0.05;
constexpr double kZzTol = 0.1;
// Criterion 10
constexpr double kDemoSeconds = 600.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

nt::SuperOp rotation(int n, const char* axis, double theta) {
  const nt::complex i(0, 1);
  const auto p = nt::PauliString::parse(axis);
  const auto d = static_cast<Eigen::Index>(1) << n;
  const nt::CMatrix u = std::cos(theta / 2) * nt::CMatrix::Identity(d, d) -
                        i * std::sin(theta / 2) * p.matrix();
  return nt::ptm_from_unitary(u);
}

Outcome lower_bound_saturation() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  double worst_closed = 0.0;
  double worst_fid = 0.0;
  for (int n : {1, 2}) {
    for (int k = 0; k < kPauliChannels; ++k) {
      const auto c = nt::random_pauli_channel(n, rng, 0.2);
      const auto e = c.superop();
      const double eps = nt::diamond_distance(e, nt::SuperOp::identity(n)).value;
      const double closed = 1.0 - c.probs(0);
      const double e_f = nt::process_infidelity(e, nt::SuperOp::identity(n));
      worst_closed = std::max(worst_closed, std::abs(eps - closed));
      worst_fid = std::max(worst_fid, std::abs(eps - e_f));
    }
  }
  const double t = seconds_since(t0);
  return {worst_closed <= kPauliTol && worst_fid <= kPauliTol && t < kPauliSeconds,
          "max |eps - sum c_P| = " + num(worst_closed) + ", max |eps - e_F| = " +
              num(worst_fid) + ", " + num(t) + " s"};
}

Outcome upper_bound_regime() {
  double worst_sdp = 0.0;
  double worst_alg = 0.0;
  for (int k = 1; k <= 25; ++k) {
    const double theta = 0.02 * k;
    const auto e = rotation(1, "X", theta);
    const double eps = nt::diamond_distance(e, nt::SuperOp::identity(1)).value;
    const double e_f = nt::process_infidelity(e, nt::SuperOp::identity(1));
    worst_sdp = std::max(worst_sdp, std::abs(eps - std::sin(theta / 2)));
    worst_alg = std::max(worst_alg, std::abs(std::sqrt(e_f) - std::sin(theta / 2)));
  }
  std::mt19937_64 rng(202);
  int violations = 0;
  for (int k = 0; k < kRandomChannels; ++k) {
    const int n = k % 2 == 0 ? 1 : 2;
    const auto e = nt::random_cptp(n, 1 + k % 3, rng, 0.1);
    const double eps = nt::diamond_distance(e, nt::SuperOp::identity(n)).value;
    const double e_f = nt::process_infidelity(e, nt::SuperOp::identity(n));
    try {
      nt::check_bounds(e_f, eps, n, "random " + std::to_string(k), 1e-7);
    } catch (const nt::InvariantViolation&) {
      ++violations;
    }
  }
  return {worst_sdp <= kRotationTol && worst_alg <= kAlgebraicTol && violations == 0,
          "max |eps - sin(theta/2)| = " + num(worst_sdp) + ", max |sqrt(e_F) - sin(theta/2)| = " +
              num(worst_alg) + ", bound violations " + std::to_string(violations) + "/" +
              std::to_string(kRandomChannels)};
}

Outcome twirl_limit() {
  std::mt19937_64 rng(303);
  double off = 0.0;
  double diag = 0.0;
  double gap = 0.0;
  for (int k = 0; k < kTwirlChannels; ++k) {
    const auto e = nt::random_cptp(2, 1 + k % 4, rng, 0.2);
    const auto t = nt::pauli_twirl(e);
    nt::Matrix m = t.matrix();
    diag = std::max(diag, (m.diagonal() - e.matrix().diagonal()).cwiseAbs().maxCoeff());
    m.diagonal().setZero();
    off = std::max(off, m.cwiseAbs().maxCoeff());
    const double eps = nt::diamond_distance(t, nt::SuperOp::identity(2)).value;
    gap = std::max(gap, std::abs(eps - nt::process_infidelity(t, nt::SuperOp::identity(2))));
  }
  return {off < kTwirlEntryTol && diag < kTwirlEntryTol && gap <= kTwirlDiamondTol,
          "max off-diagonal " + num(off) + ", diagonal change " + num(diag) +
              ", max |eps - e_F| " + num(gap)};
}

Outcome random_walk_scaling() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto e = rotation(2, "XI", kWalkTheta);
  std::mt19937_64 rng(404);
  std::vector<double> xs;
  std::vector<double> ys;
  for (int n : {1, 4, 16, 64, 256, 1024}) {
    double sq = 0.0;
    for (int r = 0; r < kWalkRepeats; ++r) {
      const double m = nt::off_diagonal_mass(nt::sampled_twirl(e, n, rng));
      sq += m * m;
    }
    xs.push_back(std::log(n));
    ys.push_back(0.5 * std::log(sq / kWalkRepeats));
  }
  const auto k = static_cast<double>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
  const double t = seconds_since(t0);
  return {std::abs(slope - kWalkSlope) <= kWalkSlopeTol && t < kWalkSeconds,
          "slope " + num(slope) + ", " + num(t) + " s"};
}

Outcome rc_equivalence() {
  nt::SuiteOptions so;
  so.max_depth = 8;
  const auto suite = nt::generate_suite(so);
  const auto ideal = nt::GateSet::ideal();
  const std::size_t stride = std::max<std::size_t>(1, suite.circuits.size() / kRcCircuits);
  double worst = 0.0;
  int count = 0;
  for (std::size_t i = 0; i < suite.circuits.size() && count < kRcCircuits; i += stride, ++count) {
    const auto& base = suite.circuits[i];
    const auto p0 = nt::simulate_probs(base, ideal);
    const auto p1 = nt::simulate_probs(nt::randomize_indexed(base, 505, count), ideal);
    for (std::size_t o = 0; o < p0.size(); ++o) worst = std::max(worst, std::abs(p0[o] - p1[o]));
  }
  return {count == kRcCircuits && worst <= kRcTol,
          std::to_string(count) + " circuits, max |dp| = " + num(worst)};
}

struct MleSummary {
  bool pass = true;
  std::string detail;
};

MleSummary mle_recovery_on(const std::string& scenario_file, nt::ModelFamily expected) {
  const auto scen = nt::NoiseScenario::load(kSource + "/configs/scenarios/" + scenario_file);
  nt::SuiteOptions so;
  so.max_depth = kMleDepth;
  const auto suite = nt::generate_suite(so);
  const auto truth =
      nt::gate_metrics(nt::gauge_align(nt::build_gateset(scen), nt::GateSet::ideal()).aligned);
  std::vector<std::vector<double>> est(nt::kNumCycles);
  int selected = 0;
  for (int seed = 1; seed <= kMleSeeds; ++seed) {
    nt::ExperimentOptions eo;
    eo.plan = nt::plan_shots(kMleShots, 0);
    eo.seed = 1000 + static_cast<std::uint64_t>(seed);
    const auto ds = nt::run_experiment(suite.circuits, scen, eo);
    const nt::Likelihood lik(suite, ds);
    nt::FitOptions fo;
    fo.restarts = 0;
    fo.max_iterations = 3000;
    fo.seed = static_cast<std::uint64_t>(seed);
    const auto fits = nt::fit_all_families(lik, fo);
    const auto sel = nt::select_model(fits);
    if (sel.chosen == expected) ++selected;
    const auto aligned =
        nt::gauge_align(nt::find_fit(fits, sel.chosen).gateset, nt::GateSet::ideal()).aligned;
    const auto m = nt::gate_metrics(aligned);
    for (int g = 0; g < nt::kNumCycles; ++g) est[g].push_back(m[g].e_f);
  }
  MleSummary out;
  double worst = 0.0;
  int worst_gate = 0;
  double worst_bias = 0.0;
  for (int g = 0; g < nt::kNumCycles; ++g) {
    double mean = 0.0;
    for (double v : est[g]) mean += v;
    mean /= kMleSeeds;
    double var = 0.0;
    for (double v : est[g]) var += (v - mean) * (v - mean);
    const double sd = std::sqrt(var / (kMleSeeds - 1));
    const double z = std::abs(mean - truth[g].e_f) / sd;
    if (z > worst) {
      worst = z;
      worst_gate = g;
      worst_bias = mean / truth[g].e_f - 1.0;
    }
    if (!(z <= kMleSigmas)) out.pass = false;
  }
  const double frac = static_cast<double>(selected) / kMleSeeds;
  if (frac < kMleSelectFraction) out.pass = false;
  out.detail = scenario_file + ": max |mean - truth| / sd = " + num(worst) + " (" +
               truth[worst_gate].gate + ", relative bias " + num(worst_bias) + "), selected " +
               nt::family_name(expected) + " in " + std::to_string(selected) + "/" +
               std::to_string(kMleSeeds);
  return out;
}

Outcome mle_recovery() {
  const auto s = mle_recovery_on("markov_stochastic.toml", nt::ModelFamily::S);
  const auto c = mle_recovery_on("markov_coherent.toml", nt::ModelFamily::CPTP);
  return {s.pass && c.pass, s.detail + "; " + c.detail};
}

struct DriftFit {
  double n_sigma = 0.0;
  double max_wildcard = 0.0;
};

DriftFit drift_fit(const nt::CircuitSuite& suite, nt::NoiseScenario scen, double amplitude,
                   int shots, int randomizations, int seed, bool wildcard) {
  scen.drift.amplitude = amplitude;
  nt::ExperimentOptions eo;
  eo.plan = nt::plan_shots(shots, randomizations);
  eo.seed = static_cast<std::uint64_t>(seed);
  const auto ds = nt::run_experiment(suite.circuits, scen, eo);
  const nt::Likelihood lik(suite, ds);
  nt::FitOptions fo;
  fo.restarts = 0;
  fo.max_iterations = 3000;
  fo.seed = static_cast<std::uint64_t>(seed);
  const auto fit = nt::fit_model(lik, nt::ModelFamily::SCF, fo);
  DriftFit out{fit.n_sigma, 0.0};
  if (wildcard) out.max_wildcard = nt::wildcard_budget(lik, fit.gateset).max_gate();
  return out;
}

nt::CircuitSuite drift_suite() {
  nt::SuiteOptions so;
  so.max_depth = kDriftDepth;
  return nt::generate_suite(so);
}

nt::NoiseScenario drift_scenario() {
  return nt::NoiseScenario::load(kSource + "/configs/scenarios/drift.toml");
}

Outcome model_violation_direction() {
  const auto suite = drift_suite();
  const auto scen = drift_scenario();
  const double amplitude = scen.drift.amplitude;
  int ordered = 0;
  double control = 0.0;
  double off_mean = 0.0;
  double on_mean = 0.0;
  for (int seed = 1; seed <= kDriftSeeds; ++seed) {
    const auto off = drift_fit(suite, scen, amplitude, kDriftShots, 0, seed, false);
    const auto on =
        drift_fit(suite, scen, amplitude, kDriftShots, kDriftRandomizations, seed, false);
    const auto ctl = drift_fit(suite, scen, 0.0, kDriftShots, 0, seed, false);
    if (off.n_sigma > on.n_sigma) ++ordered;
    off_mean += off.n_sigma / kDriftSeeds;
    on_mean += on.n_sigma / kDriftSeeds;
    control += ctl.n_sigma / kDriftSeeds;
  }
  const double frac = static_cast<double>(ordered) / kDriftSeeds;
  return {frac >= kDriftOrderFraction && control >= kControlLow && control <= kControlHigh,
          "N_sigma(rc_off) > N_sigma(N=16) in " + std::to_string(ordered) + "/" +
              std::to_string(kDriftSeeds) + " (means " + num(off_mean) + ", " + num(on_mean) +
              "), amplitude-0 mean N_sigma " + num(control)};
}

Outcome wildcard_behavior() {
  const auto suite = drift_suite();
  const auto scen = drift_scenario();
  const auto drift = drift_fit(suite, scen, scen.drift.amplitude, kWildcardShots, 0, 1, true);
  const auto markov = drift_fit(suite, scen, 0.0, kWildcardShots, 0, 1, true);
  const bool ratio_ok = drift.max_wildcard >= kWildcardRatio * markov.max_wildcard;
  return {ratio_ok && markov.max_wildcard <= kWildcardMarkovMax,
          "drift max w_G " + num(drift.max_wildcard) + ", Markovian max w_G " +
              num(markov.max_wildcard)};
}

Outcome cer_round_trip() {
  std::mt19937_64 rng(909);
  std::ostringstream detail;
  bool pass = true;
  for (int n : {2, 4}) {
    const auto c = nt::random_pauli_channel(n, rng, 0.02);
    nt::CbOptions opts;
    opts.seed = 90 + static_cast<std::uint64_t>(n);
    const auto map = nt::reconstruct(nt::run_cb(nt::CbCycle::pauli_idle(n, c.fidelities()), opts));
    int outside = 0;
    for (Eigen::Index i = 0; i < c.probs.size(); ++i) {
      if (std::abs(map.probs(i) - c.probs(i)) > map.ci_half_width(i)) ++outside;
    }
    if (outside != 0) pass = false;
    detail << "n=" << n << " entries outside CI " << outside << "/" << c.probs.size() << "; ";
  }
  const auto zz = rotation(2, "ZZ", kZzTheta);
  nt::CbOptions opts;
  opts.exact = true;
  opts.randomizations = 200;
  const auto map = nt::reconstruct(nt::run_cb(nt::CbCycle::from_label("I:I", zz), opts));
  const double p = map.probs(static_cast<Eigen::Index>(nt::PauliString::parse("ZZ").index()));
  const double rel = p / (kZzTheta * kZzTheta / 4) - 1.0;
  if (std::abs(rel) > kZzTol) pass = false;
  detail << "ZZ rate / (theta^2/4) - 1 = " << num(rel);
  return {pass, detail.str()};
}

Outcome end_to_end_demo() {
  const auto t0 = std::chrono::steady_clock::now();
  auto config = nt::PipelineConfig::load(kSource + "/configs/paperlike.toml");
  const auto out = std::filesystem::temp_directory_path() / "noise_tailor_acceptance_demo";
  std::filesystem::remove_all(out);
  config.out_dir = out.string();
  std::ostringstream log;
  const auto report = nt::run_pipeline(config, log);
  const double t = seconds_since(t0);
  const bool figure = std::filesystem::exists(out / "figures" / "ratio_by_N.svg");
  std::string notes;
  for (const auto& s : report.crossover_notes) notes += "; " + s;
  return {t < kDemoSeconds && report.crossover && figure,
          num(t) + " s, crossover " + (report.crossover ? "yes" : "no") + ", figure " +
              (figure ? "written" : "missing") + notes};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise-tailor acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "Run one criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<std::function<Outcome()>> criteria{
      lower_bound_saturation, upper_bound_regime, twirl_limit,     random_walk_scaling,
      rc_equivalence,         mle_recovery,       model_violation_direction,
      wildcard_behavior,      cer_round_trip,     end_to_end_demo};
  bool all = true;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<std::size_t>(only) != k + 1) continue;
    Outcome o;
    try {
      o = criteria[k]();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    all = all && o.pass;
    std::cout << "criterion " << k + 1 << ": " << (o.pass ? "PASS" : "FAIL") << " " << o.detail
              << std::endl;
  }
  return all ? 0 : 1;
}
