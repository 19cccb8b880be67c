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

// Command-line front end: one subcommand per pipeline stage plus the
// end-to-end driver and the oracle checklist.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>

#include "noise_tailor/cbcer.hpp"
#include "noise_tailor/gauge.hpp"
#include "noise_tailor/io.hpp"
#include "noise_tailor/pipeline.hpp"
#include "noise_tailor/rc.hpp"
#include "noise_tailor/report.hpp"
#include "noise_tailor/sim.hpp"
#include "noise_tailor/verify.hpp"
#include "noise_tailor/wildcard.hpp"

namespace nt = noise_tailor;

namespace {

struct Globals {
  std::uint64_t seed = 1;
  int threads = 0;
  std::string out;
  std::string config;
};

std::string out_path(const Globals& g, const std::string& fallback) {
  return g.out.empty() ? fallback : g.out;
}

nt::NoiseScenario scenario_from(const Globals& g, const std::string& scenario) {
  if (!scenario.empty()) return nt::NoiseScenario::load(scenario);
  if (!g.config.empty()) return nt::NoiseScenario::load(g.config);
  return nt::NoiseScenario{};
}

// Accepts a bare gate set, a fit bundle or a pipeline fit file.
nt::GateSet load_gateset(const std::string& path) {
  const nt::Json j = nt::read_json(path);
  if (j.contains("gates")) return nt::gateset_from_json(j);
  if (j.contains("gateset")) return nt::gateset_from_json(j.at("gateset"));
  if (j.contains("selection") && j.contains("fits")) {
    const std::string chosen = j.at("selection").at("chosen").get<std::string>();
    for (const auto& f : j.at("fits")) {
      if (f.at("family").get<std::string>() == chosen) return nt::gateset_from_json(f.at("gateset"));
    }
  }
  throw nt::InvalidInput(path + " holds no gate set");
}

nt::CbCycle cycle_from(const std::string& name, const nt::NoiseScenario& scen,
                       const std::string& rates) {
  if (name == "idle4") {
    // Weight-1 default map unless rates are given as "XIII=0.001,...".
    nt::Vector c = nt::Vector::Zero(256);
    if (rates.empty()) {
      for (int q = 0; q < 4; ++q) {
        c(static_cast<Eigen::Index>(nt::PauliString::single(4, q, nt::Pauli1::X).index())) = 0.0010 + 0.0002 * q;
        c(static_cast<Eigen::Index>(nt::PauliString::single(4, q, nt::Pauli1::Y).index())) = 0.0005;
        c(static_cast<Eigen::Index>(nt::PauliString::single(4, q, nt::Pauli1::Z).index())) = 0.0020 - 0.0003 * q;
      }
    } else {
      std::stringstream in(rates);
      std::string item;
      while (std::getline(in, item, ',')) {
        const auto eq = item.find('=');
        if (eq == std::string::npos) throw nt::InvalidInput("rate '" + item + "' is not P=value");
        const auto p = nt::PauliString::parse(item.substr(0, eq));
        if (p.num_qubits() != 4) throw nt::InvalidInput("idle4 rates need 4-qubit Paulis");
        c(static_cast<Eigen::Index>(p.index())) = std::stod(item.substr(eq + 1));
      }
    }
    c(0) = 1.0 - c.sum();
    return nt::CbCycle::pauli_idle(4, nt::error_probs_to_fidelities(c));
  }
  const std::string label = name == "idle" ? "I:I" : name;
  const int idx = nt::CycleLabel::parse(label).index();
  return nt::CbCycle::from_label(label, nt::build_error(scen, idx));
}

nt::Json decay_json(const std::vector<nt::DecayRecord>& records) {
  nt::Json a = nt::Json::array();
  for (const auto& r : records) {
    a.push_back(nt::Json{{"pauli", r.pauli.str()},
                         {"depths", r.depths},
                         {"expectations", r.expectations},
                         {"stderrs", r.stderrs},
                         {"amplitude", r.amplitude},
                         {"fidelity", r.fidelity},
                         {"fidelity_stderr", r.fidelity_stderr},
                         {"diverged", r.diverged}});
  }
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"noise-tailor: gate set tomography, randomized compiling and error metrics"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "Worker threads (0: NOISE_TAILOR_THREADS or 1)");
  app.add_option("--out", g.out, "Output file or directory");
  app.add_option("--config", g.config, "Pipeline or scenario config (TOML or JSON)");

  // gen-circuits
  auto* gen = app.add_subcommand("gen-circuits", "Generate the GST circuit suite");
  nt::SuiteOptions suite_opts;
  gen->add_option("--max-depth", suite_opts.max_depth, "Largest germ-power depth")->capture_default_str();
  gen->add_option("--pairs-per-germ", suite_opts.pairs_per_germ)->capture_default_str();

  // compile-rc
  auto* rc = app.add_subcommand("compile-rc", "Randomly compile every circuit of a suite");
  std::string rc_suite;
  int rc_n = 10;
  rc->add_option("--suite", rc_suite)->required();
  rc->add_option("-N,--randomizations", rc_n)->capture_default_str();

  // simulate
  auto* sim = app.add_subcommand("simulate", "Sample counts from a noise scenario");
  std::string sim_suite, sim_scenario;
  int sim_k = 1000, sim_n = 0;
  bool sim_exact = false;
  sim->add_option("--suite", sim_suite)->required();
  sim->add_option("--scenario", sim_scenario, "Scenario file (defaults to --config)");
  sim->add_option("-K,--shots", sim_k)->capture_default_str();
  sim->add_option("-N,--randomizations", sim_n, "0 runs the bare circuits")->capture_default_str();
  sim->add_flag("--exact", sim_exact, "Expected counts instead of samples");

  // fit
  auto* fit = app.add_subcommand("fit", "Maximum-likelihood fits and model selection");
  std::string fit_suite, fit_data, fit_family = "all";
  nt::FitOptions fit_opts;
  fit->add_option("--suite", fit_suite)->required();
  fit->add_option("--dataset", fit_data)->required();
  fit->add_option("--family", fit_family, "all, CPTP, S, CD, SCD, CF or SCF")->capture_default_str();
  fit->add_option("--restarts", fit_opts.restarts)->capture_default_str();
  fit->add_option("--max-iterations", fit_opts.max_iterations)->capture_default_str();

  // metrics
  auto* met = app.add_subcommand("metrics", "Gauge-aligned e_F, diamond distance and error budgets");
  std::string met_fit;
  double met_threshold = 0.01;
  met->add_option("--fit", met_fit, "Gate set or fit bundle JSON")->required();
  met->add_option("--threshold", met_threshold)->capture_default_str();

  // wildcard
  auto* wc = app.add_subcommand("wildcard", "Per-gate wildcard error budget");
  std::string wc_suite, wc_data, wc_fit;
  double wc_conf = 0.95;
  wc->add_option("--suite", wc_suite)->required();
  wc->add_option("--dataset", wc_data)->required();
  wc->add_option("--fit", wc_fit)->required();
  wc->add_option("--confidence", wc_conf)->capture_default_str();

  // cb and cer
  auto* cb = app.add_subcommand("cb", "Cycle benchmarking decays for one cycle");
  auto* cer = app.add_subcommand("cer", "Cycle error reconstruction for one cycle");
  std::string cycle = "CZ", cb_scenario, cb_rates;
  nt::CbOptions cb_opts;
  double cer_floor = 0.12;
  for (auto* sc : {cb, cer}) {
    sc->add_option("--cycle", cycle, "CZ, idle, g0:g1 or idle4")->capture_default_str();
    sc->add_option("--scenario", cb_scenario);
    sc->add_option("--rates", cb_rates, "idle4 error rates, e.g. XIII=0.001,ZZII=0.0002");
    sc->add_option("--depths", cb_opts.depths)->capture_default_str();
    sc->add_option("--shots", cb_opts.shots)->capture_default_str();
    sc->add_option("--randomizations", cb_opts.randomizations)->capture_default_str();
    sc->add_flag("--exact", cb_opts.exact);
  }
  cer->add_option("--floor", cer_floor, "Display floor as a fraction of the largest rate")->capture_default_str();

  // run
  auto* run = app.add_subcommand("run", "End-to-end pipeline from a config file");

  // verify
  auto* ver = app.add_subcommand("verify", "Oracle checklist");
  std::string fault;
  ver->add_option("--inject-fault", fault, "Test hook: sdp-tolerance")
      ->check(CLI::IsMember({"sdp-tolerance"}));

  CLI11_PARSE(app, argc, argv);
  const int threads = nt::resolve_threads(g.threads);

  try {
    if (*gen) {
      suite_opts.seed = g.seed;
      const auto suite = nt::generate_suite(suite_opts);
      nt::write_json(out_path(g, "suite.json"), nt::suite_to_json(suite));
      std::cout << suite.circuits.size() << " circuits, " << suite.germs.size() << " germs\n";
    } else if (*rc) {
      const auto suite = nt::suite_from_json(nt::read_json(rc_suite));
      std::vector<nt::Circuit> out;
      for (const auto& c : suite.circuits) {
        for (int r = 0; r < rc_n; ++r) out.push_back(nt::randomize_indexed(c, g.seed, r));
      }
      nt::write_json(out_path(g, "compiled.json"), nt::circuits_to_json(out));
      std::cout << out.size() << " randomized circuits\n";
    } else if (*sim) {
      const auto suite = nt::suite_from_json(nt::read_json(sim_suite));
      nt::ExperimentOptions eo;
      eo.plan = nt::plan_shots(sim_k, sim_n);
      eo.seed = g.seed;
      eo.threads = threads;
      eo.exact = sim_exact;
      const auto ds = nt::run_experiment(suite.circuits, scenario_from(g, sim_scenario), eo);
      nt::write_json(out_path(g, "dataset.json"), nt::dataset_to_json(ds));
      std::cout << ds.ids.size() << " circuits simulated\n";
    } else if (*fit) {
      const auto suite = nt::suite_from_json(nt::read_json(fit_suite));
      const auto ds = nt::dataset_from_json(nt::read_json(fit_data));
      const nt::Likelihood lik(suite, ds);
      fit_opts.seed = g.seed;
      const std::filesystem::path dir(out_path(g, "fit"));
      if (fit_family == "all") {
        const auto fits = nt::fit_all_families(lik, fit_opts);
        const auto sel = nt::select_model(fits);
        nt::Json all = nt::Json::array();
        for (const auto& f : fits) {
          all.push_back(nt::fit_to_json(f));
          std::cout << nt::family_name(f.family) << ": lambda " << f.lambda << ", k " << f.k
                    << ", N_sigma " << f.n_sigma << "\n";
        }
        nt::Json gammas = nt::Json::object();
        for (const auto& [pair, v] : sel.gammas) gammas[pair] = v;
        nt::write_json((dir / "fits.json").string(),
                       nt::Json{{"selection", nt::Json{{"chosen", nt::family_name(sel.chosen)},
                                                       {"gamma", gammas}}},
                                {"fits", all}});
        std::cout << "selected " << nt::family_name(sel.chosen) << "\n";
      } else {
        const auto f = nt::fit_model(lik, nt::parse_family(fit_family), fit_opts);
        nt::write_json((dir / (fit_family + ".json")).string(), nt::fit_to_json(f));
        std::cout << fit_family << ": lambda " << f.lambda << ", N_sigma " << f.n_sigma << "\n";
      }
    } else if (*met) {
      const auto aligned = nt::gauge_align(load_gateset(met_fit), nt::GateSet::ideal()).aligned;
      const auto ms = nt::gate_metrics(aligned, met_threshold);
      nt::CsvTable t({"module", "method", "gate", "metric", "value"});
      for (const auto& m : ms) {
        t.row({"superop", "process_fidelity", m.gate, "e_F", nt::fmt(m.e_f)});
        t.row({"diamond", nt::method_name(m.method), m.gate, "eps_diamond", nt::fmt(m.eps_diamond)});
        t.row({"errorgen", "error_budget", m.gate, "stochastic_fraction", nt::fmt(m.budget.stochastic_fraction)});
        t.row({"report", "threshold", m.gate, "above_threshold", m.above_threshold ? "1" : "0"});
      }
      if (g.out.empty()) std::cout << t.str();
      else nt::write_text(g.out, t.str());
    } else if (*wc) {
      const auto suite = nt::suite_from_json(nt::read_json(wc_suite));
      const auto ds = nt::dataset_from_json(nt::read_json(wc_data));
      const nt::Likelihood lik(suite, ds);
      nt::WildcardOptions wo;
      wo.confidence = wc_conf;
      const auto w = nt::wildcard_budget(lik, load_gateset(wc_fit), wo);
      if (g.out.empty()) std::cout << nt::wildcard_to_json(w).dump(2) << "\n";
      else nt::write_json(g.out, nt::wildcard_to_json(w));
    } else if (*cb || *cer) {
      cb_opts.seed = g.seed;
      const auto scen = scenario_from(g, cb_scenario);
      const auto records = nt::run_cb(cycle_from(cycle, scen, cb_rates), cb_opts);
      if (*cb) {
        const auto j = decay_json(records);
        if (g.out.empty()) std::cout << j.dump(2) << "\n";
        else nt::write_json(g.out, j);
      } else {
        const auto map = nt::reconstruct(records, 0.95, cer_floor);
        const std::filesystem::path dir(out_path(g, "cer"));
        nt::write_text((dir / "cer.csv").string(), nt::cer_csv(map));
        nt::Json probs = nt::Json::object();
        for (Eigen::Index i = 0; i < map.probs.size(); ++i) {
          probs[nt::PauliString::from_index(map.n, static_cast<std::size_t>(i)).str()] =
              nt::Json{{"p", map.probs(i)}, {"ci", map.ci_half_width(i)},
                       {"shown", static_cast<bool>(map.shown[static_cast<std::size_t>(i)])}};
        }
        nt::write_json((dir / "cer.json").string(),
                       nt::Json{{"n", map.n}, {"infidelity", map.infidelity},
                                {"infidelity_stderr", map.infidelity_stderr},
                                {"display_floor", map.display_floor},
                                {"unphysical", map.unphysical}, {"probs", probs}});
        std::cout << "infidelity " << map.infidelity << " +- " << map.infidelity_stderr << "\n";
      }
    } else if (*run) {
      if (g.config.empty()) throw nt::ConfigError("run needs --config");
      auto config = nt::PipelineConfig::load(g.config);
      if (!g.out.empty()) config.out_dir = g.out;
      if (app.get_option("--seed")->count() > 0) {
        config.seed = g.seed;
        config.suite.seed = g.seed;
        config.fit.seed = g.seed;
      }
      config.threads = threads;
      const auto report = nt::run_pipeline(config, std::cout);
      std::cout << "eps_diamond / e_F crossover: " << (report.crossover ? "yes" : "no") << "\n";
      for (const auto& note : report.crossover_notes) std::cout << "  " << note << "\n";
      std::cout << "outputs in " << config.out_dir << "\n";
    } else if (*ver) {
      nt::VerifyOptions vo;
      vo.seed = g.seed;
      if (fault == "sdp-tolerance") vo.sdp = nt::corrupted_sdp_options();
      bool ok = true;
      for (const auto& c : nt::run_verify(vo)) {
        std::cout << (c.passed ? "[PASS] " : "[FAIL] ") << c.name << ": " << c.detail << "\n";
        ok = ok && c.passed;
      }
      return ok ? 0 : 1;
    }
  } catch (const nt::InvariantViolation& e) {
    std::cerr << "invariant violation: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
