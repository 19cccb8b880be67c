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

#include "noise_tailor/pipeline.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>
#include <set>

#include "noise_tailor/gauge.hpp"
#include "noise_tailor/io.hpp"
#include "noise_tailor/sim.hpp"

namespace noise_tailor {

namespace {

constexpr const char* kPipelineKeys[] = {
    "randomizations", "shots",     "seed",       "threads",        "exact",
    "max_depth",      "pairs_per_germ", "max_extra_germs", "restarts", "max_iterations",
    "threshold",      "wildcard_confidence", "figures", "out", "scenario"};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string pauli_label(int n, std::size_t i) { return PauliString::from_index(n, i).str(); }

// Runs one stage and prefixes any library error with the module name.
template <typename Fn>
auto stage(const char* module, Fn&& fn) {
  const std::string tag = std::string("[") + module + "] ";
  try {
    return fn();
  } catch (const InvariantViolation& e) {
    throw InvariantViolation(tag + e.what());
  } catch (const ConfigError& e) {
    throw ConfigError(tag + e.what());
  } catch (const Error& e) {
    throw Error(tag + e.what());
  }
}

}  // namespace

PipelineConfig PipelineConfig::from_json_text(const std::string& text) {
  Json root;
  try {
    root = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  PipelineConfig c;
  c.scenario = NoiseScenario::from_json_text(text);
  if (root.contains("pipeline")) {
    const Json& p = root.at("pipeline");
    for (const auto& [key, value] : p.items()) {
      if (std::find_if(std::begin(kPipelineKeys), std::end(kPipelineKeys),
                       [&](const char* k) { return key == k; }) == std::end(kPipelineKeys)) {
        throw ConfigError("unknown key [pipeline]." + key);
      }
    }
    try {
      if (p.contains("randomizations")) c.randomizations = p.at("randomizations").get<std::vector<int>>();
      c.shots = p.value("shots", c.shots);
      c.seed = p.value("seed", c.seed);
      c.threads = p.value("threads", c.threads);
      c.exact = p.value("exact", c.exact);
      c.suite.max_depth = p.value("max_depth", c.suite.max_depth);
      c.suite.pairs_per_germ = p.value("pairs_per_germ", c.suite.pairs_per_germ);
      c.suite.max_extra_germs = p.value("max_extra_germs", c.suite.max_extra_germs);
      c.fit.restarts = p.value("restarts", c.fit.restarts);
      c.fit.max_iterations = p.value("max_iterations", c.fit.max_iterations);
      c.threshold = p.value("threshold", c.threshold);
      c.wildcard_confidence = p.value("wildcard_confidence", c.wildcard_confidence);
      c.figures = p.value("figures", c.figures);
      c.out_dir = p.value("out", c.out_dir);
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError(std::string("bad [pipeline] value: ") + e.what());
    }
  }
  c.suite.seed = c.seed;
  c.fit.seed = c.seed;
  c.validate();
  return c;
}

PipelineConfig PipelineConfig::load(const std::string& path) {
  std::string text;
  try {
    text = read_text(path);
  } catch (const InvalidInput&) {
    throw ConfigError("cannot open config file " + path);
  }
  const bool is_toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  if (is_toml) text = toml_to_json(text);
  Json root = Json::parse(text);
  // A [pipeline] scenario key points to a separate scenario file.
  if (root.contains("pipeline") && root.at("pipeline").contains("scenario")) {
    const std::filesystem::path base = std::filesystem::path(path).parent_path();
    const std::string rel = root.at("pipeline").at("scenario").get<std::string>();
    const std::string scen_path = (base / rel).string();
    std::string scen = read_text(scen_path);
    if (scen_path.size() >= 5 && scen_path.substr(scen_path.size() - 5) == ".toml") {
      scen = toml_to_json(scen);
    }
    Json merged = Json::parse(scen);
    merged["pipeline"] = root.at("pipeline");
    return from_json_text(merged.dump());
  }
  return from_json_text(text);
}

void PipelineConfig::validate() const {
  if (shots <= 0) throw ConfigError("[pipeline].shots must be positive");
  if (randomizations.empty()) throw ConfigError("[pipeline].randomizations is empty");
  std::set<int> seen;
  for (int n : randomizations) {
    if (n < 0) throw ConfigError("negative randomization count");
    if (n > 0 && shots % n != 0) {
      throw ConfigError("randomization count " + std::to_string(n) + " does not divide K = " +
                        std::to_string(shots));
    }
    if (!seen.insert(n).second) throw ConfigError("duplicate randomization count");
  }
  if (suite.max_depth < 1) throw ConfigError("[pipeline].max_depth must be >= 1");
  if (threshold <= 0.0) throw ConfigError("[pipeline].threshold must be positive");
  if (wildcard_confidence <= 0.0 || wildcard_confidence >= 1.0) {
    throw ConfigError("[pipeline].wildcard_confidence must lie in (0, 1)");
  }
}

std::string PipelineConfig::canonical() const {
  // Output locations and thread counts do not change results.
  Json j;
  j["scenario"] = Json::parse(scenario.canonical());
  j["randomizations"] = randomizations;
  j["shots"] = shots;
  j["seed"] = seed;
  j["exact"] = exact;
  j["max_depth"] = suite.max_depth;
  j["pairs_per_germ"] = suite.pairs_per_germ;
  j["max_extra_germs"] = suite.max_extra_germs;
  j["restarts"] = fit.restarts;
  j["max_iterations"] = fit.max_iterations;
  j["threshold"] = threshold;
  j["wildcard_confidence"] = wildcard_confidence;
  return j.dump();
}

std::uint64_t PipelineConfig::hash() const { return fnv1a64(canonical()); }

bool check_crossover(const std::vector<PipelineRun>& runs, std::vector<std::string>* notes,
                     double tolerance) {
  std::vector<const PipelineRun*> sorted;
  for (const auto& r : runs) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const PipelineRun* a, const PipelineRun* b) { return a->randomizations < b->randomizations; });
  bool ok = !sorted.empty();
  for (int g = 0; g < kNumCycles; ++g) {
    const auto gi = static_cast<std::size_t>(g);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
      const double prev = sorted[i - 1]->metrics.at(gi).ratio;
      const double cur = sorted[i]->metrics.at(gi).ratio;
      if (cur > prev + tolerance) {
        ok = false;
        if (notes) {
          notes->push_back(sorted[i]->metrics[gi].gate + ": ratio rises from " + fmt(prev) +
                           " (N=" + std::to_string(sorted[i - 1]->randomizations) + ") to " +
                           fmt(cur) + " (N=" + std::to_string(sorted[i]->randomizations) + ")");
        }
      }
    }
    if (!sorted.empty()) {
      const double last = sorted.back()->metrics.at(gi).ratio;
      if (last > kCrossoverRatioLimit) {
        ok = false;
        if (notes) {
          notes->push_back(sorted.back()->metrics[gi].gate + ": ratio " + fmt(last) +
                           " exceeds " + fmt(kCrossoverRatioLimit) + " at the largest N");
        }
      }
    }
  }
  return ok;
}

PipelineReport run_pipeline(const PipelineConfig& config, std::ostream& log) {
  config.validate();
  namespace fs = std::filesystem;
  const fs::path out(config.out_dir);
  PipelineReport report;
  Json file_hashes = Json::object();
  auto emit = [&](const std::string& rel, const std::string& text) {
    write_text((out / rel).string(), text);
    file_hashes[rel] = hex64(fnv1a64(text));
    report.files.push_back(rel);
  };
  auto emit_json = [&](const std::string& rel, const Json& j) { emit(rel, j.dump(2) + "\n"); };

  const CircuitSuite suite = stage("circuits", [&] { return generate_suite(config.suite); });
  emit_json("circuits/suite.json", suite_to_json(suite));
  log << "suite: " << suite.circuits.size() << " circuits, " << suite.germs.size()
      << " germs, max depth " << config.suite.max_depth << "\n";

  const GateSet truth = stage("sim", [&] { return build_gateset(config.scenario); });
  report.truth = stage("diamond", [&] { return gate_metrics(truth, config.threshold); });

  std::vector<int> ns = config.randomizations;
  std::sort(ns.begin(), ns.end());
  for (int n : ns) {
    const std::string tag = "N" + std::to_string(n);
    ExperimentOptions eo;
    eo.plan = plan_shots(config.shots, n);
    eo.seed = config.seed;
    eo.threads = config.threads;
    eo.exact = config.exact;
    const DataSet ds =
        stage("sim", [&] { return run_experiment(suite.circuits, config.scenario, eo); });
    emit_json("datasets/" + tag + ".json", dataset_to_json(ds));

    PipelineRun run;
    run.randomizations = n;
    const Likelihood lik = stage("inference", [&] { return Likelihood(suite, ds); });
    run.fits = stage("inference", [&] { return fit_all_families(lik, config.fit); });
    run.selection = stage("inference", [&] { return select_model(run.fits); });
    run.selected = find_fit(run.fits, run.selection.chosen);
    run.aligned = stage("gauge", [&] { return gauge_align(run.selected.gateset, GateSet::ideal()).aligned; });
    run.metrics = stage("diamond", [&] { return gate_metrics(run.aligned, config.threshold); });
    WildcardOptions wo;
    wo.confidence = config.wildcard_confidence;
    run.wildcard = stage("wildcard", [&] { return wildcard_budget(lik, run.selected.gateset, wo); });
    log << tag << ": selected " << family_name(run.selection.chosen) << " (N_sigma "
        << fmt(run.selected.n_sigma) << "), max w_G " << fmt(run.wildcard.max_gate()) << "\n";

    Json fits = Json::array();
    for (const FitResult& f : run.fits) fits.push_back(fit_to_json(f));
    Json branches = Json::array();
    for (const auto& b : run.selection.branches) {
      Json path = Json::array();
      for (ModelFamily f : b) path.push_back(family_name(f));
      branches.push_back(path);
    }
    Json gammas = Json::object();
    for (const auto& [pair, g] : run.selection.gammas) gammas[pair] = g;
    emit_json("fits/" + tag + ".json",
              Json{{"randomizations", n},
                   {"selection", Json{{"chosen", family_name(run.selection.chosen)},
                                      {"branches", branches},
                                      {"gamma", gammas}}},
                   {"aligned", gateset_to_json(run.aligned)},
                   {"wildcard", wildcard_to_json(run.wildcard)},
                   {"fits", fits}});
    report.runs.push_back(std::move(run));
  }

  report.crossover = check_crossover(report.runs, &report.crossover_notes);

  // Tables. Each row names the module and method that produced its value.
  CsvTable gates({"module", "method", "N", "family", "gate", "metric", "value"});
  auto gate_rows = [&](const std::string& n, const std::string& family,
                       const std::vector<GateMetric>& ms, const WildcardBudget* w) {
    for (const GateMetric& m : ms) {
      gates.row({"superop", "process_fidelity", n, family, m.gate, "e_F", fmt(m.e_f)});
      gates.row({"diamond", method_name(m.method), n, family, m.gate, "eps_diamond", fmt(m.eps_diamond)});
      gates.row({"diamond", "check_bounds", n, family, m.gate, "ratio", fmt(m.ratio)});
      gates.row({"report", "threshold", n, family, m.gate, "above_threshold",
                 m.above_threshold ? "1" : "0"});
      if (m.generator_ok) {
        gates.row({"errorgen", "error_budget", n, family, m.gate, "eps_agg", fmt(m.budget.eps_agg)});
        gates.row({"errorgen", "error_budget", n, family, m.gate, "theta_agg", fmt(m.budget.theta_agg)});
        gates.row({"errorgen", "error_budget", n, family, m.gate, "eps_tot", fmt(m.budget.eps_tot)});
        gates.row({"errorgen", "error_budget", n, family, m.gate, "stochastic_fraction",
                   fmt(m.budget.stochastic_fraction)});
      }
      if (w) {
        gates.row({"wildcard", "lp", n, family, m.gate, "w_G",
                   fmt(w->gates[static_cast<std::size_t>(m.label)])});
      }
    }
  };
  gate_rows("-", "truth", report.truth, nullptr);
  for (const auto& r : report.runs) {
    gate_rows(std::to_string(r.randomizations), family_name(r.selection.chosen), r.metrics, &r.wildcard);
  }
  emit("metrics/gates.csv", gates.str());

  CsvTable models({"module", "method", "N", "family", "metric", "value"});
  for (const auto& r : report.runs) {
    const std::string n = std::to_string(r.randomizations);
    for (const FitResult& f : r.fits) {
      const std::string fam = family_name(f.family);
      models.row({"inference", "mle", n, fam, "lambda", fmt(f.lambda)});
      models.row({"inference", "nongauge_rank", n, fam, "N_p", std::to_string(f.n_params)});
      models.row({"inference", "mle", n, fam, "k", std::to_string(f.k)});
      models.row({"inference", "n_sigma", n, fam, "N_sigma", fmt(f.n_sigma)});
      models.row({"inference", "mle", n, fam, "converged", f.converged ? "1" : "0"});
    }
    for (const auto& [pair, g] : r.selection.gammas) {
      models.row({"inference", "evidence_ratio", n, pair, "gamma", fmt(g)});
    }
    models.row({"inference", "select_model", n, family_name(r.selection.chosen), "chosen", "1"});
    models.row({"wildcard", "lp", n, family_name(r.selection.chosen), "w_SPAM", fmt(r.wildcard.spam)});
  }
  emit("metrics/models.csv", models.str());

  CsvTable gens({"module", "method", "N", "gate", "kind", "pauli", "value"});
  CsvTable weights({"module", "method", "N", "gate", "kind", "qubits", "pauli", "value"});
  constexpr const char* kLetters = "IXYZ";
  auto weight_rows = [&](const std::string& n, const std::string& gate, const std::string& kind,
                         const WeightMap& w) {
    for (int q = 0; q < w.n; ++q) {
      for (int a = 1; a < 4; ++a) {
        weights.row({"errorgen", "weight_maps", n, gate, kind + "_w1", std::to_string(q),
                     std::string(1, kLetters[a]), fmt(w.marginal[static_cast<std::size_t>(q)][static_cast<std::size_t>(a)])});
      }
    }
    for (const auto& p : w.joint) {
      for (int a = 1; a < 4; ++a) {
        for (int b = 1; b < 4; ++b) {
          weights.row({"errorgen", "weight_maps", n, gate, kind + "_w2",
                       std::to_string(p.q0) + "-" + std::to_string(p.q1),
                       std::string{kLetters[a], kLetters[b]},
                       fmt(p.value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])});
        }
      }
    }
  };
  for (const auto& r : report.runs) {
    const std::string n = std::to_string(r.randomizations);
    for (const GateMetric& m : r.metrics) {
      if (!m.generator_ok) continue;
      for (std::size_t i = 1; i < 16; ++i) {
        gens.row({"errorgen", "project_hs", n, m.gate, "H", pauli_label(2, i), fmt(m.h(static_cast<Eigen::Index>(i)))});
        gens.row({"errorgen", "project_hs", n, m.gate, "S", pauli_label(2, i), fmt(m.s(static_cast<Eigen::Index>(i)))});
      }
      weight_rows(n, m.gate, "S", weight_maps(m.s));
      weight_rows(n, m.gate, "H", weight_maps(m.h.cwiseAbs()));
    }
  }
  emit("metrics/generators.csv", gens.str());
  emit("metrics/weights.csv", weights.str());

  CsvTable cross({"module", "method", "N", "gate", "metric", "value"});
  for (const auto& r : report.runs) {
    for (const GateMetric& m : r.metrics) {
      cross.row({"diamond", "check_bounds", std::to_string(r.randomizations), m.gate,
                 "eps_over_eF", fmt(m.ratio)});
    }
  }
  emit("metrics/crossover.csv", cross.str());

  if (config.figures) {
    std::vector<std::string> gate_names;
    for (int g = 0; g < kNumCycles; ++g) gate_names.push_back(CycleLabel::from_index(g).name());
    std::vector<std::string> paulis;
    for (std::size_t i = 1; i < 16; ++i) paulis.push_back(pauli_label(2, i));

    BarChart ratio{"eps_diamond / e_F per gate", "ratio", gate_names, {}, false, false, std::nullopt};
    BarChart budget{"stochastic fraction of the error budget", "eps_agg / eps_tot", gate_names, {}, false, false, std::nullopt};
    std::vector<std::string> fam_names;
    for (ModelFamily f : all_families()) fam_names.push_back(family_name(f));
    BarChart nsig{"model violation N_sigma", "N_sigma", fam_names, {}, false, false, std::nullopt};
    for (const auto& r : report.runs) {
      const std::string tag = "N" + std::to_string(r.randomizations);
      BarSeries rs{"N=" + std::to_string(r.randomizations), {}};
      BarSeries bs = rs;
      BarSeries ef{"e_F", {}}, eps{"eps_diamond", {}}, wild{"w_G", {}};
      Matrix hm(kNumCycles, 15), sm(kNumCycles, 15);
      for (const GateMetric& m : r.metrics) {
        rs.values.push_back(m.ratio);
        bs.values.push_back(m.budget.stochastic_fraction);
        ef.values.push_back(m.e_f);
        eps.values.push_back(m.eps_diamond);
        wild.values.push_back(r.wildcard.gates[static_cast<std::size_t>(m.label)]);
        for (int i = 1; i < 16; ++i) {
          hm(m.label, i - 1) = m.h(i);
          sm(m.label, i - 1) = m.s(i);
        }
      }
      ratio.series.push_back(rs);
      budget.series.push_back(bs);
      BarSeries ns{"N=" + std::to_string(r.randomizations), {}};
      for (ModelFamily f : all_families()) ns.values.push_back(find_fit(r.fits, f).n_sigma);
      nsig.series.push_back(ns);

      emit("figures/metrics_" + tag + ".svg",
           svg_bar_chart({"e_F and eps_diamond, " + tag + " (" + family_name(r.selection.chosen) + ")",
                          "error rate", gate_names, {ef, eps}, false, true, config.threshold}));
      emit("figures/wildcard_" + tag + ".svg",
           svg_bar_chart({"eps_diamond with wildcard on top, " + tag, "error rate", gate_names,
                          {eps, wild}, true, false, config.threshold}));
      emit("figures/hamiltonian_" + tag + ".svg",
           svg_heatmap({"Hamiltonian error rates, " + tag, gate_names, paulis, hm, true}));
      emit("figures/stochastic_" + tag + ".svg",
           svg_heatmap({"stochastic error rates, " + tag, gate_names, paulis, sm, true}));
      const WeightMap cz = weight_maps(r.metrics[kCzCycle].s);
      Matrix wm = Matrix::Zero(4, 4);
      for (int a = 1; a < 4; ++a) {
        wm(a, 0) = cz.marginal[0][static_cast<std::size_t>(a)];
        wm(0, a) = cz.marginal[1][static_cast<std::size_t>(a)];
        for (int b = 1; b < 4; ++b) {
          wm(a, b) = cz.joint.at(0).value[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        }
      }
      emit("figures/weights_CZ_" + tag + ".svg",
           svg_heatmap({"CZ stochastic weight map, " + tag + " (row q0, column q1)",
                        {"I", "X", "Y", "Z"}, {"I", "X", "Y", "Z"}, wm, false}));
    }
    emit("figures/ratio_by_N.svg", svg_bar_chart(ratio));
    emit("figures/stochastic_fraction.svg", svg_bar_chart(budget));
    emit("figures/model_violation.svg", svg_bar_chart(nsig));
  }

  Json runs = Json::array();
  for (const auto& r : report.runs) {
    runs.push_back(Json{{"N", r.randomizations},
                        {"selected", family_name(r.selection.chosen)},
                        {"n_sigma", r.selected.n_sigma},
                        {"max_wildcard", r.wildcard.max_gate()}});
  }
  Json manifest{{"tool", "noise-tailor"},
                {"version", kVersion},
                {"config_hash", hex64(config.hash())},
                {"scenario", config.scenario.name},
                {"scenario_hash", hex64(config.scenario.hash())},
                {"seed", config.seed},
                {"runs", runs},
                {"crossover", Json{{"ok", report.crossover}, {"notes", report.crossover_notes}}},
                {"files", file_hashes}};
  write_json((out / "manifest.json").string(), manifest);
  report.files.push_back("manifest.json");
  return report;
}

}  // namespace noise_tailor
