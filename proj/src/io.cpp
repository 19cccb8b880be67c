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

#include "noise_tailor/io.hpp"

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

namespace noise_tailor {

namespace {

Json vector_to_json(const Vector& v) {
  Json a = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vector vector_from_json(const Json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

std::string sequence_key(const std::vector<Layer>& layers) {
  std::string s;
  for (const Layer& l : layers) s += l.str();
  return s;
}

}  // namespace

std::string outcome_key(int outcome) {
  if (outcome < 0 || outcome >= kNumOutcomes) throw InvalidInput("outcome out of range");
  return std::string{static_cast<char>('0' + (outcome >> 1)), static_cast<char>('0' + (outcome & 1))};
}

Json superop_to_json(const SuperOp& op) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < op.dim(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < op.dim(); ++k) row.push_back(op.matrix()(i, k));
    rows.push_back(std::move(row));
  }
  return Json{{"n", op.num_qubits()}, {"basis", kPauliBasisTag}, {"rows", std::move(rows)}};
}

SuperOp superop_from_json(const Json& j) {
  if (j.value("basis", std::string(kPauliBasisTag)) != kPauliBasisTag) {
    throw InvalidInput("unsupported PTM basis tag");
  }
  const int n = j.at("n").get<int>();
  const auto& rows = j.at("rows");
  const auto d = static_cast<Eigen::Index>(1) << (2 * n);
  if (static_cast<Eigen::Index>(rows.size()) != d) throw DimensionMismatch("PTM row count");
  Matrix m(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const auto& row = rows[static_cast<std::size_t>(i)];
    if (static_cast<Eigen::Index>(row.size()) != d) throw DimensionMismatch("PTM row length");
    for (Eigen::Index k = 0; k < d; ++k) m(i, k) = row[static_cast<std::size_t>(k)].get<double>();
  }
  return SuperOp(n, std::move(m));
}

Json circuit_to_json(const Circuit& c) {
  Json layers = Json::array();
  for (const Layer& l : c.layers) layers.push_back(l.tokens());
  Json j{{"qubits", Json::array({0, 1})},
         {"layers", std::move(layers)},
         {"frame", Json{{"pauli", c.frame.str()}, {"flips", Json::array({c.flips[0], c.flips[1]})}}},
         {"provenance", Json{{"base", c.base_id.empty() ? c.id() : c.base_id}, {"r", c.randomization}}}};
  return j;
}

Circuit circuit_from_json(const Json& j) {
  Circuit c;
  for (const auto& layer : j.at("layers")) {
    c.layers.push_back(Layer::parse(layer.get<std::vector<std::string>>()));
  }
  if (j.contains("frame")) {
    const auto& f = j.at("frame");
    c.frame = PauliString::parse(f.value("pauli", std::string("II")));
    if (f.contains("flips")) {
      const auto flips = f.at("flips").get<std::vector<int>>();
      if (flips.size() != 2) throw InvalidInput("frame flips must have two entries");
      c.flips = {flips[0] & 1, flips[1] & 1};
    }
  }
  if (j.contains("provenance")) {
    c.base_id = j.at("provenance").value("base", std::string());
    c.randomization = j.at("provenance").value("r", -1);
  }
  if (c.base_id.empty()) c.base_id = c.id();
  return c;
}

Json circuits_to_json(const std::vector<Circuit>& circuits) {
  Json a = Json::array();
  for (const Circuit& c : circuits) a.push_back(circuit_to_json(c));
  return a;
}

std::vector<Circuit> circuits_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("circuit list must be a JSON array");
  std::vector<Circuit> out;
  for (const auto& c : j) out.push_back(circuit_from_json(c));
  return out;
}

Json suite_to_json(const CircuitSuite& suite) {
  Json a = Json::array();
  for (const Circuit& c : suite.circuits) {
    Json j = circuit_to_json(c);
    const CircuitStructure& s = c.structure;
    if (s.prep >= 0 && s.meas >= 0) {
      const auto plen = suite.prep_fiducials.at(static_cast<std::size_t>(s.prep)).size();
      const auto glen = s.germ >= 0 ? suite.germs.at(static_cast<std::size_t>(s.germ)).size() : 0;
      j["structure"] = Json{{"prep", s.prep}, {"prep_len", plen}, {"germ", s.germ},
                            {"germ_len", glen}, {"power", s.power}, {"meas", s.meas}};
    }
    a.push_back(std::move(j));
  }
  return a;
}

CircuitSuite suite_from_json(const Json& j) {
  if (!j.is_array()) throw InvalidInput("suite must be a JSON array");
  CircuitSuite suite;
  std::map<int, LayerSequence> preps, meas, germs;
  bool structured = true;
  for (const auto& cj : j) {
    Circuit c = circuit_from_json(cj);
    if (cj.contains("structure")) {
      const auto& s = cj.at("structure");
      c.structure = {s.at("prep").get<int>(), s.at("germ").get<int>(), s.at("power").get<int>(),
                     s.at("meas").get<int>()};
      const auto plen = s.at("prep_len").get<std::size_t>();
      const auto glen = s.at("germ_len").get<std::size_t>();
      const auto body = glen * static_cast<std::size_t>(std::max(0, c.structure.power));
      if (plen + body > c.layers.size()) throw InvalidInput("suite structure exceeds circuit length");
      const LayerSequence p(c.layers.begin(), c.layers.begin() + static_cast<std::ptrdiff_t>(plen));
      const LayerSequence m(c.layers.begin() + static_cast<std::ptrdiff_t>(plen + body), c.layers.end());
      auto check = [](std::map<int, LayerSequence>& table, int idx, const LayerSequence& seq) {
        const auto [it, inserted] = table.emplace(idx, seq);
        if (!inserted && sequence_key(it->second) != sequence_key(seq)) {
          throw InvalidInput("inconsistent suite structure");
        }
      };
      check(preps, c.structure.prep, p);
      check(meas, c.structure.meas, m);
      if (c.structure.germ >= 0) {
        const LayerSequence g(c.layers.begin() + static_cast<std::ptrdiff_t>(plen),
                              c.layers.begin() + static_cast<std::ptrdiff_t>(plen + glen));
        check(germs, c.structure.germ, g);
      }
    } else {
      structured = false;
    }
    suite.circuits.push_back(std::move(c));
  }
  auto dense = [&](const std::map<int, LayerSequence>& table, std::vector<LayerSequence>& out) {
    int expect = 0;
    for (const auto& [idx, seq] : table) {
      if (idx != expect++) return false;
      out.push_back(seq);
    }
    return true;
  };
  if (!structured || !dense(preps, suite.prep_fiducials) || !dense(meas, suite.meas_fiducials) ||
      !dense(germs, suite.germs)) {
    // Fall back to plain circuits.
    suite.prep_fiducials.clear();
    suite.meas_fiducials.clear();
    suite.germs.clear();
    for (Circuit& c : suite.circuits) c.structure = CircuitStructure{};
  }
  return suite;
}

Json dataset_to_json(const DataSet& ds) {
  Json j;
  j["_meta"] = Json{{"shots", ds.meta.shots},
                    {"randomizations", ds.meta.randomizations},
                    {"seed", ds.meta.seed},
                    {"scenario_hash", ds.meta.scenario_hash},
                    {"exact", ds.meta.exact}};
  for (std::size_t i = 0; i < ds.ids.size(); ++i) {
    Json counts;
    for (int o = 0; o < kNumOutcomes; ++o) {
      counts[outcome_key(o)] = ds.counts[i][static_cast<std::size_t>(o)];
    }
    j[ds.ids[i]] = std::move(counts);
  }
  return j;
}

DataSet dataset_from_json(const Json& j) {
  DataSet ds;
  if (j.contains("_meta")) {
    const auto& m = j.at("_meta");
    ds.meta.shots = m.value("shots", 0);
    ds.meta.randomizations = m.value("randomizations", 0);
    ds.meta.seed = m.value("seed", std::uint64_t{0});
    ds.meta.scenario_hash = m.value("scenario_hash", std::string());
    ds.meta.exact = m.value("exact", false);
  }
  for (const auto& [key, value] : j.items()) {
    if (key == "_meta") continue;
    Counts c{};
    for (int o = 0; o < kNumOutcomes; ++o) {
      const double v = value.value(outcome_key(o), 0.0);
      if (v < 0.0) throw InvalidInput("negative count for " + key);
      c[static_cast<std::size_t>(o)] = v;
    }
    ds.ids.push_back(key);
    ds.counts.push_back(c);
  }
  return ds;
}

Json spam_to_json(const Spam& spam) {
  Json effects = Json::array();
  for (const Vector& e : spam.effects) effects.push_back(vector_to_json(e));
  return Json{{"basis", kPauliBasisTag}, {"rho", vector_to_json(spam.rho)}, {"effects", effects}};
}

Json gateset_to_json(const GateSet& gs) {
  Json gates;
  for (int g = 0; g < kNumCycles; ++g) {
    gates[CycleLabel::from_index(g).name()] = superop_to_json(gs.gates[static_cast<std::size_t>(g)]);
  }
  return Json{{"gates", gates}, {"spam", spam_to_json(gs.spam)}};
}

GateSet gateset_from_json(const Json& j) {
  GateSet gs;
  for (int g = 0; g < kNumCycles; ++g) {
    gs.gates[static_cast<std::size_t>(g)] =
        superop_from_json(j.at("gates").at(CycleLabel::from_index(g).name()));
  }
  const auto& s = j.at("spam");
  gs.spam.rho = vector_from_json(s.at("rho"));
  const auto& e = s.at("effects");
  if (e.size() != kNumOutcomes) throw InvalidInput("SPAM needs four effects");
  for (std::size_t o = 0; o < kNumOutcomes; ++o) gs.spam.effects[o] = vector_from_json(e[o]);
  return gs;
}

Json fit_to_json(const FitResult& fit) {
  return Json{{"family", family_name(fit.family)},
              {"lambda", fit.lambda},
              {"n_max", fit.n_max},
              {"n_params", fit.n_params},
              {"n_params_structural", fit.n_params_structural},
              {"k", fit.k},
              {"n_sigma", fit.n_sigma},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"gateset", gateset_to_json(fit.gateset)}};
}

Json wildcard_to_json(const WildcardBudget& w) {
  Json gates;
  for (int g = 0; g < kNumCycles; ++g) {
    gates[CycleLabel::from_index(g).name()] = w.gates[static_cast<std::size_t>(g)];
  }
  return Json{{"gates", gates},
              {"spam", w.spam},
              {"total", w.total},
              {"active_constraints", w.active_constraints},
              {"violated_after", w.violated_after},
              {"max_tvd", w.max_tvd}};
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const std::string& path, const std::string& text) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << text;
  if (!out) throw Error("failed writing " + path);
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidInput(path + ": " + e.what());
  }
}

void write_json(const std::string& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

}  // namespace noise_tailor
