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

#include "noise_tailor/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include <json.hpp>
#include <toml.hpp>
#include <unsupported/Eigen/KroneckerProduct>

namespace noise_tailor {

namespace {

using nlohmann::json;

int parse_cycle(const std::string& s) {
  if (s == "idle") return CycleLabel{}.index();
  return CycleLabel::parse(s).index();
}

std::array<double, 2> pair_or_scalar(const json& j, const char* key) {
  if (!j.contains(key)) return {0.0, 0.0};
  const json& v = j.at(key);
  if (v.is_number()) return {v.get<double>(), v.get<double>()};
  if (v.is_array() && v.size() == 2) return {v[0].get<double>(), v[1].get<double>()};
  throw ConfigError(std::string("'") + key + "' must be a number or a pair");
}

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

GateErrorSpec parse_gate_spec(const json& j, const std::string& where) {
  check_keys(j, {"rotations", "zz", "pauli_rates", "amplitude_damping", "leakage"},
             where);
  if (j.contains("leakage")) {
    throw ConfigError("leakage is not supported (two-level simulation only)");
  }
  GateErrorSpec g;
  if (j.contains("rotations")) {
    for (const json& r : j.at("rotations")) {
      Rotation rot;
      rot.axis = PauliString::parse(r.at("axis").get<std::string>());
      if (rot.axis.num_qubits() != 2) throw ConfigError("rotation axis must have 2 qubits");
      rot.angle = r.at("angle").get<double>();
      g.rotations.push_back(rot);
    }
  }
  g.zz = j.value("zz", 0.0);
  if (j.contains("pauli_rates")) {
    for (const auto& [label, rate] : j.at("pauli_rates").items()) {
      const auto p = PauliString::parse(label);
      if (p.num_qubits() != 2 || p.is_identity()) {
        throw ConfigError("bad Pauli rate label '" + label + "'");
      }
      g.pauli_rates[p.label()] += rate.get<double>();
    }
  }
  g.amplitude_damping = pair_or_scalar(j, "amplitude_damping");
  return g;
}

json gate_spec_json(const GateErrorSpec& g) {
  json j;
  j["rotations"] = json::array();
  for (const Rotation& r : g.rotations) {
    j["rotations"].push_back({{"axis", r.axis.str()}, {"angle", r.angle}});
  }
  j["zz"] = g.zz;
  j["pauli_rates"] = g.pauli_rates;
  j["amplitude_damping"] = g.amplitude_damping;
  return j;
}

NoiseScenario from_json(const json& root) {
  check_keys(root, {"name", "defaults", "gates", "spam", "drift", "context", "pipeline"},
             "scenario");
  NoiseScenario s;
  s.name = root.value("name", std::string("unnamed"));
  if (root.contains("defaults")) s.defaults = parse_gate_spec(root.at("defaults"), "[defaults]");
  if (root.contains("gates")) {
    for (const auto& [label, spec] : root.at("gates").items()) {
      s.gates[parse_cycle(label)] = parse_gate_spec(spec, "[gates." + label + "]");
    }
  }
  if (root.contains("spam")) {
    const json& sp = root.at("spam");
    check_keys(sp, {"prep_flip", "eps01", "eps10"}, "[spam]");
    s.spam.prep_flip = pair_or_scalar(sp, "prep_flip");
    s.spam.eps01 = pair_or_scalar(sp, "eps01");
    s.spam.eps10 = pair_or_scalar(sp, "eps10");
  }
  if (root.contains("drift")) {
    const json& d = root.at("drift");
    check_keys(d, {"amplitude", "period", "theta0", "axis", "gates"}, "[drift]");
    s.drift.amplitude = d.value("amplitude", 0.0);
    s.drift.period = d.value("period", 100.0);
    s.drift.theta0 = d.value("theta0", 0.0);
    s.drift.axis = PauliString::parse(d.value("axis", std::string("XI")));
    if (s.drift.axis.num_qubits() != 2) throw ConfigError("drift axis must have 2 qubits");
    for (const json& g : d.value("gates", json::array())) {
      s.drift.gates.push_back(parse_cycle(g.get<std::string>()));
    }
    if (s.drift.period <= 0.0) throw ConfigError("drift period must be positive");
  }
  if (root.contains("context")) {
    const json& c = root.at("context");
    check_keys(c, {"angle", "axis", "partner"}, "[context]");
    s.context.angle = c.value("angle", 0.0);
    const auto axis = PauliString::parse(c.value("axis", std::string("Z")));
    if (axis.num_qubits() != 1) throw ConfigError("context axis is a single-qubit Pauli");
    s.context.axis = axis.factor(0);
    s.context.partner = parse_gate1(c.value("partner", std::string("X90")));
  }
  return s;
}

CMatrix rotation_unitary(const PauliString& axis, double angle) {
  const CMatrix p = axis.matrix();
  const Eigen::Index d = p.rows();
  return std::cos(angle / 2) * CMatrix::Identity(d, d) +
         complex(0.0, -std::sin(angle / 2)) * p;
}

CMatrix amplitude_damping_kraus(double gamma, int which) {
  CMatrix k = CMatrix::Zero(2, 2);
  if (which == 0) {
    k(0, 0) = 1.0;
    k(1, 1) = std::sqrt(1.0 - gamma);
  } else {
    k(0, 1) = std::sqrt(gamma);
  }
  return k;
}

void check_probability(double p, const std::string& what) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw ConfigError(what + " must lie in [0, 1]");
  }
}

}  // namespace

bool GateErrorSpec::is_zero() const {
  for (const Rotation& r : rotations) {
    if (r.angle != 0.0) return false;
  }
  for (const auto& [k, v] : pauli_rates) {
    if (v != 0.0) return false;
  }
  return zz == 0.0 && amplitude_damping[0] == 0.0 && amplitude_damping[1] == 0.0;
}

double DriftSpec::angle(std::int64_t index) const {
  return theta0 + amplitude * std::sin(2.0 * std::numbers::pi *
                                       static_cast<double>(index) / period);
}

const GateErrorSpec& NoiseScenario::spec_for(int label) const {
  if (auto it = gates.find(label); it != gates.end()) return it->second;
  return defaults;
}

NoiseScenario NoiseScenario::from_json_text(const std::string& text) {
  try {
    return from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw ConfigError(std::string("scenario JSON: ") + e.what());
  }
}

NoiseScenario NoiseScenario::from_toml_text(const std::string& text) {
  return from_json_text(toml_to_json(text));
}

NoiseScenario NoiseScenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open scenario file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const bool is_toml = path.size() >= 5 && path.substr(path.size() - 5) == ".toml";
  return is_toml ? from_toml_text(buf.str()) : from_json_text(buf.str());
}

std::string NoiseScenario::canonical() const {
  json j;
  j["name"] = name;
  j["defaults"] = gate_spec_json(defaults);
  j["gates"] = json::object();
  for (const auto& [label, spec] : gates) {
    j["gates"][CycleLabel::from_index(label).name()] = gate_spec_json(spec);
  }
  j["spam"] = {{"prep_flip", spam.prep_flip}, {"eps01", spam.eps01}, {"eps10", spam.eps10}};
  std::vector<std::string> drift_gates;
  for (int g : drift.gates) drift_gates.push_back(CycleLabel::from_index(g).name());
  j["drift"] = {{"amplitude", drift.amplitude}, {"period", drift.period},
                {"theta0", drift.theta0}, {"axis", drift.axis.str()},
                {"gates", drift_gates}};
  j["context"] = {{"angle", context.angle},
                  {"axis", std::string(1, pauli_char(context.axis))},
                  {"partner", gate1_name(context.partner)}};
  return j.dump();
}

std::uint64_t fnv1a64(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t NoiseScenario::hash() const { return fnv1a64(canonical()); }

std::string toml_to_json(const std::string& toml_text) {
  try {
    const toml::table tbl = toml::parse(toml_text);
    std::ostringstream out;
    out << toml::json_formatter{tbl};
    return out.str();
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << "TOML parse error: " << e.description() << " at line "
        << e.source().begin.line;
    throw ConfigError(msg.str());
  }
}

SuperOp build_error(const NoiseScenario& s, int label,
                    std::optional<std::int64_t> drift_index, bool verify) {
  const GateErrorSpec& spec = s.spec_for(label);
  const std::string name = CycleLabel::from_index(label).name();

  CMatrix u = CMatrix::Identity(4, 4);
  for (const Rotation& r : spec.rotations) u = rotation_unitary(r.axis, r.angle) * u;
  if (spec.zz != 0.0) u = rotation_unitary(PauliString::parse("ZZ"), spec.zz) * u;
  if (std::find(s.drift.gates.begin(), s.drift.gates.end(), label) != s.drift.gates.end()) {
    const double theta = drift_index ? s.drift.angle(*drift_index) : s.drift.theta0;
    u = rotation_unitary(s.drift.axis, theta) * u;
  }
  const CycleLabel cyc = CycleLabel::from_index(label);
  if (!cyc.cz && cyc.g1 == s.context.partner && s.context.angle != 0.0) {
    u = rotation_unitary(PauliString::single(2, 0, s.context.axis), s.context.angle) * u;
  }
  SuperOp err = ptm_from_unitary(u, 1e-9);

  const auto& ad = spec.amplitude_damping;
  if (ad[0] != 0.0 || ad[1] != 0.0) {
    check_probability(ad[0], "amplitude damping of " + name);
    check_probability(ad[1], "amplitude damping of " + name);
    std::vector<CMatrix> kraus;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        kraus.push_back(Eigen::kroneckerProduct(amplitude_damping_kraus(ad[0], a),
                                                amplitude_damping_kraus(ad[1], b))
                            .eval());
      }
    }
    err = compose(ptm_from_kraus(kraus), err);
  }

  if (!spec.pauli_rates.empty()) {
    PauliChannel pc = PauliChannel::identity(2);
    for (const auto& [lbl, rate] : spec.pauli_rates) {
      check_probability(rate, "Pauli rate " + lbl + " of " + name);
      pc.probs(static_cast<Eigen::Index>(PauliString::parse(lbl).index())) += rate;
      pc.probs(0) -= rate;
    }
    if (pc.probs(0) < 0.0) {
      throw InvariantViolation("Pauli rates of " + name + " exceed 1");
    }
    err = compose(pc.superop(), err);
  }

  if (verify && !is_cptp(err)) {
    throw InvariantViolation("error channel of gate " + name + " is not CPTP");
  }
  return err;
}

Spam build_spam(const SpamSpec& spec) {
  for (int q = 0; q < 2; ++q) {
    check_probability(spec.prep_flip[static_cast<std::size_t>(q)], "prep flip");
    check_probability(spec.eps01[static_cast<std::size_t>(q)], "readout eps01");
    check_probability(spec.eps10[static_cast<std::size_t>(q)], "readout eps10");
  }
  Spam s;
  // Single-qubit Pauli coordinates, indexed I, X, Y, Z.
  std::array<std::array<double, 4>, 2> rho{};
  std::array<std::array<std::array<double, 4>, 2>, 2> eff{};
  for (std::size_t q = 0; q < 2; ++q) {
    const double p = spec.prep_flip[q];
    rho[q] = {0.5, 0.0, 0.0, 0.5 * (1.0 - 2.0 * p)};
    // E_0 = (1 - eps01)|0><0| + eps10 |1><1|, E_1 = I - E_0.
    const double a = 1.0 - spec.eps01[q];
    const double b = spec.eps10[q];
    eff[q][0] = {a + b, 0.0, 0.0, a - b};
    eff[q][1] = {2.0 - a - b, 0.0, 0.0, b - a};
  }
  s.rho = Vector::Zero(16);
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) s.rho(4 * i + j) = rho[0][static_cast<std::size_t>(i)] * rho[1][static_cast<std::size_t>(j)];
  }
  for (int o = 0; o < kNumOutcomes; ++o) {
    const std::size_t b0 = static_cast<std::size_t>(o >> 1);
    const std::size_t b1 = static_cast<std::size_t>(o & 1);
    Vector e(16);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        e(4 * i + j) = eff[0][b0][static_cast<std::size_t>(i)] * eff[1][b1][static_cast<std::size_t>(j)];
      }
    }
    s.effects[static_cast<std::size_t>(o)] = e;
  }
  return s;
}

GateSet build_gateset(const NoiseScenario& s,
                      std::optional<std::int64_t> drift_index) {
  GateSet gs;
  const auto& ideal = ideal_cycles();
  for (int g = 0; g < kNumCycles; ++g) {
    gs.gates[static_cast<std::size_t>(g)] =
        compose(build_error(s, g, drift_index), ideal[static_cast<std::size_t>(g)]);
  }
  gs.spam = build_spam(s.spam);
  return gs;
}

}  // namespace noise_tailor
