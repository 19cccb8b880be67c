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

#include "noise_tailor/model.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/KroneckerProduct>

namespace noise_tailor {

namespace {

// Sparse form of conj(P_j) (x) P_i, one entry per row.
struct ChoiEntry {
  int row;
  int col;
  complex value;
};

struct ChoiTable {
  int d = 0;
  int dim = 0;  // d * d
  // entries[i * dim + j] holds the d*d entries of Q_ij.
  std::vector<std::vector<ChoiEntry>> entries;
};

const ChoiTable& choi_table(int n) {
  static const std::array<ChoiTable, 2> tables = [] {
    std::array<ChoiTable, 2> out;
    for (int k = 1; k <= 2; ++k) {
      ChoiTable& t = out[static_cast<std::size_t>(k - 1)];
      const auto& basis = pauli_basis(k);
      t.d = 1 << k;
      t.dim = t.d * t.d;
      t.entries.resize(static_cast<std::size_t>(t.dim * t.dim));
      for (int i = 0; i < t.dim; ++i) {
        for (int j = 0; j < t.dim; ++j) {
          const CMatrix q = Eigen::kroneckerProduct(
              basis[static_cast<std::size_t>(j)].conjugate().eval(),
              basis[static_cast<std::size_t>(i)]).eval();
          auto& list = t.entries[static_cast<std::size_t>(i * t.dim + j)];
          for (int r = 0; r < q.rows(); ++r) {
            for (int c = 0; c < q.cols(); ++c) {
              if (std::abs(q(r, c)) > 0.5) list.push_back({r, c, q(r, c)});
            }
          }
        }
      }
    }
    return out;
  }();
  if (n < 1 || n > 2) throw InvalidInput("Choi components support 1 or 2 qubits");
  return tables[static_cast<std::size_t>(n - 1)];
}

// PTM of the unnormalised Choi matrix j (Tr_out j = I for TP maps).
Matrix ptm_of_choi(const ChoiTable& t, const CMatrix& j) {
  Matrix out(t.dim, t.dim);
  const double inv_d = 1.0 / t.d;
  for (int a = 0; a < t.dim; ++a) {
    for (int b = 0; b < t.dim; ++b) {
      complex acc = 0.0;
      for (const ChoiEntry& e : t.entries[static_cast<std::size_t>(a * t.dim + b)]) {
        acc += e.value * j(e.col, e.row);
      }
      out(a, b) = acc.real() * inv_d;
    }
  }
  return out;
}

// Adjoint of ptm_of_choi: M with dF = Re Tr(M dJ).
CMatrix ptm_of_choi_adjoint(const ChoiTable& t, const Matrix& k) {
  CMatrix m = CMatrix::Zero(t.d * t.d, t.d * t.d);
  const double inv_d = 1.0 / t.d;
  for (int a = 0; a < t.dim; ++a) {
    for (int b = 0; b < t.dim; ++b) {
      const double w = k(a, b) * inv_d;
      if (w == 0.0) continue;
      for (const ChoiEntry& e : t.entries[static_cast<std::size_t>(a * t.dim + b)]) {
        m(e.row, e.col) += w * e.value;
      }
    }
  }
  return m;
}

CMatrix lower_from_params(int size, std::span<const double> p) {
  CMatrix a = CMatrix::Zero(size, size);
  std::size_t k = 0;
  for (int c = 0; c < size; ++c) {
    a(c, c) = p[k++];
    for (int r = c + 1; r < size; ++r) {
      a(r, c) = complex(p[k], p[k + 1]);
      k += 2;
    }
  }
  return a;
}

std::vector<double> params_from_lower(const CMatrix& a) {
  const auto size = static_cast<int>(a.rows());
  std::vector<double> p;
  p.reserve(static_cast<std::size_t>(size * size));
  for (int c = 0; c < size; ++c) {
    p.push_back(a(c, c).real());
    for (int r = c + 1; r < size; ++r) {
      p.push_back(a(r, c).real());
      p.push_back(a(r, c).imag());
    }
  }
  return p;
}

// Gradient of F with respect to the lower-triangular A, given the Hermitian
// K_C with dF = Re Tr(K_C d(AA^dagger)).
void lower_backward(const CMatrix& a, const CMatrix& kc, std::span<double> grad) {
  const CMatrix g = a.adjoint() * kc;
  const auto size = static_cast<int>(a.rows());
  std::size_t k = 0;
  for (int c = 0; c < size; ++c) {
    grad[k++] = 2.0 * g(c, c).real();
    for (int r = c + 1; r < size; ++r) {
      grad[k++] = 2.0 * g(c, r).real();
      grad[k++] = -2.0 * g(c, r).imag();
    }
  }
}

CMatrix partial_trace_out(const CMatrix& m, int d) {
  CMatrix t = CMatrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      for (int c = 0; c < d; ++c) t(a, b) += m(a * d + c, b * d + c);
    }
  }
  return t;
}

CMatrix kron_identity(const CMatrix& m, int d) {
  return Eigen::kroneckerProduct(m, CMatrix::Identity(d, d)).eval();
}

// Intermediates of the Choi map, recomputed in the backward pass.
struct ChoiForward {
  CMatrix a, c, q, n_half, ni, j;
  Vector t;
};

ChoiForward choi_forward(int n, std::span<const double> p) {
  const int d = 1 << n;
  ChoiForward f;
  f.a = lower_from_params(d * d, p);
  f.c = f.a * f.a.adjoint();
  const CMatrix tr = partial_trace_out(f.c, d);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(tr);
  f.q = es.eigenvectors();
  f.t = es.eigenvalues();
  const double floor = 1e-300;
  Vector inv_sqrt = f.t.unaryExpr([floor](double x) { return 1.0 / std::sqrt(std::max(x, floor)); });
  f.n_half = f.q * inv_sqrt.asDiagonal() * f.q.adjoint();
  f.ni = kron_identity(f.n_half, d);
  f.j = f.ni * f.c * f.ni;
  return f;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

int component_qubits(ComponentKind k) {
  return (k == ComponentKind::Choi2Q || k == ComponentKind::Stoch2Q) ? 2 : 1;
}

bool is_choi(ComponentKind k) {
  return k == ComponentKind::Choi2Q || k == ComponentKind::Choi1Q;
}

Mat16 kron4(const Matrix& a, const Matrix& b) {
  Mat16 out;
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) out.block<4, 4>(4 * i, 4 * j) = a(i, j) * b;
  }
  return out;
}

// Reduced single-qubit PTM of a two-qubit channel with the other qubit
// prepared maximally mixed and discarded.
Matrix reduced_ptm(const Matrix& m, int qubit) {
  Matrix r(4, 4);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      r(a, b) = qubit == 0 ? m(4 * a, 4 * b) : m(a, b);
    }
  }
  return r;
}

}  // namespace

const char* family_name(ModelFamily f) {
  switch (f) {
    case ModelFamily::CPTP: return "CPTP";
    case ModelFamily::S: return "S";
    case ModelFamily::CD: return "CD";
    case ModelFamily::SCD: return "SCD";
    case ModelFamily::CF: return "CF";
    case ModelFamily::SCF: return "SCF";
  }
  return "?";
}

ModelFamily parse_family(std::string_view s) {
  for (ModelFamily f : all_families()) {
    if (s == family_name(f)) return f;
  }
  throw InvalidInput("unknown model family: " + std::string(s));
}

const std::array<ModelFamily, 6>& all_families() {
  static const std::array<ModelFamily, 6> f{ModelFamily::CPTP, ModelFamily::S,
                                            ModelFamily::CD,   ModelFamily::SCD,
                                            ModelFamily::CF,   ModelFamily::SCF};
  return f;
}

bool nested_in(ModelFamily small, ModelFamily large) {
  using F = ModelFamily;
  if (small == large || large == F::CPTP) return true;
  switch (large) {
    case F::S: return small == F::SCD || small == F::SCF;
    case F::CD: return small == F::SCD || small == F::CF || small == F::SCF;
    case F::SCD: return small == F::SCF;
    case F::CF: return small == F::SCF;
    default: return false;
  }
}

int Component::size() const {
  switch (kind) {
    case ComponentKind::Choi2Q: return 256;
    case ComponentKind::Choi1Q: return 16;
    case ComponentKind::Stoch2Q: return 15;
    case ComponentKind::Stoch1Q: return 3;
  }
  return 0;
}

int Component::structural_size() const {
  switch (kind) {
    case ComponentKind::Choi2Q: return 240;
    case ComponentKind::Choi1Q: return 12;
    case ComponentKind::Stoch2Q: return 15;
    case ComponentKind::Stoch1Q: return 3;
  }
  return 0;
}

int Component::dim() const { return component_qubits(kind) == 2 ? 16 : 4; }

Matrix choi_component_ptm(int n, std::span<const double> a_params) {
  return ptm_of_choi(choi_table(n), choi_forward(n, a_params).j);
}

void choi_component_backward(int n, std::span<const double> p, const Matrix& dptm,
                             std::span<double> grad) {
  const ChoiTable& table = choi_table(n);
  const int d = table.d;
  const ChoiForward f = choi_forward(n, p);
  const CMatrix m = ptm_of_choi_adjoint(table, dptm);
  CMatrix kc = f.ni * m * f.ni;
  const CMatrix km = f.c * f.ni * m + m * f.ni * f.c;
  const CMatrix kn = hermitian_part(partial_trace_out(km, d));
  // Divided differences of x^(-1/2) in the eigenbasis of T.
  CMatrix b = f.q.adjoint() * kn * f.q;
  for (int k = 0; k < d; ++k) {
    for (int l = 0; l < d; ++l) {
      const double tk = f.t(k), tl = f.t(l);
      double delta;
      if (std::abs(tk - tl) <= 1e-12 * std::max(1.0, std::abs(tk))) {
        delta = -0.5 * std::pow(tk, -1.5);
      } else {
        delta = (1.0 / std::sqrt(tk) - 1.0 / std::sqrt(tl)) / (tk - tl);
      }
      b(k, l) *= delta;
    }
  }
  const CMatrix kt = f.q * b * f.q.adjoint();
  kc += kron_identity(kt, d);
  lower_backward(f.a, hermitian_part(kc), grad);
}

std::vector<double> choi_component_embed(int n, const Matrix& ptm, double regulariser) {
  const int d = 1 << n;
  const int dim = d * d;
  if (ptm.rows() != dim || ptm.cols() != dim) {
    throw DimensionMismatch("choi_component_embed: PTM size");
  }
  // Unnormalised Choi, mixed with the completely depolarising map.
  CMatrix j = d * to_choi(SuperOp(n, ptm)).c;
  j = hermitian_part(j);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(j);
  Vector ev = es.eigenvalues().cwiseMax(0.0);
  j = es.eigenvectors() * ev.cast<complex>().asDiagonal() * es.eigenvectors().adjoint();
  j = (1.0 - regulariser) * j +
      (regulariser / d) * CMatrix::Identity(dim, dim);
  Eigen::LLT<CMatrix> llt(hermitian_part(j));
  if (llt.info() != Eigen::Success) {
    throw InvariantViolation("Cholesky of regularised Choi matrix failed");
  }
  CMatrix a = llt.matrixL();
  // LLT gives a real positive diagonal already; normalise tiny phases.
  for (int i = 0; i < dim; ++i) a(i, i) = std::abs(a(i, i));
  return params_from_lower(a);
}

Matrix stochastic_component_ptm(int n, std::span<const double> s) {
  const int dim = 1 << (2 * n);
  if (static_cast<int>(s.size()) != dim - 1) {
    throw DimensionMismatch("stochastic component size");
  }
  double z = 1.0;
  for (double v : s) z += v * v;
  std::vector<double> c(static_cast<std::size_t>(dim));
  c[0] = 1.0 / z;
  for (int p = 1; p < dim; ++p) {
    const double v = s[static_cast<std::size_t>(p - 1)];
    c[static_cast<std::size_t>(p)] = v * v / z;
  }
  pauli_sign_transform(c);
  Matrix out = Matrix::Zero(dim, dim);
  for (int p = 0; p < dim; ++p) out(p, p) = c[static_cast<std::size_t>(p)];
  return out;
}

void stochastic_component_backward(int n, std::span<const double> s,
                                   const Matrix& dptm, std::span<double> grad) {
  const int dim = 1 << (2 * n);
  double z = 1.0;
  for (double v : s) z += v * v;
  std::vector<double> g(static_cast<std::size_t>(dim));
  for (int p = 0; p < dim; ++p) g[static_cast<std::size_t>(p)] = dptm(p, p);
  pauli_sign_transform(g);  // dF/dc, the transform being symmetric
  double mean = g[0] / z;
  for (int p = 1; p < dim; ++p) {
    const double v = s[static_cast<std::size_t>(p - 1)];
    mean += g[static_cast<std::size_t>(p)] * v * v / z;
  }
  for (int p = 1; p < dim; ++p) {
    const double v = s[static_cast<std::size_t>(p - 1)];
    grad[static_cast<std::size_t>(p - 1)] =
        2.0 * v / z * (g[static_cast<std::size_t>(p)] - mean);
  }
}

std::vector<double> stochastic_component_embed(int n, const Matrix& ptm) {
  const int dim = 1 << (2 * n);
  Vector f = ptm.diagonal();
  f(0) = 1.0;
  const ErrorProbabilities ep = fidelities_to_error_probs(f, 1.0);
  Vector c = ep.probs.cwiseMax(1e-10);
  std::vector<double> s(static_cast<std::size_t>(dim - 1));
  for (int p = 1; p < dim; ++p) {
    s[static_cast<std::size_t>(p - 1)] = std::sqrt(c(p) / c(0));
  }
  return s;
}

void GateSetModel::Adjoint::set_zero() {
  for (auto& g : gates) g.setZero();
  rho.setZero();
  for (auto& e : effects) e.setZero();
}

GateSetModel::GateSetModel(ModelFamily family) : family_(family) {
  using F = ModelFamily;
  const bool stochastic = family == F::S || family == F::SCD || family == F::SCF;
  const ComponentKind two = stochastic ? ComponentKind::Stoch2Q : ComponentKind::Choi2Q;
  const ComponentKind one = stochastic ? ComponentKind::Stoch1Q : ComponentKind::Choi1Q;
  int offset = 0;
  auto add = [&](ComponentKind k, std::string name) {
    Component c{k, offset, std::move(name)};
    offset += c.size();
    components_.push_back(std::move(c));
    return static_cast<int>(components_.size()) - 1;
  };
  if (family == F::CPTP || family == F::S) {
    for (int g = 0; g < kNumCycles; ++g) {
      gate_map_[static_cast<std::size_t>(g)].two_qubit =
          add(two, CycleLabel::from_index(g).name());
    }
  } else if (family == F::CD || family == F::SCD) {
    for (int g = 0; g < kCzCycle; ++g) {
      auto& m = gate_map_[static_cast<std::size_t>(g)];
      const std::string name = CycleLabel::from_index(g).name();
      m.q0 = add(one, name + "/q0");
      m.q1 = add(one, name + "/q1");
    }
    gate_map_[kCzCycle].two_qubit = add(two, "CZ");
  } else {
    std::array<std::array<int, 3>, 2> factor{};
    for (int q = 0; q < 2; ++q) {
      for (int h = 0; h < 3; ++h) {
        factor[static_cast<std::size_t>(q)][static_cast<std::size_t>(h)] =
            add(one, std::string(gate1_name(static_cast<Gate1>(h))) + "/q" +
                         std::to_string(q));
      }
    }
    for (int g = 0; g < kCzCycle; ++g) {
      const CycleLabel l = CycleLabel::from_index(g);
      auto& m = gate_map_[static_cast<std::size_t>(g)];
      m.q0 = factor[0][static_cast<std::size_t>(l.g0)];
      m.q1 = factor[1][static_cast<std::size_t>(l.g1)];
    }
    gate_map_[kCzCycle].two_qubit = add(two, "CZ");
  }
  prep_offset_ = offset;
  povm_offset_ = offset + kPrepParams;
  num_params_ = povm_offset_ + kPovmParams;
}

int GateSetModel::structural_param_count() const {
  int total = kSpamStructural;
  for (const Component& c : components_) total += c.structural_size();
  return total;
}

void GateSetModel::forward(std::span<const double> x, Eval& out) const {
  if (static_cast<int>(x.size()) != num_params_) {
    throw DimensionMismatch("model parameter vector size");
  }
  out.component_ptm.resize(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Component& c = components_[k];
    const auto slice = x.subspan(static_cast<std::size_t>(c.offset),
                                 static_cast<std::size_t>(c.size()));
    const int n = component_qubits(c.kind);
    out.component_ptm[k] = is_choi(c.kind) ? choi_component_ptm(n, slice)
                                           : stochastic_component_ptm(n, slice);
  }
  const auto& ideal = ideal_cycles();
  for (std::size_t g = 0; g < kNumCycles; ++g) {
    const GateMap& m = gate_map_[g];
    if (m.two_qubit >= 0) {
      out.errors[g] = out.component_ptm[static_cast<std::size_t>(m.two_qubit)];
    } else {
      out.errors[g] = kron4(out.component_ptm[static_cast<std::size_t>(m.q0)],
                            out.component_ptm[static_cast<std::size_t>(m.q1)]);
    }
    out.gates[g] = out.errors[g] * ideal[g].matrix();
  }
  // State.
  const auto prep = x.subspan(static_cast<std::size_t>(prep_offset_), kPrepParams);
  const CMatrix a = lower_from_params(4, prep);
  const CMatrix c = a * a.adjoint();
  const double t = c.trace().real();
  const auto& basis = pauli_basis(2);
  for (int p = 0; p < 16; ++p) {
    out.rho(p) = (basis[static_cast<std::size_t>(p)] * c).trace().real() / (4.0 * t);
  }
  // Effects.
  Vec16 last = Vec16::Zero();
  last(0) = 4.0;
  for (int o = 0; o < 3; ++o) {
    for (int p = 0; p < 16; ++p) {
      out.effects[static_cast<std::size_t>(o)](p) =
          x[static_cast<std::size_t>(povm_offset_ + 16 * o + p)];
    }
    last -= out.effects[static_cast<std::size_t>(o)];
  }
  out.effects[3] = last;
}

void GateSetModel::backward(std::span<const double> x, const Eval& ev,
                            const Adjoint& adj, std::span<double> grad) const {
  std::fill(grad.begin(), grad.end(), 0.0);
  const auto& ideal = ideal_cycles();
  std::vector<Matrix> dcomp(components_.size());
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const int dim = components_[k].dim();
    dcomp[k] = Matrix::Zero(dim, dim);
  }
  for (std::size_t g = 0; g < kNumCycles; ++g) {
    const Mat16 derr = adj.gates[g] * ideal[g].matrix().transpose();
    const GateMap& m = gate_map_[g];
    if (m.two_qubit >= 0) {
      dcomp[static_cast<std::size_t>(m.two_qubit)] += derr;
      continue;
    }
    const Matrix& a = ev.component_ptm[static_cast<std::size_t>(m.q0)];
    const Matrix& b = ev.component_ptm[static_cast<std::size_t>(m.q1)];
    Matrix& da = dcomp[static_cast<std::size_t>(m.q0)];
    Matrix& db = dcomp[static_cast<std::size_t>(m.q1)];
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const auto blk = derr.block<4, 4>(4 * i, 4 * j);
        da(i, j) += (blk.array() * b.array()).sum();
        db += a(i, j) * blk;
      }
    }
  }
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Component& c = components_[k];
    const auto off = static_cast<std::size_t>(c.offset);
    const auto len = static_cast<std::size_t>(c.size());
    const int n = component_qubits(c.kind);
    if (is_choi(c.kind)) {
      choi_component_backward(n, x.subspan(off, len), dcomp[k], grad.subspan(off, len));
    } else {
      stochastic_component_backward(n, x.subspan(off, len), dcomp[k],
                                    grad.subspan(off, len));
    }
  }
  // State: rho = C / Tr C with alpha_P = Re Tr(P rho) / 4.
  const auto prep = x.subspan(static_cast<std::size_t>(prep_offset_), kPrepParams);
  const CMatrix a = lower_from_params(4, prep);
  const CMatrix c = a * a.adjoint();
  const double t = c.trace().real();
  const auto& basis = pauli_basis(2);
  CMatrix mr = CMatrix::Zero(4, 4);
  for (int p = 0; p < 16; ++p) mr += (adj.rho(p) / 4.0) * basis[static_cast<std::size_t>(p)];
  const double mc = (mr * c).trace().real();
  const CMatrix kc = mr / t - (mc / (t * t)) * CMatrix::Identity(4, 4);
  lower_backward(a, hermitian_part(kc),
                 grad.subspan(static_cast<std::size_t>(prep_offset_), kPrepParams));
  for (int o = 0; o < 3; ++o) {
    const Vec16 ge = adj.effects[static_cast<std::size_t>(o)] - adj.effects[3];
    for (int p = 0; p < 16; ++p) {
      grad[static_cast<std::size_t>(povm_offset_ + 16 * o + p)] = ge(p);
    }
  }
}

GateSet GateSetModel::to_gateset(std::span<const double> x) const {
  Eval ev;
  forward(x, ev);
  GateSet gs;
  for (std::size_t g = 0; g < kNumCycles; ++g) gs.gates[g] = SuperOp(2, ev.gates[g]);
  gs.spam.rho = ev.rho;
  for (std::size_t o = 0; o < kNumOutcomes; ++o) gs.spam.effects[o] = ev.effects[o];
  return gs;
}

Vector GateSetModel::embed(const GateSet& gs, double regulariser) const {
  Vector x = Vector::Zero(num_params_);
  const auto& ideal = ideal_cycles();
  std::array<Matrix, kNumCycles> errors;
  for (std::size_t g = 0; g < kNumCycles; ++g) {
    errors[g] = gs.gates[g].matrix() * ideal[g].matrix().transpose();
  }
  // Single-qubit factors average the reduced channels of every cycle that
  // uses them.
  std::vector<Matrix> target(components_.size());
  std::vector<int> uses(components_.size(), 0);
  for (std::size_t g = 0; g < kNumCycles; ++g) {
    const GateMap& m = gate_map_[g];
    auto accumulate = [&](int k, const Matrix& v) {
      auto idx = static_cast<std::size_t>(k);
      if (uses[idx] == 0) target[idx] = v;
      else target[idx] += v;
      ++uses[idx];
    };
    if (m.two_qubit >= 0) {
      accumulate(m.two_qubit, errors[g]);
    } else {
      accumulate(m.q0, reduced_ptm(errors[g], 0));
      accumulate(m.q1, reduced_ptm(errors[g], 1));
    }
  }
  for (std::size_t k = 0; k < components_.size(); ++k) {
    const Component& c = components_[k];
    const Matrix t = target[k] / std::max(1, uses[k]);
    const int n = component_qubits(c.kind);
    const std::vector<double> p =
        is_choi(c.kind) ? choi_component_embed(n, t, regulariser)
                        : stochastic_component_embed(n, t);
    for (std::size_t i = 0; i < p.size(); ++i) {
      x(c.offset + static_cast<Eigen::Index>(i)) = p[i];
    }
  }
  // State: Cholesky of the (clipped, slightly mixed) density matrix.
  CMatrix rho = gs.spam.rho_matrix();
  rho = hermitian_part(rho);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(rho);
  Vector ev = es.eigenvalues().cwiseMax(0.0);
  rho = es.eigenvectors() * ev.cast<complex>().asDiagonal() * es.eigenvectors().adjoint();
  rho = (1.0 - 1e-6) * rho / rho.trace().real() + (1e-6 / 4.0) * CMatrix::Identity(4, 4);
  Eigen::LLT<CMatrix> llt(hermitian_part(rho));
  CMatrix a = llt.matrixL();
  for (int i = 0; i < 4; ++i) a(i, i) = std::abs(a(i, i));
  const auto pp = params_from_lower(a);
  for (std::size_t i = 0; i < pp.size(); ++i) {
    x(prep_offset_ + static_cast<Eigen::Index>(i)) = pp[i];
  }
  for (int o = 0; o < 3; ++o) {
    for (int p = 0; p < 16; ++p) {
      x(povm_offset_ + 16 * o + p) = gs.spam.effects[static_cast<std::size_t>(o)](p);
    }
  }
  return x;
}

}  // namespace noise_tailor
