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

#include "noise_tailor/circuit.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "noise_tailor/errorgen.hpp"

namespace noise_tailor {

namespace {

Pauli1 parse_pauli1(std::string_view s) {
  if (s == "I") return Pauli1::I;
  if (s == "X") return Pauli1::X;
  if (s == "Y") return Pauli1::Y;
  if (s == "Z") return Pauli1::Z;
  throw InvalidInput("bad frame Pauli '" + std::string(s) + "'");
}

QubitOp parse_qubit_op(const std::string& token) {
  const auto first = token.find('.');
  if (first == std::string::npos) return {parse_gate1(token), Pauli1::I, Pauli1::I};
  const auto second = token.find('.', first + 1);
  if (second == std::string::npos) {
    throw InvalidInput("dressed op '" + token + "' must be post.base.pre");
  }
  QubitOp op;
  op.post = parse_pauli1(std::string_view(token).substr(0, first));
  op.base = parse_gate1(
      std::string_view(token).substr(first + 1, second - first - 1));
  op.pre = parse_pauli1(std::string_view(token).substr(second + 1));
  return op;
}

std::string qubit_op_token(const QubitOp& op) {
  if (!op.dressed()) return gate1_name(op.base);
  return std::string(1, pauli_char(op.post)) + "." + gate1_name(op.base) +
         "." + pauli_char(op.pre);
}

std::vector<LayerSequence> two_qubit_fiducials(
    const std::vector<std::vector<Gate1>>& single) {
  std::vector<LayerSequence> out;
  for (const auto& f0 : single) {
    for (const auto& f1 : single) {
      const std::size_t len = std::max(f0.size(), f1.size());
      LayerSequence seq;
      for (std::size_t k = 0; k < len; ++k) {
        const Gate1 a = k < f0.size() ? f0[k] : Gate1::I;
        const Gate1 b = k < f1.size() ? f1[k] : Gate1::I;
        seq.push_back(Layer::from_label(CycleLabel{false, a, b}.index()));
      }
      out.push_back(std::move(seq));
    }
  }
  return out;
}

Matrix sequence_ptm(const LayerSequence& seq) {
  Matrix m = Matrix::Identity(16, 16);
  for (const Layer& l : seq) m = ideal_layer_ptm(l) * m;
  return m;
}

int numeric_rank(const Matrix& m, double rel_tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<Matrix> svd(m);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) == 0.0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > rel_tol * sv(0)) ++r;
  }
  return r;
}

// Error generators: 15 Hamiltonian then 15 stochastic per cycle.
const std::vector<Matrix>& generator_basis() {
  static const std::vector<Matrix> kBasis = [] {
    std::vector<Matrix> b;
    for (std::size_t p = 1; p < 16; ++p) {
      b.push_back(hamiltonian_generator(PauliString::from_index(2, p)));
    }
    for (std::size_t p = 1; p < 16; ++p) {
      b.push_back(stochastic_generator(PauliString::from_index(2, p)));
    }
    return b;
  }();
  return kBasis;
}

constexpr int kParamsPerCycle = 30;
constexpr int kJacobianCols = kParamsPerCycle * kNumCycles;

// Amplified Jacobian of one germ: derivative of the germ PTM projected onto
// the commutant of the ideal germ, one row per PTM entry.
Matrix germ_jacobian(const LayerSequence& germ) {
  const auto& ideal = ideal_cycles();
  const Matrix g = sequence_ptm(germ);

  // Projector onto the commutant of g, averaged over the cyclic group.
  std::vector<Matrix> powers{Matrix::Identity(16, 16)};
  while (true) {
    Matrix next = g * powers.back();
    if ((next - Matrix::Identity(16, 16)).cwiseAbs().maxCoeff() < 1e-9) break;
    powers.push_back(std::move(next));
    if (powers.size() > 512) throw InvariantViolation("germ has no finite order");
  }

  Matrix jac = Matrix::Zero(256, kJacobianCols);
  const auto& basis = generator_basis();
  const std::size_t m = germ.size();
  for (std::size_t k = 0; k < m; ++k) {
    const int label = germ[k].label();
    const Matrix before = sequence_ptm(LayerSequence(germ.begin(), germ.begin() + static_cast<long>(k)));
    const Matrix after =
        sequence_ptm(LayerSequence(germ.begin() + static_cast<long>(k) + 1, germ.end()));
    const Matrix& g0 = ideal[static_cast<std::size_t>(label)].matrix();
    for (int q = 0; q < kParamsPerCycle; ++q) {
      const Matrix d = after * basis[static_cast<std::size_t>(q)] * g0 * before;
      Matrix proj = Matrix::Zero(16, 16);
      for (const Matrix& pw : powers) proj += pw * d * pw.transpose();
      proj /= static_cast<double>(powers.size());
      jac.col(label * kParamsPerCycle + q) +=
          Eigen::Map<const Vector>(proj.data(), 256);
    }
  }
  return jac;
}

// Orthonormal basis of the row space of a Jacobian, as columns.
Matrix row_space(const Matrix& jac) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(jac.transpose() * jac);
  const Vector& ev = es.eigenvalues();
  const double top = ev.maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < ev.size(); ++i) {
    if (top > 0.0 && ev(i) > 1e-12 * top) keep.push_back(i);
  }
  Matrix q(jac.cols(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) {
    q.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
  }
  return q;
}

int added_rank(const Matrix& current, const Matrix& candidate) {
  Matrix residual = candidate;
  if (current.cols() > 0) {
    residual -= current * (current.transpose() * candidate);
  }
  // Columns of both inputs are orthonormal, so an absolute cut is meaningful.
  Eigen::JacobiSVD<Matrix> svd(residual);
  const auto& sv = svd.singularValues();
  return static_cast<int>((sv.array() > 1e-6).count());
}

Matrix append_basis(const Matrix& current, const Matrix& candidate) {
  Matrix stacked(candidate.rows(), current.cols() + candidate.cols());
  stacked << current, candidate;
  Eigen::JacobiSVD<Matrix> svd(stacked, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  Eigen::Index r = 0;
  while (r < sv.size() && sv(r) > 1e-6 * sv(0)) ++r;
  return svd.matrixU().leftCols(r);
}

}  // namespace

Layer Layer::from_label(int label) {
  const CycleLabel c = CycleLabel::from_index(label);
  Layer l;
  l.cz = c.cz;
  if (!c.cz) {
    l.ops[0].base = c.g0;
    l.ops[1].base = c.g1;
  }
  return l;
}

Layer Layer::parse(const std::vector<std::string>& tokens) {
  if (tokens.size() == 1 && tokens[0] == "CZ") return from_label(kCzCycle);
  if (tokens.size() != 2) {
    throw InvalidInput("layer must be [\"CZ\"] or two single-qubit ops");
  }
  Layer l;
  l.ops[0] = parse_qubit_op(tokens[0]);
  l.ops[1] = parse_qubit_op(tokens[1]);
  return l;
}

int Layer::label() const {
  if (cz) return kCzCycle;
  return CycleLabel{false, ops[0].base, ops[1].base}.index();
}

std::vector<std::string> Layer::tokens() const {
  if (cz) return {"CZ"};
  return {qubit_op_token(ops[0]), qubit_op_token(ops[1])};
}

std::string Layer::str() const {
  const auto t = tokens();
  std::string s = "[" + t[0];
  for (std::size_t i = 1; i < t.size(); ++i) s += "," + t[i];
  return s + "]";
}

std::string Circuit::id() const {
  if (layers.empty()) return "{}";
  std::string s;
  for (const Layer& l : layers) s += l.str();
  return s;
}

Matrix ideal_layer_ptm(const Layer& layer) {
  const Matrix& g0 = ideal_cycles()[static_cast<std::size_t>(layer.label())].matrix();
  if (!layer.dressed()) return g0;
  PauliString post(2), pre(2);
  for (int q = 0; q < 2; ++q) {
    post.set_factor(q, layer.ops[static_cast<std::size_t>(q)].post);
    pre.set_factor(q, layer.ops[static_cast<std::size_t>(q)].pre);
  }
  return pauli_conjugation_diagonal(post).asDiagonal() * g0 *
         pauli_conjugation_diagonal(pre).asDiagonal();
}

std::vector<LayerSequence> prep_fiducials() {
  return two_qubit_fiducials(
      {{}, {Gate1::X90}, {Gate1::Y90}, {Gate1::X90, Gate1::X90}});
}

std::vector<LayerSequence> meas_fiducials() {
  return two_qubit_fiducials({{}, {Gate1::X90}, {Gate1::Y90}});
}

int prep_frame_rank(const std::vector<LayerSequence>& fids) {
  const Spam spam = Spam::ideal();
  Matrix m(16, static_cast<Eigen::Index>(fids.size()));
  for (std::size_t i = 0; i < fids.size(); ++i) {
    m.col(static_cast<Eigen::Index>(i)) = sequence_ptm(fids[i]) * spam.rho;
  }
  return numeric_rank(m, 1e-10);
}

int meas_frame_rank(const std::vector<LayerSequence>& fids) {
  const Spam spam = Spam::ideal();
  Matrix m(static_cast<Eigen::Index>(fids.size() * kNumOutcomes), 16);
  for (std::size_t i = 0; i < fids.size(); ++i) {
    const Matrix f = sequence_ptm(fids[i]);
    for (int o = 0; o < kNumOutcomes; ++o) {
      m.row(static_cast<Eigen::Index>(i * kNumOutcomes + static_cast<std::size_t>(o))) =
          spam.effects[static_cast<std::size_t>(o)].transpose() * f;
    }
  }
  return numeric_rank(m, 1e-10);
}

int germ_amplification_rank(const std::vector<LayerSequence>& germs) {
  Matrix basis(kJacobianCols, 0);
  for (const auto& g : germs) basis = append_basis(basis, row_space(germ_jacobian(g)));
  return static_cast<int>(basis.cols());
}

std::vector<LayerSequence> select_germs(int max_extra) {
  static std::mutex mu;
  static std::map<int, std::vector<LayerSequence>> cache;
  const std::lock_guard<std::mutex> lock(mu);
  if (auto it = cache.find(max_extra); it != cache.end()) return it->second;

  std::vector<LayerSequence> germs;
  Matrix basis(kJacobianCols, 0);
  for (int a = 0; a < kNumCycles; ++a) {
    germs.push_back({Layer::from_label(a)});
    basis = append_basis(basis, row_space(germ_jacobian(germs.back())));
  }
  // Ordered pairs a < b; (b, a) is a cyclic rotation with the same
  // amplified directions.
  std::vector<std::pair<LayerSequence, Matrix>> candidates;
  for (int a = 0; a < kNumCycles; ++a) {
    for (int b = a + 1; b < kNumCycles; ++b) {
      LayerSequence g{Layer::from_label(a), Layer::from_label(b)};
      Matrix rs = row_space(germ_jacobian(g));
      candidates.emplace_back(std::move(g), std::move(rs));
    }
  }
  for (int round = 0; round < max_extra; ++round) {
    int best = -1;
    int best_gain = 0;
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      const int gain = added_rank(basis, candidates[i].second);
      if (gain > best_gain) {
        best_gain = gain;
        best = static_cast<int>(i);
      }
    }
    if (best < 0) break;
    germs.push_back(candidates[static_cast<std::size_t>(best)].first);
    basis = append_basis(basis, candidates[static_cast<std::size_t>(best)].second);
    candidates.erase(candidates.begin() + best);
  }
  cache[max_extra] = germs;
  return germs;
}

CircuitSuite generate_suite(const SuiteOptions& options) {
  if (options.max_depth < 1 ||
      (options.max_depth & (options.max_depth - 1)) != 0) {
    throw InvalidInput("max depth must be a power of two");
  }
  if (options.pairs_per_germ < 1) throw InvalidInput("pairs_per_germ must be positive");
  CircuitSuite suite;
  suite.options = options;
  suite.prep_fiducials = prep_fiducials();
  suite.meas_fiducials = meas_fiducials();
  if (prep_frame_rank(suite.prep_fiducials) != 16 ||
      meas_frame_rank(suite.meas_fiducials) != 16) {
    throw InvariantViolation("fiducials are not informationally complete");
  }
  suite.germs = select_germs(options.max_extra_germs);
  for (int l = 1; l <= options.max_depth; l *= 2) suite.depths.push_back(l);

  const int np = static_cast<int>(suite.prep_fiducials.size());
  const int nm = static_cast<int>(suite.meas_fiducials.size());
  const int all_pairs = np * nm;
  std::set<std::string> seen;

  auto add = [&](int prep, int germ, int power, int meas) {
    Circuit c;
    c.structure = {prep, germ, power, meas};
    const auto& pf = suite.prep_fiducials[static_cast<std::size_t>(prep)];
    c.layers.insert(c.layers.end(), pf.begin(), pf.end());
    if (germ >= 0) {
      const auto& g = suite.germs[static_cast<std::size_t>(germ)];
      for (int k = 0; k < power; ++k) c.layers.insert(c.layers.end(), g.begin(), g.end());
    }
    const auto& mf = suite.meas_fiducials[static_cast<std::size_t>(meas)];
    c.layers.insert(c.layers.end(), mf.begin(), mf.end());
    c.base_id = c.id();
    if (seen.insert(c.base_id).second) suite.circuits.push_back(std::move(c));
  };

  for (int p = 0; p < np; ++p) {
    for (int m = 0; m < nm; ++m) add(p, -1, 0, m);
  }
  // Per-germ fiducial-pair subsets, fixed across depths.
  std::vector<std::vector<int>> subsets;
  for (std::size_t g = 0; g < suite.germs.size(); ++g) {
    std::vector<int> idx(static_cast<std::size_t>(all_pairs));
    std::iota(idx.begin(), idx.end(), 0);
    std::mt19937_64 rng(derive_seed(options.seed, "fiducial-pairs",
                                    static_cast<std::int64_t>(g)));
    std::shuffle(idx.begin(), idx.end(), rng);
    idx.resize(static_cast<std::size_t>(std::min(options.pairs_per_germ, all_pairs)));
    std::sort(idx.begin(), idx.end());
    subsets.push_back(std::move(idx));
  }
  for (int depth : suite.depths) {
    for (std::size_t g = 0; g < suite.germs.size(); ++g) {
      const int len = static_cast<int>(suite.germs[g].size());
      const int power = depth / len;
      if (power == 0) continue;
      if (depth == 1 && len == 1) {
        for (int k = 0; k < all_pairs; ++k) add(k / nm, static_cast<int>(g), power, k % nm);
      } else {
        for (int k : subsets[g]) add(k / nm, static_cast<int>(g), power, k % nm);
      }
    }
  }
  return suite;
}

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t master, const std::string& key,
                          std::int64_t index) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return mix64(mix64(master) ^ mix64(h) ^
               mix64(static_cast<std::uint64_t>(index) + 0x632be59bd9b4e019ULL));
}

}  // namespace noise_tailor
