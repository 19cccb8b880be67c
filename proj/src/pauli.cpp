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

#include "noise_tailor/pauli.hpp"

#include <array>
#include <bit>
#include <cmath>

namespace noise_tailor {

namespace {

// (x, z) bits of I, X, Y, Z.
constexpr std::array<std::uint8_t, 4> kXBit{0, 1, 1, 0};
constexpr std::array<std::uint8_t, 4> kZBit{0, 0, 1, 1};

// Exponent of i in sigma_a * sigma_b for single-qubit Paulis.
constexpr std::array<std::array<int, 4>, 4> kProductPhase{{
    {0, 0, 0, 0},
    {0, 0, 1, 3},
    {0, 3, 0, 1},
    {0, 1, 3, 0},
}};

Pauli1 code_from_bits(bool x, bool z) {
  if (x && z) return Pauli1::Y;
  if (x) return Pauli1::X;
  if (z) return Pauli1::Z;
  return Pauli1::I;
}

void check_same_size(const PauliString& a, const PauliString& b) {
  if (a.num_qubits() != b.num_qubits()) {
    throw DimensionMismatch("Pauli operators act on " +
                            std::to_string(a.num_qubits()) + " and " +
                            std::to_string(b.num_qubits()) + " qubits");
  }
}

// Signed single-qubit images under conjugation, indexed by factor code.
struct SignedFactor {
  Pauli1 p;
  bool negative;
};

SignedFactor conjugate_single(Pauli1 p, CliffordLabel g) {
  switch (g) {
    case CliffordLabel::I:
      return {p, false};
    case CliffordLabel::X90:
      switch (p) {
        case Pauli1::Y: return {Pauli1::Z, false};
        case Pauli1::Z: return {Pauli1::Y, true};
        default: return {p, false};
      }
    case CliffordLabel::Y90:
      switch (p) {
        case Pauli1::X: return {Pauli1::Z, true};
        case Pauli1::Z: return {Pauli1::X, false};
        default: return {p, false};
      }
    case CliffordLabel::CZ:
      break;
  }
  throw InvalidInput("CZ is not a single-qubit Clifford");
}

}  // namespace

char pauli_char(Pauli1 p) { return "IXYZ"[static_cast<int>(p)]; }

PauliString::PauliString(int n) : n_(n) {
  if (n < 1 || n > kMaxQubits) {
    throw InvalidInput("unsupported qubit count " + std::to_string(n));
  }
}

PauliString PauliString::from_index(int n, std::size_t index) {
  PauliString p(n);
  for (int q = n - 1; q >= 0; --q) {
    p.set_factor(q, static_cast<Pauli1>(index & 3U));
    index >>= 2;
  }
  if (index != 0) throw InvalidInput("Pauli index out of range");
  return p;
}

PauliString PauliString::parse(std::string_view text) {
  bool negative = false;
  if (!text.empty() && (text.front() == '-' || text.front() == '+')) {
    negative = text.front() == '-';
    text.remove_prefix(1);
  }
  if (text.empty()) throw InvalidInput("empty Pauli label");
  PauliString p(static_cast<int>(text.size()));
  for (std::size_t q = 0; q < text.size(); ++q) {
    switch (text[q]) {
      case 'I': case '_': p.set_factor(static_cast<int>(q), Pauli1::I); break;
      case 'X': p.set_factor(static_cast<int>(q), Pauli1::X); break;
      case 'Y': p.set_factor(static_cast<int>(q), Pauli1::Y); break;
      case 'Z': p.set_factor(static_cast<int>(q), Pauli1::Z); break;
      default:
        throw InvalidInput("bad Pauli label '" + std::string(text) + "'");
    }
  }
  p.negative_ = negative;
  return p;
}

PauliString PauliString::single(int n, int qubit, Pauli1 p) {
  PauliString s(n);
  s.set_factor(qubit, p);
  return s;
}

std::size_t PauliString::index() const {
  std::size_t idx = 0;
  for (int q = 0; q < n_; ++q) {
    idx = (idx << 2) | static_cast<std::size_t>(factor(q));
  }
  return idx;
}

Pauli1 PauliString::factor(int qubit) const {
  return code_from_bits(x_bit(qubit), z_bit(qubit));
}

void PauliString::set_factor(int qubit, Pauli1 p) {
  const auto code = static_cast<int>(p);
  const std::uint32_t mask = 1U << qubit;
  x_ = kXBit[code] ? (x_ | mask) : (x_ & ~mask);
  z_ = kZBit[code] ? (z_ | mask) : (z_ & ~mask);
}

PauliString PauliString::negated() const {
  PauliString p = *this;
  p.negative_ = !negative_;
  return p;
}

PauliString PauliString::unsigned_part() const {
  PauliString p = *this;
  p.negative_ = false;
  return p;
}

int PauliString::weight() const { return std::popcount(x_ | z_); }

std::string PauliString::label() const {
  std::string s;
  s.reserve(n_);
  for (int q = 0; q < n_; ++q) s.push_back(pauli_char(factor(q)));
  return s;
}

std::string PauliString::str() const {
  return negative_ ? "-" + label() : label();
}

CMatrix PauliString::matrix() const {
  static const std::array<CMatrix, 4> kSingle = [] {
    std::array<CMatrix, 4> m;
    const complex i(0.0, 1.0);
    m[0] = CMatrix::Identity(2, 2);
    m[1] = CMatrix::Zero(2, 2);
    m[1] << 0.0, 1.0, 1.0, 0.0;
    m[2] = CMatrix::Zero(2, 2);
    m[2] << 0.0, -i, i, 0.0;
    m[3] = CMatrix::Zero(2, 2);
    m[3] << 1.0, 0.0, 0.0, -1.0;
    return m;
  }();
  CMatrix out = kSingle[static_cast<int>(factor(0))];
  for (int q = 1; q < n_; ++q) {
    const CMatrix& f = kSingle[static_cast<int>(factor(q))];
    CMatrix next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) {
        next.block(2 * r, 2 * c, 2, 2) = out(r, c) * f;
      }
    }
    out = std::move(next);
  }
  if (negative_) out *= -1.0;
  return out;
}

PhasedPauli multiply(const PauliString& a, const PauliString& b) {
  check_same_size(a, b);
  PhasedPauli out{PauliString(a.num_qubits()), 0};
  int phase = 0;
  for (int q = 0; q < a.num_qubits(); ++q) {
    const auto fa = static_cast<int>(a.factor(q));
    const auto fb = static_cast<int>(b.factor(q));
    phase += kProductPhase[fa][fb];
    out.pauli.set_factor(q, code_from_bits(a.x_bit(q) != b.x_bit(q),
                                           a.z_bit(q) != b.z_bit(q)));
  }
  if (a.sign() < 0) phase += 2;
  if (b.sign() < 0) phase += 2;
  out.phase = phase & 3;
  return out;
}

int commutation_sign(const PauliString& p, const PauliString& q) {
  check_same_size(p, q);
  const std::uint32_t s =
      (p.x_bits() & q.z_bits()) ^ (p.z_bits() & q.x_bits());
  return std::popcount(s) & 1;
}

PauliString conjugate_through_clifford(const PauliString& p, CliffordLabel g,
                                       std::span<const int> qubits) {
  const int n = p.num_qubits();
  const int needed = g == CliffordLabel::CZ ? 2 : 1;
  if (static_cast<int>(qubits.size()) != needed) {
    throw InvalidInput("wrong number of target qubits for Clifford");
  }
  for (int q : qubits) {
    if (q < 0 || q >= n) throw DimensionMismatch("target qubit out of range");
  }
  if (g == CliffordLabel::CZ && qubits[0] == qubits[1]) {
    throw InvalidInput("CZ needs two distinct qubits");
  }

  // Image of each factor, multiplied in qubit order. Factors on distinct
  // qubits commute, so the product of the images is the image of p.
  PauliString acc(n);
  int phase = 0;
  for (int q = 0; q < n; ++q) {
    const Pauli1 f = p.factor(q);
    if (f == Pauli1::I) continue;
    PauliString image(n);
    if (g == CliffordLabel::CZ) {
      image.set_factor(q, f);
      const int a = qubits[0];
      const int b = qubits[1];
      if ((q == a || q == b) && p.x_bit(q)) {
        const int other = q == a ? b : a;
        image.set_factor(other, Pauli1::Z);
      }
    } else if (q == qubits[0]) {
      const SignedFactor s = conjugate_single(f, g);
      image.set_factor(q, s.p);
      if (s.negative) image = image.negated();
    } else {
      image.set_factor(q, f);
    }
    PhasedPauli prod = multiply(acc, image);
    acc = prod.pauli;
    phase += prod.phase;
  }
  phase &= 3;
  if (phase & 1) {
    throw InvariantViolation("Clifford conjugation produced a non-real sign");
  }
  const bool negative = (phase == 2) != (p.sign() < 0);
  return negative ? acc.negated() : acc;
}

int qubits_for_dimension(std::size_t size) {
  int n = 0;
  std::size_t s = 1;
  while (s < size) {
    s *= 4;
    ++n;
  }
  if (s != size || n == 0) {
    throw DimensionMismatch("length " + std::to_string(size) +
                            " is not a power of 4");
  }
  return n;
}

void pauli_sign_transform(std::span<double> values) {
  const int n = qubits_for_dimension(values.size());
  // Per-qubit kernel in I, X, Y, Z order; entry (a, b) = (-1)^<a, b>.
  std::size_t stride = 1;
  for (int q = 0; q < n; ++q, stride *= 4) {
    for (std::size_t base = 0; base < values.size(); base += 4 * stride) {
      for (std::size_t off = 0; off < stride; ++off) {
        double* v = values.data() + base + off;
        const double i = v[0];
        const double x = v[stride];
        const double y = v[2 * stride];
        const double z = v[3 * stride];
        v[0] = i + x + y + z;
        v[stride] = i + x - y - z;
        v[2 * stride] = i - x + y - z;
        v[3 * stride] = i - x - y + z;
      }
    }
  }
}

ErrorProbabilities fidelities_to_error_probs(const Vector& f,
                                             double tolerance) {
  const int n = qubits_for_dimension(static_cast<std::size_t>(f.size()));
  if (std::abs(f(0) - 1.0) > 1e-9) {
    throw InvalidInput("identity fidelity must equal 1");
  }
  ErrorProbabilities out;
  out.probs = f;
  pauli_sign_transform({out.probs.data(), static_cast<std::size_t>(f.size())});
  out.probs /= std::pow(4.0, n);
  out.most_negative = std::min(0.0, out.probs.minCoeff());
  out.unphysical = out.most_negative < -tolerance;
  return out;
}

Vector error_probs_to_fidelities(const Vector& c) {
  Vector f = c;
  pauli_sign_transform({f.data(), static_cast<std::size_t>(f.size())});
  return f;
}

}  // namespace noise_tailor
