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

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "noise_tailor/types.hpp"

namespace noise_tailor {

/// Single-qubit Pauli factor codes, in basis order I, X, Y, Z.
enum class Pauli1 : std::uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli1 p);

/// Signed n-qubit Pauli operator in symplectic form.
///
/// Qubit 0 is the most significant factor: the string "XZ" is X on qubit 0
/// and Z on qubit 1, and its basis index is 1 * 4 + 3 = 7.
class PauliString {
 public:
  static constexpr int kMaxQubits = 16;

  explicit PauliString(int n = 1);

  static PauliString from_index(int n, std::size_t index);
  /// Parses "XZ", "-XZ", "+IY". Throws InvalidInput on malformed text.
  static PauliString parse(std::string_view text);
  static PauliString single(int n, int qubit, Pauli1 p);

  int num_qubits() const { return n_; }
  std::size_t index() const;
  Pauli1 factor(int qubit) const;
  void set_factor(int qubit, Pauli1 p);
  bool x_bit(int qubit) const { return (x_ >> qubit) & 1U; }
  bool z_bit(int qubit) const { return (z_ >> qubit) & 1U; }
  std::uint32_t x_bits() const { return x_; }
  std::uint32_t z_bits() const { return z_; }

  int sign() const { return negative_ ? -1 : 1; }
  PauliString negated() const;
  PauliString unsigned_part() const;

  int weight() const;
  bool is_identity() const { return x_ == 0 && z_ == 0; }

  /// Label without sign, e.g. "XZ".
  std::string label() const;
  /// Label with a leading '-' when negative.
  std::string str() const;

  /// Dense d x d matrix including the sign.
  CMatrix matrix() const;

  friend bool operator==(const PauliString& a, const PauliString& b) = default;

 private:
  int n_;
  std::uint32_t x_ = 0;
  std::uint32_t z_ = 0;
  bool negative_ = false;
};

/// Result of a Pauli product: the operator equals i^phase * pauli, with
/// pauli carrying a + sign.
struct PhasedPauli {
  PauliString pauli;
  int phase = 0;  // exponent of i, in 0..3
};

PhasedPauli multiply(const PauliString& a, const PauliString& b);

/// 0 when p and q commute, 1 when they anticommute.
int commutation_sign(const PauliString& p, const PauliString& q);

/// Clifford cycles that Pauli frames are commuted through.
enum class CliffordLabel : std::uint8_t { I, X90, Y90, CZ };

/// Returns g p g^dagger. Single-qubit labels act on `qubits[0]`; CZ acts on
/// the pair `qubits[0], qubits[1]`.
PauliString conjugate_through_clifford(const PauliString& p, CliffordLabel g,
                                       std::span<const int> qubits);

/// Signed Walsh-Hadamard transform with kernel (-1)^<P,Q>, applied in place.
/// `values` must have length 4^n.
void pauli_sign_transform(std::span<double> values);

/// Outcome of inverting Pauli fidelities to error probabilities.
struct ErrorProbabilities {
  Vector probs;
  bool unphysical = false;
  double most_negative = 0.0;
};

/// c_Q = 4^-n sum_P (-1)^<P,Q> f_P. `f` is indexed by Pauli basis index and
/// must have f_I = 1.
ErrorProbabilities fidelities_to_error_probs(const Vector& f,
                                             double tolerance = 1e-9);

/// Inverse map f_P = sum_Q (-1)^<P,Q> c_Q.
Vector error_probs_to_fidelities(const Vector& c);

/// Number of qubits n with 4^n == size; throws if size is not a power of 4.
int qubits_for_dimension(std::size_t size);

}  // namespace noise_tailor
