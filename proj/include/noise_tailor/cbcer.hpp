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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "noise_tailor/errorgen.hpp"
#include "noise_tailor/pauli.hpp"
#include "noise_tailor/superop.hpp"

namespace noise_tailor {

/// A benchmarked cycle: an ideal Clifford (signed Pauli permutation) followed
/// by an error that is either a full PTM (n <= 2) or, for any n <= 4, a
/// Pauli channel given by its fidelities.
class CbCycle {
 public:
  /// Full error PTM after the ideal Clifford `ideal` (both 4^n square).
  static CbCycle from_channels(const SuperOp& ideal, const SuperOp& error);
  /// Pauli error with the given fidelities (f_I = 1) after the identity.
  static CbCycle pauli_idle(int n, const Vector& fidelities);
  /// Cycle label of the two-qubit gate set ("CZ", "X90:I", "idle") with
  /// `error` applied after it.
  static CbCycle from_label(const std::string& label, const SuperOp& error);

  int num_qubits() const { return n_; }
  std::size_t dim() const { return perm_.size(); }
  bool pauli_diagonal() const { return !full_.has_value(); }
  /// Fidelities of the Pauli-twirled error.
  Vector twirled_fidelities() const;

  /// Image index and sign of Pauli j under the ideal cycle.
  int image(std::size_t j) const { return perm_[j]; }
  double sign(std::size_t j) const { return sign_[j]; }
  const std::optional<Matrix>& full_error() const { return full_; }
  const Vector& diagonal() const { return diag_; }

 private:
  int n_ = 1;
  std::vector<int> perm_;
  std::vector<double> sign_;
  std::optional<Matrix> full_;
  Vector diag_;
};

struct CbOptions {
  std::vector<int> depths{4, 16, 64};
  int shots = 100;           // per (Pauli, depth, randomization)
  int randomizations = 20;
  std::uint64_t seed = 1;
  /// Replace sampled means by exact twirl-averaged expectations.
  bool exact = false;
  /// SPAM attenuation multiplying every expectation.
  double spam_scale = 1.0;
};

struct DecayRecord {
  PauliString pauli{1};
  std::vector<int> depths;
  std::vector<double> expectations;
  std::vector<double> stderrs;
  double amplitude = 1.0;
  double fidelity = 1.0;
  double fidelity_stderr = 0.0;
  bool diverged = false;
};

/// Decay experiment per Pauli: eigenstate preparation, m Pauli-dressed
/// repetitions, frame-corrected expectation, fit A f^m. For a Pauli P whose
/// orbit under the ideal cycle has length L > 1 the decay rate is the
/// geometric mean of the fidelities along the orbit, which is what `fidelity`
/// then reports.
std::vector<DecayRecord> run_cb(const CbCycle& cycle, const CbOptions& opts);

/// Weighted log-linear fit of y = A f^m.
DecayRecord fit_decay(const PauliString& p, const std::vector<int>& depths,
                      const std::vector<double>& means, const std::vector<double>& stderrs);

struct CycleErrorMap {
  int n = 1;
  Vector fidelities;
  Vector fidelity_stderr;
  Vector probs;
  Vector ci_half_width;  // simultaneous (Bonferroni) over all entries
  double confidence = 0.95;
  double display_floor = 0.0;
  std::vector<bool> shown;  // entry at or above the floor
  WeightMap weights;
  bool unphysical = false;  // negative mass beyond the CI
  double infidelity = 0.0;  // 1 - 4^-n sum_P f_P
  double infidelity_stderr = 0.0;
};

CycleErrorMap reconstruct(const std::vector<DecayRecord>& records, double confidence = 0.95,
                          double floor_fraction = 0.12);

/// Long-format CSV of the reconstructed map:
/// module,method,kind,pauli,weight,value,ci,shown.
std::string cer_csv(const CycleErrorMap& map);

/// Two-sided standard normal quantile with Bonferroni correction over
/// `comparisons`.
double bonferroni_z(double confidence, int comparisons);

}  // namespace noise_tailor
