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

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace noise_tailor {

using complex = std::complex<double>;
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

/// Numerical tolerances shared by every module.
struct Tolerances {
  double unitarity = 1e-10;
  double completeness = 1e-10;
  double psd_floor = -1e-9;
  double equality = 1e-12;
  double hermiticity = 1e-12;
  double distribution_sum = 1e-9;
  double branch_cut = 1e-8;
  double negative_probability = -1e-9;
};

inline constexpr Tolerances kTol{};

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class DimensionMismatch : public Error {
 public:
  explicit DimensionMismatch(const std::string& what) : Error(what) {}
};

/// A numerical precondition on an input matrix or distribution failed.
class InvalidInput : public Error {
 public:
  explicit InvalidInput(const std::string& what) : Error(what) {}
};

class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A structural invariant (CPTP, bounds, probability) was violated.
class InvariantViolation : public Error {
 public:
  explicit InvariantViolation(const std::string& what) : Error(what) {}
};

}  // namespace noise_tailor
