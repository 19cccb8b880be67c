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

#include "noise_tailor/cbcer.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>
#include <sstream>

#include <boost/math/distributions/normal.hpp>

#include "noise_tailor/circuit.hpp"
#include "noise_tailor/gateset.hpp"

namespace noise_tailor {

namespace {

// x and z bit masks of a Pauli index (qubit 0 in the top bit).
struct Symplectic {
  std::uint32_t x = 0;
  std::uint32_t z = 0;
};

Symplectic symplectic(std::size_t index, int n) {
  Symplectic s;
  for (int q = 0; q < n; ++q) {
    const auto code = (index >> (2 * (n - 1 - q))) & 3U;
    const std::uint32_t bit = 1U << (n - 1 - q);
    if (code == 1 || code == 2) s.x |= bit;
    if (code == 2 || code == 3) s.z |= bit;
  }
  return s;
}

bool anticommute(const Symplectic& a, const Symplectic& b) {
  return (std::popcount((a.x & b.z) ^ (a.z & b.x)) & 1) != 0;
}

}  // namespace

CbCycle CbCycle::from_channels(const SuperOp& ideal, const SuperOp& error) {
  if (ideal.dim() != error.dim()) throw DimensionMismatch("cycle and error sizes differ");
  if (ideal.num_qubits() > 2) throw InvalidInput("full-PTM cycles support n <= 2");
  CbCycle c;
  c.n_ = ideal.num_qubits();
  const auto d = static_cast<std::size_t>(ideal.dim());
  c.perm_.assign(d, -1);
  c.sign_.assign(d, 0.0);
  const Matrix& m = ideal.matrix();
  for (std::size_t j = 0; j < d; ++j) {
    for (std::size_t i = 0; i < d; ++i) {
      const double v = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      if (std::abs(std::abs(v) - 1.0) < 1e-9) {
        c.perm_[j] = static_cast<int>(i);
        c.sign_[j] = v > 0 ? 1.0 : -1.0;
      } else if (std::abs(v) > 1e-9) {
        throw InvalidInput("benchmarked cycle must be Clifford");
      }
    }
    if (c.perm_[j] < 0) throw InvalidInput("benchmarked cycle must be Clifford");
  }
  c.full_ = error.matrix();
  c.diag_ = error.matrix().diagonal();
  return c;
}

CbCycle CbCycle::pauli_idle(int n, const Vector& fidelities) {
  if (n < 1 || n > 4) throw InvalidInput("Pauli-diagonal cycles support 1 <= n <= 4");
  const auto d = std::size_t{1} << (2 * n);
  if (static_cast<std::size_t>(fidelities.size()) != d) {
    throw DimensionMismatch("fidelity vector size");
  }
  if (std::abs(fidelities(0) - 1.0) > 1e-12) throw InvalidInput("f_I must equal 1");
  CbCycle c;
  c.n_ = n;
  c.perm_.resize(d);
  for (std::size_t j = 0; j < d; ++j) c.perm_[j] = static_cast<int>(j);
  c.sign_.assign(d, 1.0);
  c.diag_ = fidelities;
  return c;
}

CbCycle CbCycle::from_label(const std::string& label, const SuperOp& error) {
  const int idx = CycleLabel::parse(label).index();
  return from_channels(ideal_cycles()[static_cast<std::size_t>(idx)], error);
}

Vector CbCycle::twirled_fidelities() const { return diag_; }

DecayRecord fit_decay(const PauliString& p, const std::vector<int>& depths,
                      const std::vector<double>& means, const std::vector<double>& stderrs) {
  DecayRecord r;
  r.pauli = p;
  r.depths = depths;
  r.expectations = means;
  r.stderrs = stderrs;
  if (depths.size() < 2 || depths.size() != means.size() || means.size() != stderrs.size()) {
    throw InvalidInput("decay fit needs at least two depths with matching data");
  }
  const bool weighted =
      std::all_of(stderrs.begin(), stderrs.end(), [](double s) { return s > 0.0; });
  double sw = 0.0, sx = 0.0, sy = 0.0;
  std::vector<double> w(depths.size()), y(depths.size());
  for (std::size_t i = 0; i < depths.size(); ++i) {
    if (!(means[i] > 0.0)) {
      r.diverged = true;
      r.fidelity = 0.0;
      r.fidelity_stderr = 1.0;
      return r;
    }
    y[i] = std::log(means[i]);
    // Var(log y) ~ (sigma / y)^2.
    w[i] = weighted ? std::pow(means[i] / stderrs[i], 2) : 1.0;
    sw += w[i];
    sx += w[i] * depths[i];
    sy += w[i] * y[i];
  }
  const double mx = sx / sw, my = sy / sw;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < depths.size(); ++i) {
    sxx += w[i] * (depths[i] - mx) * (depths[i] - mx);
    sxy += w[i] * (depths[i] - mx) * (y[i] - my);
  }
  if (sxx <= 0.0) throw InvalidInput("decay fit needs distinct depths");
  const double slope = sxy / sxx;
  r.fidelity = std::exp(slope);
  r.amplitude = std::exp(my - slope * mx);
  r.fidelity_stderr = weighted ? r.fidelity / std::sqrt(sxx) : 0.0;
  if (r.fidelity > 1.0 + 1e-12 && !weighted) r.diverged = true;
  return r;
}

std::vector<DecayRecord> run_cb(const CbCycle& cycle, const CbOptions& opts) {
  if (opts.depths.size() < 2) throw InvalidInput("CB needs at least two depths");
  if (opts.shots < 1 || opts.randomizations < 1) {
    throw InvalidInput("CB needs positive shots and randomizations");
  }
  const int n = cycle.num_qubits();
  const std::size_t d = cycle.dim();
  const double dq = std::ldexp(1.0, n);  // Hilbert dimension
  std::vector<Symplectic> sym(d);
  for (std::size_t j = 0; j < d; ++j) sym[j] = symplectic(j, n);

  std::vector<DecayRecord> out;
  out.reserve(d - 1);
  for (std::size_t p = 1; p < d; ++p) {
    const PauliString label = PauliString::from_index(n, p);
    std::vector<double> means, errs;
    for (int m : opts.depths) {
      if (m < 1) throw InvalidInput("CB depths must be positive");
      std::vector<double> per_rand;
      per_rand.reserve(static_cast<std::size_t>(opts.randomizations));
      for (int r = 0; r < opts.randomizations; ++r) {
        std::mt19937_64 rng(derive_seed(opts.seed, "cb:" + label.str() + ":" + std::to_string(m), r));
        std::uniform_int_distribution<std::size_t> pick(0, d - 1);
        double expectation;
        if (cycle.pauli_diagonal() || opts.exact) {
          // Pauli dressing only flips signs the frame undoes.
          std::size_t j = p;
          double value = 1.0;
          for (int k = 0; k < m; ++k) {
            j = static_cast<std::size_t>(cycle.image(j));
            value *= cycle.diagonal()(static_cast<Eigen::Index>(j));
          }
          expectation = value;
        } else {
          const Matrix& err = *cycle.full_error();
          Vector v = Vector::Zero(static_cast<Eigen::Index>(d));
          v(0) = 1.0 / dq;
          v(static_cast<Eigen::Index>(p)) = 1.0 / dq;
          std::size_t j = p;
          double s = 1.0;
          Vector tmp(static_cast<Eigen::Index>(d));
          auto dress = [&](std::size_t rp) {
            for (std::size_t a = 0; a < d; ++a) {
              if (anticommute(sym[rp], sym[a])) v(static_cast<Eigen::Index>(a)) = -v(static_cast<Eigen::Index>(a));
            }
            if (anticommute(sym[rp], sym[j])) s = -s;
          };
          for (int k = 0; k < m; ++k) {
            dress(pick(rng));
            tmp.setZero();
            for (std::size_t a = 0; a < d; ++a) {
              tmp(cycle.image(a)) += cycle.sign(a) * v(static_cast<Eigen::Index>(a));
            }
            s *= cycle.sign(j);
            j = static_cast<std::size_t>(cycle.image(j));
            v = err * tmp;
          }
          dress(pick(rng));  // final twirl of the last error
          expectation = s * dq * v(static_cast<Eigen::Index>(j));
        }
        expectation = std::clamp(expectation * opts.spam_scale, -1.0, 1.0);
        if (opts.exact) {
          per_rand.push_back(expectation);
          continue;
        }
        std::binomial_distribution<int> shots(opts.shots, 0.5 * (1.0 + expectation));
        const int plus = shots(rng);
        per_rand.push_back((2.0 * plus - opts.shots) / opts.shots);
      }
      double mean = 0.0;
      for (double x : per_rand) mean += x;
      mean /= static_cast<double>(per_rand.size());
      double var = 0.0;
      for (double x : per_rand) var += (x - mean) * (x - mean);
      const auto nr = static_cast<double>(per_rand.size());
      double se = nr > 1 ? std::sqrt(var / (nr - 1.0) / nr) : 0.0;
      if (!opts.exact) {
        // Shot noise floor when randomizations happen to agree.
        se = std::max(se, std::sqrt(std::max(1.0 - mean * mean, 1e-12) / (nr * opts.shots)));
      }
      means.push_back(mean);
      errs.push_back(opts.exact ? 0.0 : se);
    }
    out.push_back(fit_decay(label, opts.depths, means, errs));
  }
  return out;
}

double bonferroni_z(double confidence, int comparisons) {
  if (confidence <= 0.0 || confidence >= 1.0 || comparisons < 1) {
    throw InvalidInput("bonferroni_z: bad arguments");
  }
  const double alpha = (1.0 - confidence) / comparisons;
  return boost::math::quantile(boost::math::normal(), 1.0 - alpha / 2.0);
}

CycleErrorMap reconstruct(const std::vector<DecayRecord>& records, double confidence,
                          double floor_fraction) {
  if (records.empty()) throw InvalidInput("reconstruct needs decay records");
  CycleErrorMap map;
  map.n = records.front().pauli.num_qubits();
  const auto d = std::size_t{1} << (2 * map.n);
  if (records.size() != d - 1) {
    throw InvalidInput("reconstruct needs a record for every non-identity Pauli");
  }
  map.fidelities = Vector::Ones(static_cast<Eigen::Index>(d));
  map.fidelity_stderr = Vector::Zero(static_cast<Eigen::Index>(d));
  std::vector<bool> seen(d, false);
  for (const DecayRecord& r : records) {
    const std::size_t idx = r.pauli.index();
    if (idx == 0 || seen[idx]) throw InvalidInput("duplicate or identity decay record");
    seen[idx] = true;
    map.fidelities(static_cast<Eigen::Index>(idx)) = r.fidelity;
    map.fidelity_stderr(static_cast<Eigen::Index>(idx)) = r.fidelity_stderr;
  }
  const ErrorProbabilities ep = fidelities_to_error_probs(map.fidelities, 1.0);
  map.probs = ep.probs;
  const double scale = 1.0 / static_cast<double>(d);
  const double sigma = scale * map.fidelity_stderr.norm();
  map.confidence = confidence;
  const double z = bonferroni_z(confidence, static_cast<int>(d));
  map.ci_half_width = Vector::Constant(static_cast<Eigen::Index>(d), z * sigma);
  map.unphysical = map.probs.minCoeff() < -z * sigma - 1e-12;
  map.infidelity = 1.0 - map.probs(0);
  map.infidelity_stderr = sigma;
  const double peak = map.probs.tail(static_cast<Eigen::Index>(d - 1)).maxCoeff();
  map.display_floor = floor_fraction * std::max(peak, 0.0);
  map.shown.assign(d, false);
  for (std::size_t i = 1; i < d; ++i) {
    map.shown[i] = map.probs(static_cast<Eigen::Index>(i)) >= map.display_floor && peak > 0.0;
  }
  map.weights = weight_maps(map.probs);
  return map;
}

std::string cer_csv(const CycleErrorMap& map) {
  std::ostringstream out;
  out.precision(12);
  out << "module,method,kind,pauli,weight,value,ci,shown\n";
  for (Eigen::Index i = 1; i < map.probs.size(); ++i) {
    const PauliString p = PauliString::from_index(map.n, static_cast<std::size_t>(i));
    out << "cbcer,cer,prob," << p.str() << ',' << p.weight() << ',' << map.probs(i) << ','
        << map.ci_half_width(i) << ',' << (map.shown[static_cast<std::size_t>(i)] ? 1 : 0)
        << '\n';
  }
  return out.str();
}

}  // namespace noise_tailor
