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

#include "noise_tailor/verify.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "noise_tailor/cbcer.hpp"
#include "noise_tailor/diamond.hpp"
#include "noise_tailor/random.hpp"
#include "noise_tailor/rc.hpp"
#include "noise_tailor/sim.hpp"

namespace noise_tailor {

namespace {

std::string sci(double v) {
  std::ostringstream s;
  s.precision(3);
  s << std::scientific << v;
  return s.str();
}

// Each check returns its detail line or throws with the failure reason.
VerifyCheck run_check(const std::string& name, const std::function<std::string()>& body) {
  VerifyCheck c{name, false, ""};
  try {
    c.detail = body();
    c.passed = true;
  } catch (const std::exception& e) {
    c.detail = e.what();
  }
  return c;
}

}  // namespace

SdpOptions corrupted_sdp_options() {
  SdpOptions o;
  o.gap_tol = 0.5;
  o.feas_tol = 0.5;
  o.max_iterations = 200;
  return o;
}

std::vector<VerifyCheck> run_verify(const VerifyOptions& opts) {
  std::vector<VerifyCheck> out;
  std::mt19937_64 rng(opts.seed);

  out.push_back(run_check("diamond SDP = Pauli closed form", [&] {
    double worst = 0.0;
    for (int trial = 0; trial < 12; ++trial) {
      const int n = 1 + trial % 2;
      const PauliChannel c = random_pauli_channel(n, rng);
      const SuperOp id = SuperOp::identity(n);
      const double sdp = diamond_distance(c.superop(), id, opts.sdp).value;
      const double closed = pauli_diamond(c);
      const double err = std::abs(sdp - closed);
      worst = std::max(worst, err);
      if (err > 1e-6) {
        throw InvariantViolation("bound violation: SDP " + sci(sdp) + " vs closed form " +
                                 sci(closed) + " for Pauli channel " + std::to_string(trial));
      }
    }
    return "12 channels, max deviation " + sci(worst);
  }));

  out.push_back(run_check("diamond SDP = unitary closed form", [&] {
    double worst = 0.0;
    for (double theta : {0.02, 0.1, 0.3, 0.5}) {
      CMatrix u(2, 2);
      u << std::cos(theta / 2), complex(0, -std::sin(theta / 2)), complex(0, -std::sin(theta / 2)),
          std::cos(theta / 2);
      const double sdp = diamond_distance(ptm_from_unitary(u), SuperOp::identity(1), opts.sdp).value;
      const double closed = std::sin(theta / 2);
      const double err = std::abs(sdp - closed);
      worst = std::max(worst, err);
      if (err > 1e-6) {
        throw InvariantViolation("bound violation: SDP " + sci(sdp) + " vs sin(theta/2) " +
                                 sci(closed) + " at theta " + std::to_string(theta));
      }
    }
    return "4 rotations, max deviation " + sci(worst);
  }));

  out.push_back(run_check("e_F <= eps_diamond <= upper bound", [&] {
    for (int trial = 0; trial < 8; ++trial) {
      const int n = 1 + trial % 2;
      const SuperOp e = random_cptp(n, 2, rng, 0.05);
      const SuperOp id = SuperOp::identity(n);
      const DiamondResult d = diamond_distance(e, id, opts.sdp);
      check_bounds(process_infidelity(e, id), d.value, n, "random channel " + std::to_string(trial),
                   1e-7);
    }
    return std::string("8 random CPTP channels");
  }));

  out.push_back(run_check("full Pauli twirl is diagonal", [&] {
    const SuperOp e = random_cptp(2, 3, rng, 0.1);
    const SuperOp t = pauli_twirl(e);
    double off = 0.0, diag = 0.0;
    for (Eigen::Index i = 0; i < 16; ++i) {
      for (Eigen::Index k = 0; k < 16; ++k) {
        if (i == k) diag = std::max(diag, std::abs(t.matrix()(i, k) - e.matrix()(i, k)));
        else off = std::max(off, std::abs(t.matrix()(i, k)));
      }
    }
    if (off > 1e-12 || diag > 1e-12) {
      throw InvariantViolation("twirl residual off-diagonal " + sci(off) + ", diagonal " + sci(diag));
    }
    const SuperOp id = SuperOp::identity(2);
    const double sdp = diamond_distance(t, id, opts.sdp).value;
    const double ef = process_infidelity(t, id);
    if (std::abs(sdp - ef) > 1e-6) {
      throw InvariantViolation("bound violation: twirled diamond " + sci(sdp) + " vs e_F " + sci(ef));
    }
    return "off-diagonal " + sci(off) + ", diamond - e_F " + sci(std::abs(sdp - ef));
  }));

  out.push_back(run_check("RC preserves noiseless distributions", [&] {
    SuiteOptions so;
    so.max_depth = 2;
    const CircuitSuite suite = generate_suite(so);
    const GateSet ideal = GateSet::ideal();
    double worst = 0.0;
    const std::size_t count = std::min<std::size_t>(50, suite.circuits.size());
    for (std::size_t i = 0; i < count; ++i) {
      const Circuit& base = suite.circuits[i * suite.circuits.size() / count];
      const Distribution p = simulate_probs(base, ideal);
      const Distribution q = simulate_probs(randomize_indexed(base, opts.seed, static_cast<int>(i)), ideal);
      for (int o = 0; o < kNumOutcomes; ++o) {
        worst = std::max(worst, std::abs(p[static_cast<std::size_t>(o)] - q[static_cast<std::size_t>(o)]));
      }
    }
    if (worst > 1e-12) throw InvariantViolation("RC changed a distribution by " + sci(worst));
    return std::to_string(count) + " circuits, max deviation " + sci(worst);
  }));

  out.push_back(run_check("Walsh-Hadamard round trip", [&] {
    double worst = 0.0;
    for (int n = 1; n <= 4; ++n) {
      const PauliChannel c = random_pauli_channel(n, rng, 0.1);
      const Vector f = error_probs_to_fidelities(c.probs);
      const Vector back = fidelities_to_error_probs(f).probs;
      worst = std::max(worst, (back - c.probs).cwiseAbs().maxCoeff());
    }
    if (worst > 1e-12) throw InvariantViolation("round trip error " + sci(worst));
    return "n = 1..4, max deviation " + sci(worst);
  }));

  out.push_back(run_check("CER recovers an exact Pauli channel", [&] {
    const PauliChannel c = random_pauli_channel(2, rng, 0.05);
    CbOptions co;
    co.exact = true;
    const CycleErrorMap map = reconstruct(run_cb(CbCycle::pauli_idle(2, c.fidelities()), co));
    const double err = (map.probs - c.probs).cwiseAbs().maxCoeff();
    if (err > 1e-10) throw InvariantViolation("reconstruction error " + sci(err));
    return "max deviation " + sci(err);
  }));

  return out;
}

}  // namespace noise_tailor
