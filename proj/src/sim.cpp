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

#include "noise_tailor/sim.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

namespace noise_tailor {

namespace {

// Per-run caches of the noisy gate set: full gates and their error parts.
struct NoisyGates {
  GateSet gates;
  std::array<Matrix, kNumCycles> errors;

  explicit NoisyGates(GateSet gs) : gates(std::move(gs)) {
    const auto& ideal = ideal_cycles();
    for (std::size_t g = 0; g < kNumCycles; ++g) {
      errors[g] = gates.gates[g].matrix() * ideal[g].matrix().transpose();
    }
  }
};

Vector propagate_with(const Circuit& c, const NoisyGates& ng) {
  Vector v = ng.gates.spam.rho;
  const auto& ideal = ideal_cycles();
  for (const Layer& layer : c.layers) {
    const auto label = static_cast<std::size_t>(layer.label());
    if (!layer.dressed()) {
      v = ng.gates.gates[label].matrix() * v;
      continue;
    }
    PauliString post(2), pre(2);
    for (int q = 0; q < 2; ++q) {
      post.set_factor(q, layer.ops[static_cast<std::size_t>(q)].post);
      pre.set_factor(q, layer.ops[static_cast<std::size_t>(q)].pre);
    }
    v = v.cwiseProduct(pauli_conjugation_diagonal(pre));
    v = ideal[label].matrix() * v;
    v = v.cwiseProduct(pauli_conjugation_diagonal(post));
    v = ng.errors[label] * v;
  }
  return v;
}

Distribution finish(const Circuit& c, const Spam& spam, const Vector& v) {
  const auto raw = spam.probabilities(v);
  Distribution p{};
  double total = 0.0;
  for (int o = 0; o < kNumOutcomes; ++o) {
    double x = raw[static_cast<std::size_t>(o)];
    if (x < kTol.negative_probability) {
      throw InvariantViolation("negative probability " + std::to_string(x) +
                               " for circuit " + c.id());
    }
    x = std::max(0.0, x);
    p[static_cast<std::size_t>(correct_outcome(o, c.flips))] = x;
    total += x;
  }
  if (std::abs(total - 1.0) > 1e-6) {
    throw InvariantViolation("outcome probabilities of " + c.id() +
                             " sum to " + std::to_string(total));
  }
  for (double& x : p) x /= total;
  return p;
}

// Runs fn(i) for i in [0, n) over `threads` workers; results are written
// by index so scheduling cannot change them.
template <typename Fn>
void parallel_for(std::size_t n, int threads, Fn fn) {
  const auto workers = static_cast<std::size_t>(std::max(1, threads));
  if (workers == 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr error;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < n; i += workers) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(mu);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

}  // namespace

Vector propagate(const Circuit& c, const GateSet& gates) {
  return propagate_with(c, NoisyGates(gates));
}

Distribution simulate_probs(const Circuit& c, const GateSet& gates) {
  return finish(c, gates.spam, propagate(c, gates));
}

Counts sample_counts(const Distribution& p, int shots, std::mt19937_64& rng) {
  Counts out{};
  if (shots < 0) throw InvalidInput("negative shot count");
  int remaining = shots;
  double mass = 1.0;
  for (int o = 0; o < kNumOutcomes && remaining > 0; ++o) {
    const auto io = static_cast<std::size_t>(o);
    if (o == kNumOutcomes - 1 || mass <= 0.0) {
      out[io] = remaining;
      remaining = 0;
      break;
    }
    const double q = std::clamp(p[io] / mass, 0.0, 1.0);
    std::binomial_distribution<int> draw(remaining, q);
    const int k = draw(rng);
    out[io] = k;
    remaining -= k;
    mass -= p[io];
  }
  return out;
}

const Counts& DataSet::at(const std::string& id) const {
  const auto it = std::find(ids.begin(), ids.end(), id);
  if (it == ids.end()) throw InvalidInput("dataset has no circuit " + id);
  return counts[static_cast<std::size_t>(it - ids.begin())];
}

double DataSet::total(std::size_t i) const {
  double t = 0.0;
  for (double c : counts.at(i)) t += c;
  return t;
}

DataSet run_experiment(const std::vector<Circuit>& circuits,
                       const NoiseScenario& scenario,
                       const ExperimentOptions& options) {
  const ShotPlan& plan = options.plan;
  const int n_eff = std::max(plan.randomizations, 1);
  DataSet ds;
  ds.meta.shots = plan.total;
  ds.meta.randomizations = plan.randomizations;
  ds.meta.seed = options.seed;
  ds.meta.exact = options.exact;
  {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(scenario.hash()));
    ds.meta.scenario_hash = buf;
  }
  ds.ids.resize(circuits.size());
  ds.counts.assign(circuits.size(), Counts{});

  const NoisyGates static_gates(build_gateset(scenario));
  const bool drifting = scenario.drift.active();

  parallel_for(circuits.size(), options.threads, [&](std::size_t i) {
    const Circuit& base = circuits[i];
    const std::string id = base.base_id.empty() ? base.id() : base.base_id;
    ds.ids[i] = id;
    Counts total{};
    for (int r = 0; r < n_eff; ++r) {
      const Circuit run = plan.randomizations == 0
                              ? base
                              : randomize_indexed(base, options.seed, r);
      const std::int64_t exec_index =
          static_cast<std::int64_t>(i) * n_eff + r;
      Distribution p;
      if (drifting) {
        // Only drifting cycles change; their static version was verified.
        NoisyGates g = static_gates;
        for (int label : scenario.drift.gates) {
          const auto l = static_cast<std::size_t>(label);
          SuperOp err = build_error(scenario, label, exec_index, false);
          g.gates.gates[l] = compose(err, ideal_cycles()[l]);
          g.errors[l] = err.matrix();
        }
        p = finish(run, g.gates.spam, propagate_with(run, g));
      } else {
        p = finish(run, static_gates.gates.spam, propagate_with(run, static_gates));
      }
      if (options.exact) {
        for (int o = 0; o < kNumOutcomes; ++o) {
          total[static_cast<std::size_t>(o)] +=
              plan.per_randomization * p[static_cast<std::size_t>(o)];
        }
      } else {
        std::mt19937_64 rng(derive_seed(options.seed ^ 0x5eed5eedULL, id, r));
        const Counts c = sample_counts(p, plan.per_randomization, rng);
        for (int o = 0; o < kNumOutcomes; ++o) {
          total[static_cast<std::size_t>(o)] += c[static_cast<std::size_t>(o)];
        }
      }
    }
    ds.counts[i] = total;
  });
  return ds;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("NOISE_TAILOR_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return 1;
}

}  // namespace noise_tailor
