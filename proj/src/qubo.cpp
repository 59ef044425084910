// Copyright 2026 The qpower Authors
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

#include "qpower/qubo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpower/classical_power.hpp"
#include "qpower/error.hpp"
#include "qpower/random.hpp"

namespace qpower {

namespace {

struct GatePair {
  double alpha;
  double beta;
};

GatePair gate_pair(GateConvention conv) {
  return conv == GateConvention::Binary01 ? GatePair{0.0, 1.0}
                                          : GatePair{1.0, -1.0};
}

double term_value(std::uint8_t bit, GateConvention conv) {
  if (conv == GateConvention::Binary01) {
    return bit ? 1.0 : 0.0;
  }
  return bit ? -1.0 : 1.0;
}

}  // namespace

QuboInstance::QuboInstance(unsigned n, std::vector<double> linear,
                           std::vector<QuadraticTerm> quadratic, Sense sense)
    : n_(n),
      linear_(std::move(linear)),
      quadratic_(std::move(quadratic)),
      sense_(sense) {
  if (n_ == 0) {
    throw InvalidArgument("QUBO needs at least one variable");
  }
  if (linear_.size() != n_) {
    throw DimensionError("expected " + std::to_string(n_) +
                         " linear coefficients, got " +
                         std::to_string(linear_.size()));
  }
  for (const double c : linear_) {
    if (!std::isfinite(c)) {
      throw InvalidArgument("linear coefficients must be finite");
    }
  }
  for (const auto& t : quadratic_) {
    if (t.j >= t.k || t.k >= n_) {
      throw InvalidArgument("quadratic term (" + std::to_string(t.j) + ", " +
                            std::to_string(t.k) + ") needs j < k < n");
    }
    if (!std::isfinite(t.q)) {
      throw InvalidArgument("quadratic coefficients must be finite");
    }
  }
  std::sort(quadratic_.begin(), quadratic_.end(),
            [](const QuadraticTerm& a, const QuadraticTerm& b) {
              return std::tie(a.j, a.k) < std::tie(b.j, b.k);
            });
  const auto dup = std::adjacent_find(
      quadratic_.begin(), quadratic_.end(),
      [](const QuadraticTerm& a, const QuadraticTerm& b) {
        return a.j == b.j && a.k == b.k;
      });
  if (dup != quadratic_.end()) {
    throw InvalidArgument("duplicate quadratic term (" +
                          std::to_string(dup->j) + ", " +
                          std::to_string(dup->k) + ")");
  }
}

QuboInstance QuboInstance::with_sense(Sense sense) const {
  QuboInstance out = *this;
  out.sense_ = sense;
  return out;
}

QuboInstance QuboInstance::negated() const {
  QuboInstance out = *this;
  for (auto& c : out.linear_) {
    c = -c;
  }
  for (auto& t : out.quadratic_) {
    t.q = -t.q;
  }
  return out;
}

Bitstring bits_from_index(BasisIndex x, unsigned n) {
  Bitstring bits(n);
  for (unsigned j = 0; j < n; ++j) {
    bits[j] = static_cast<std::uint8_t>((x >> j) & 1U);
  }
  return bits;
}

BasisIndex index_from_bits(std::span<const std::uint8_t> bits) {
  BasisIndex x = 0;
  for (std::size_t j = 0; j < bits.size(); ++j) {
    if (bits[j]) {
      x |= BasisIndex{1} << j;
    }
  }
  return x;
}

std::string bits_to_string(std::span<const std::uint8_t> bits) {
  std::string s;
  s.reserve(bits.size());
  for (const auto b : bits) {
    s.push_back(b ? '1' : '0');
  }
  return s;
}

double evaluate(const QuboInstance& q, std::span<const std::uint8_t> x,
                GateConvention conv) {
  if (x.size() != q.num_variables()) {
    throw DimensionError("assignment has " + std::to_string(x.size()) +
                         " values, instance has " +
                         std::to_string(q.num_variables()) + " variables");
  }
  double value = 0.0;
  const auto linear = q.linear();
  for (std::size_t j = 0; j < linear.size(); ++j) {
    value += linear[j] * term_value(x[j], conv);
  }
  for (const auto& t : q.quadratic()) {
    value += t.q * term_value(x[t.j], conv) * term_value(x[t.k], conv);
  }
  return value;
}

double evaluate_index(const QuboInstance& q, BasisIndex x,
                      GateConvention conv) {
  return evaluate(q, bits_from_index(x, q.num_variables()), conv);
}

ObjectiveBounds coefficient_bounds(const QuboInstance& q, GateConvention conv) {
  ObjectiveBounds b;
  auto add = [&](double c) {
    if (conv == GateConvention::Binary01) {
      b.lower += std::min(0.0, c);
      b.upper += std::max(0.0, c);
    } else {
      b.lower -= std::abs(c);
      b.upper += std::abs(c);
    }
  };
  for (const double c : q.linear()) {
    add(c);
  }
  for (const auto& t : q.quadratic()) {
    add(t.q);
  }
  return b;
}

double ScalingPlan::phase_of(double value) const {
  return sense == Sense::Maximize ? s * (value - lower_bound)
                                  : s * (upper_bound - value);
}

double ScalingPlan::value_of(double phase) const {
  return sense == Sense::Maximize ? lower_bound + phase / s
                                  : upper_bound - phase / s;
}

ScalingPlan make_scaling(const QuboInstance& q, Sense sense,
                         GateConvention conv) {
  const auto bounds = coefficient_bounds(q, conv);
  if (!(bounds.upper > bounds.lower)) {
    throw ConstantObjectiveError(
        "objective is constant (all coefficients zero); no phase scaling");
  }
  ScalingPlan plan;
  plan.lower_bound = bounds.lower;
  plan.upper_bound = bounds.upper;
  plan.sense = sense;
  plan.s = (std::numbers::pi / 2.0) / (bounds.upper - bounds.lower);
  plan.offset = sense == Sense::Maximize ? -plan.s * bounds.lower
                                         : plan.s * bounds.upper;
  return plan;
}

ScalingPlan unit_scaling(const QuboInstance& q, Sense sense,
                         GateConvention conv) {
  const auto bounds = coefficient_bounds(q, conv);
  ScalingPlan plan;
  plan.s = 1.0;
  plan.lower_bound = bounds.lower;
  plan.upper_bound = bounds.upper;
  plan.sense = sense;
  plan.offset = sense == Sense::Maximize ? -bounds.lower : bounds.upper;
  return plan;
}

namespace {

// Adding +0.0 turns a negative zero into a positive one.
double unsigned_zero(double x) { return x + 0.0; }

}  // namespace

PhaseCircuit compile(const QuboInstance& q, GateConvention conv,
                     const ScalingPlan& plan) {
  const unsigned n = q.num_variables();
  const auto [alpha, beta] = gate_pair(conv);
  const double sign = plan.sense == Sense::Maximize ? plan.s : -plan.s;

  std::vector<double> single(q.linear().begin(), q.linear().end());
  if (conv == GateConvention::IsingPM) {
    for (const auto& t : q.quadratic()) {
      single[t.k] += t.q;
    }
  }

  PhaseCircuit circuit(n);
  for (unsigned j = 0; j < n; ++j) {
    const double w = sign * single[j];
    circuit.add_phase(j, unsigned_zero(w * alpha), unsigned_zero(w * beta));
  }
  for (const auto& t : q.quadratic()) {
    const double w =
        sign * (conv == GateConvention::IsingPM ? -2.0 * t.q : t.q);
    circuit.add_controlled_phase(t.j, t.k, unsigned_zero(w * alpha),
                                 unsigned_zero(w * beta));
  }
  circuit.add_phase(0, unsigned_zero(plan.offset), unsigned_zero(plan.offset));
  return circuit;
}

std::size_t gate_count(unsigned n, std::size_t m) {
  const std::size_t full = std::size_t{n} * (n - (n > 0 ? 1 : 0)) / 2;
  if (m > full) {
    throw InvalidArgument("at most n(n-1)/2 = " + std::to_string(full) +
                          " quadratic terms on " + std::to_string(n) +
                          " variables");
  }
  return n + m;
}

Optimum brute_force_optimum(const QuboInstance& q, GateConvention conv,
                            const Limits& limits) {
  const unsigned n = q.num_variables();
  if (n > limits.max_enumeration_qubits) {
    throw CapacityError("brute force limited to " +
                        std::to_string(limits.max_enumeration_qubits) +
                        " variables");
  }
  const bool maximize = q.sense() == Sense::Maximize;
  Optimum best;
  best.value = evaluate_index(q, 0, conv);
  const BasisIndex dim = BasisIndex{1} << n;
  for (BasisIndex x = 1; x < dim; ++x) {
    const double v = evaluate_index(q, x, conv);
    if (maximize ? v > best.value : v < best.value) {
      best.value = v;
      best.index = x;
    }
  }
  best.bits = bits_from_index(best.index, n);
  return best;
}

IsingModel ising_from_couplings(unsigned n,
                                std::vector<QuadraticTerm> couplings,
                                Sense sense) {
  return IsingModel{
      QuboInstance(n, std::vector<double>(n, 0.0), std::move(couplings), sense),
      GateConvention::IsingPM};
}

IsingReformulation to_ising(const QuboInstance& q) {
  // x = (1 - s) / 2
  const unsigned n = q.num_variables();
  std::vector<double> h(n, 0.0);
  std::vector<QuadraticTerm> couplings;
  double constant = 0.0;
  const auto linear = q.linear();
  for (unsigned j = 0; j < n; ++j) {
    constant += linear[j] / 2.0;
    h[j] -= linear[j] / 2.0;
  }
  for (const auto& t : q.quadratic()) {
    constant += t.q / 4.0;
    h[t.j] -= t.q / 4.0;
    h[t.k] -= t.q / 4.0;
    couplings.push_back({t.j, t.k, t.q / 4.0});
  }
  return {QuboInstance(n, std::move(h), std::move(couplings), q.sense()),
          constant};
}

Solution solve(const QuboInstance& q, const SolveOptions& options) {
  const unsigned n = q.num_variables();
  check_state_qubits(n, options.limits);

  Solution sol;
  sol.plan = make_scaling(q, q.sense(), options.convention);
  const PhaseCircuit circuit = compile(q, options.convention, sol.plan);
  sol.gate_count = gate_count(n, q.quadratic().size());

  // The expanded diagonal is the same operator as the circuit; iterating on
  // it avoids re-applying every gate per step.
  const Operator op = circuit_to_diagonal(circuit, options.limits);

  EngineConfig cfg = options.engine;
  cfg.max_iterate = options.max_iterate
                        ? *options.max_iterate
                        : default_max_iterate(op, cfg.eta, 50.0);
  cfg.max_iterate = std::max<std::size_t>(cfg.max_iterate, 1);

  const auto run = iterate(op, equal_superposition(n, options.limits), cfg);
  const StateVector& v = run.summary.v_final;
  sol.iterations = run.summary.iterations;
  sol.converged = run.summary.converged;
  sol.phi_recovered = run.phase;

  double peak = 0.0;
  BasisIndex argmax = 0;
  for (BasisIndex x = 0; x < v.size(); ++x) {
    if (v.probability(x) > peak) {
      peak = v.probability(x);
      argmax = x;
    }
  }
  BasisIndex chosen = argmax;
  if (options.readout == Readout::Sample) {
    Rng rng = make_rng(cfg.seed, "readout");
    double u = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    chosen = v.size() - 1;
    for (BasisIndex x = 0; x < v.size(); ++x) {
      u -= v.probability(x);
      if (u < 0.0) {
        chosen = x;
        break;
      }
    }
  }

  const double ref = v.probability(chosen);
  for (BasisIndex x = 0; x < v.size(); ++x) {
    if (std::abs(v.probability(x) - ref) <= 1e-9 * std::max(ref, 1e-300)) {
      sol.readout_set.push_back(x);
    }
  }
  sol.success_prob = success_probability(v, sol.readout_set);
  sol.index = chosen;
  sol.bits = bits_from_index(sol.index, n);
  sol.value = evaluate(q, sol.bits, options.convention);
  return sol;
}

}  // namespace qpower
