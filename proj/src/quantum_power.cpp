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

#include "qpower/quantum_power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "qpower/error.hpp"
#include "qpower/random.hpp"

namespace qpower {

namespace {

struct AncillaAngles {
  double c;
  double s;
};

// cos/sin of the preparation angle theta with cot(theta) = eta.
AncillaAngles ancilla_angles(double eta) {
  if (eta == 1.0) {
    return {std::numbers::sqrt2 / 2.0, std::numbers::sqrt2 / 2.0};
  }
  const double theta = std::atan2(1.0, eta);
  return {std::cos(theta), std::sin(theta)};
}

std::optional<StateVector> normalized_branch(std::vector<Complex> amps,
                                             double norm) {
  if (norm < kDeadBranchNorm) {
    return std::nullopt;
  }
  const double inv = 1.0 / norm;
  for (auto& a : amps) {
    a *= inv;
  }
  return StateVector(std::move(amps));
}

}  // namespace

void EngineConfig::validate() const {
  check_shift(eta);
  if (max_iterate < 1) {
    throw InvalidArgument("max_iterate must be >= 1");
  }
  if (!(tol > 0.0)) {
    throw InvalidArgument("tol must be > 0");
  }
  if (window < 1 || tomography_stride < 1) {
    throw InvalidArgument("window and tomography_stride must be >= 1");
  }
}

BranchOutcome hadamard_test_step(const Operator& op, const StateVector& v,
                                 double eta) {
  check_shift(eta);
  const auto [c, s] = ancilla_angles(eta);
  const StateVector uv = apply(op, v);
  constexpr double h = std::numbers::sqrt2 / 2.0;

  // After controlled-U and the final Hadamard the joint state is
  // |0> (c v + s Uv)/sqrt2 + |1> (c v - s Uv)/sqrt2.
  std::vector<Complex> b0(v.size());
  std::vector<Complex> b1(v.size());
  double n0 = 0.0;
  double n1 = 0.0;
  double shifted = 0.0;
  for (std::size_t x = 0; x < v.size(); ++x) {
    b0[x] = h * (c * v[x] + s * uv[x]);
    b1[x] = h * (c * v[x] - s * uv[x]);
    n0 += std::norm(b0[x]);
    n1 += std::norm(b1[x]);
    shifted += std::norm(eta * v[x] - uv[x]);
  }

  BranchOutcome out;
  out.p0 = n0;
  out.p1 = n1;
  out.alpha = std::sqrt(shifted);
  out.state0 = normalized_branch(std::move(b0), std::sqrt(n0));
  out.state1 = normalized_branch(std::move(b1), std::sqrt(n1));
  if (!out.state0) {
    out.p0 = 0.0;
  }
  if (!out.state1) {
    out.p1 = 0.0;
  }
  return out;
}

double recover_phase(double alpha) {
  if (!(alpha >= 0.0) || alpha > 2.0 + 1e-12) {
    throw DomainError("recover_phase needs alpha in [0, 2], got " +
                      std::to_string(alpha));
  }
  alpha = std::min(alpha, 2.0);
  return std::acos(std::max(-1.0, 1.0 - alpha * alpha / 2.0));
}

std::optional<double> recover_phase(double alpha, double eta) {
  if (eta == 1.0) {
    if (!(alpha >= 0.0) || alpha > 2.0 + 1e-12) {
      return std::nullopt;
    }
    return recover_phase(alpha);
  }
  if (!(eta > 0.0) || !(alpha >= 0.0)) {
    return std::nullopt;
  }
  // |eta - e^{i phi}|^2 = eta^2 + 1 - 2 eta cos(phi)
  double cosine = (eta * eta + 1.0 - alpha * alpha) / (2.0 * eta);
  if (cosine > 1.0 + 1e-12 || cosine < -1.0 - 1e-12) {
    return std::nullopt;
  }
  cosine = std::clamp(cosine, -1.0, 1.0);
  return std::acos(cosine);
}

bool tomography_converged(const PowerTrace& trace, const EngineConfig& cfg) {
  if (trace.records.empty() || cfg.window == 0 || cfg.tomography_stride == 0) {
    return false;
  }
  // records[i].k == i + 1
  const std::size_t last_k = trace.records.back().k;
  const std::size_t last_sample = last_k / cfg.tomography_stride;
  if (last_sample < cfg.window) {
    return false;
  }
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t j = 0; j < cfg.window; ++j) {
    const std::size_t k = (last_sample - j) * cfg.tomography_stride;
    const double p1 = trace.records[k - 1].p1;
    lo = std::min(lo, p1);
    hi = std::max(hi, p1);
  }
  return hi - lo < cfg.tol;
}

EngineResult iterate(const Operator& op, const StateVector& v0,
                     const EngineConfig& cfg,
                     std::span<const BasisIndex> dominant_set) {
  cfg.validate();
  if (num_qubits(op) != v0.num_qubits()) {
    throw DimensionError("operator and initial state sizes differ");
  }

  EngineResult result;
  result.trace.mode = cfg.mode;
  result.trace.seed = cfg.seed;
  result.trace.records.reserve(std::min<std::size_t>(cfg.max_iterate, 1U << 16));
  result.summary.v_final = v0;

  Rng branch_rng = make_rng(cfg.seed, "branch");
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  for (std::size_t k = 1; k <= cfg.max_iterate; ++k) {
    BranchOutcome step = hadamard_test_step(op, result.summary.v_final, cfg.eta);

    int branch = 1;
    if (cfg.mode == CollapseMode::PostSelect) {
      if (!step.state1) {
        throw DeadBranchError(
            "outcome-1 branch has zero probability at iteration " +
            std::to_string(k) + " (iterate is an eigenvector with eigenvalue "
            "eta)");
      }
    } else {
      branch = coin(branch_rng) < step.p1 ? 1 : 0;
      // The impossible outcome never occurs physically.
      if (branch == 1 && !step.state1) {
        branch = 0;
      } else if (branch == 0 && !step.state0) {
        branch = 1;
      }
    }

    TraceRecord rec;
    rec.k = k;
    rec.branch = branch;
    rec.p1 = step.p1;
    rec.alpha = step.alpha;
    rec.phi_estimate = recover_phase(step.alpha, cfg.eta);

    result.summary.v_final =
        branch == 1 ? std::move(*step.state1) : std::move(*step.state0);
    if (!dominant_set.empty()) {
      rec.success_prob =
          success_probability(result.summary.v_final, dominant_set);
    }
    result.summary.alpha_final = step.alpha;
    result.summary.alpha_history.push_back(step.alpha);
    result.summary.iterations = k;
    result.trace.records.push_back(rec);

    if (k % cfg.tomography_stride == 0 &&
        tomography_converged(result.trace, cfg)) {
      result.summary.converged = true;
      break;
    }
  }

  if (result.summary.converged) {
    result.phase = recover_phase(result.summary.alpha_final, cfg.eta);
  }
  return result;
}

StateVector analytic_diagonal_iterate(const DiagonalOperator& op,
                                      const StateVector& v0, std::size_t k,
                                      double eta) {
  check_shift(eta);
  if (op.num_qubits() != v0.num_qubits()) {
    throw DimensionError("operator and initial state sizes differ");
  }
  if (k == 0) {
    return v0;
  }
  const auto phases = op.phases();
  const double kd = static_cast<double>(k);
  constexpr double minus_inf = -std::numeric_limits<double>::infinity();

  std::vector<double> log_mag(v0.size(), minus_inf);
  std::vector<double> angle(v0.size(), 0.0);
  double peak = minus_inf;
  for (std::size_t x = 0; x < v0.size(); ++x) {
    const Complex factor = Complex{eta, 0.0} - std::polar(1.0, phases[x]);
    const double m = std::abs(factor);
    const double a0 = std::abs(v0[x]);
    if (m == 0.0 || a0 == 0.0) {
      continue;
    }
    log_mag[x] = kd * std::log(m) + std::log(a0);
    angle[x] = kd * std::arg(factor) + std::arg(v0[x]);
    peak = std::max(peak, log_mag[x]);
  }
  if (peak == minus_inf) {
    throw DegenerateIterateError(
        "every component of (eta I - U)^k v0 vanishes");
  }

  std::vector<Complex> w(v0.size());
  double sum = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x) {
    if (log_mag[x] == minus_inf) {
      continue;
    }
    w[x] = std::polar(std::exp(log_mag[x] - peak), angle[x]);
    sum += std::norm(w[x]);
  }
  const double inv = 1.0 / std::sqrt(sum);
  for (auto& a : w) {
    a *= inv;
  }
  return StateVector(std::move(w));
}

double success_probability(const StateVector& v,
                           std::span<const BasisIndex> dominant_set) {
  if (dominant_set.empty()) {
    throw InvalidArgument("dominant set must be nonempty");
  }
  double mass = 0.0;
  for (const auto x : dominant_set) {
    if (x >= v.size()) {
      throw DimensionError("dominant index out of range");
    }
    mass += v.probability(x);
  }
  return mass;
}

std::vector<BasisIndex> dominant_indices(const DiagonalOperator& op, double eta,
                                         double tie) {
  const auto phases = op.phases();
  double best = 0.0;
  for (const double phi : phases) {
    best = std::max(best, shifted_magnitude(phi, eta));
  }
  std::vector<BasisIndex> out;
  for (std::size_t x = 0; x < phases.size(); ++x) {
    if (shifted_magnitude(phases[x], eta) >= best - tie) {
      out.push_back(x);
    }
  }
  return out;
}

}  // namespace qpower
