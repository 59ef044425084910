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

#include "qpower/classical_power.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "qpower/error.hpp"

namespace qpower {

void check_shift(double eta) {
  if (!(eta >= 0.0) || !std::isfinite(eta)) {
    throw InvalidArgument("shift eta must be a finite real >= 0, got " +
                          std::to_string(eta));
  }
}

ShiftedStep shifted_step(const Operator& op, const StateVector& v,
                         double eta) {
  check_shift(eta);
  const StateVector uv = apply(op, v);
  std::vector<Complex> w(v.size());
  double sum = 0.0;
  for (std::size_t x = 0; x < w.size(); ++x) {
    w[x] = eta * v[x] - uv[x];
    sum += std::norm(w[x]);
  }
  const double alpha = std::sqrt(sum);
  if (alpha < kDegenerateAlpha) {
    throw DegenerateIterateError(
        "(eta I - U) v vanished: the iterate lies in the eigenspace of "
        "eigenvalue eta");
  }
  const double inv = 1.0 / alpha;
  for (auto& a : w) {
    a *= inv;
  }
  return {StateVector(std::move(w)), alpha};
}

ClassicalResult run_shifted_power(const Operator& op, const StateVector& v0,
                                  const ClassicalOptions& options) {
  check_shift(options.eta);
  if (!(options.tol > 0.0) || options.window == 0) {
    throw InvalidArgument("tol must be > 0 and window >= 1");
  }
  const std::size_t max_iterate =
      options.max_iterate ? *options.max_iterate
                          : default_max_iterate(op, options.eta, 10.0);
  if (max_iterate == 0) {
    throw InvalidArgument("max_iterate must be >= 1");
  }

  ClassicalResult result;
  result.v_final = v0;
  std::size_t stable = 0;
  for (std::size_t k = 1; k <= max_iterate; ++k) {
    auto step = shifted_step(op, result.v_final, options.eta);
    if (!result.alpha_history.empty() &&
        std::abs(step.alpha - result.alpha_history.back()) < options.tol) {
      ++stable;
    } else {
      stable = 0;
    }
    result.v_final = std::move(step.v);
    result.alpha_final = step.alpha;
    result.alpha_history.push_back(step.alpha);
    result.iterations = k;
    if (stable >= options.window) {
      result.converged = true;
      break;
    }
  }
  return result;
}

double shifted_magnitude(double phi, double eta) {
  return std::abs(Complex{eta, 0.0} - std::polar(1.0, phi));
}

double estimate_iterations_from_magnitudes(double r1, double r2, unsigned n) {
  if (!(r2 > 0.0) || !(r1 > r2)) {
    throw DomainError(
        "iteration estimate needs |eta - lambda1| > |eta - lambda2| > 0 "
        "(no unique dominant eigenvalue)");
  }
  return static_cast<double>(n) / std::log(r1 / r2);
}

double estimate_iterations(double phi1, double phi2, unsigned n, double eta) {
  check_shift(eta);
  return estimate_iterations_from_magnitudes(shifted_magnitude(phi1, eta),
                                             shifted_magnitude(phi2, eta), n);
}

std::vector<double> spectrum_phases(const Operator& op) {
  if (const auto* d = std::get_if<DiagonalOperator>(&op)) {
    return {d->phases().begin(), d->phases().end()};
  }
  if (const auto* c = std::get_if<PhaseCircuit>(&op)) {
    const auto diag = circuit_to_diagonal(*c);
    return {diag.phases().begin(), diag.phases().end()};
  }
  const auto& dense = std::get<DenseOperator>(op);
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense.matrix(),
                                                           false);
  std::vector<double> phases;
  phases.reserve(static_cast<std::size_t>(solver.eigenvalues().size()));
  for (const auto& lambda : solver.eigenvalues()) {
    phases.push_back(std::arg(lambda));
  }
  return phases;
}

DominantPair dominant_pair(std::span<const double> phases, double eta) {
  constexpr double tie = 1e-12;
  DominantPair pair;
  for (const double phi : phases) {
    pair.r1 = std::max(pair.r1, shifted_magnitude(phi, eta));
  }
  for (const double phi : phases) {
    const double r = shifted_magnitude(phi, eta);
    if (r >= pair.r1 - tie) {
      ++pair.multiplicity;
    } else {
      pair.r2 = std::max(pair.r2, r);
    }
  }
  return pair;
}

std::size_t default_max_iterate(const Operator& op, double eta,
                                double factor) {
  const auto phases = spectrum_phases(op);
  const auto pair = dominant_pair(phases, eta);
  if (pair.multiplicity == phases.size() || !(pair.r2 > 0.0)) {
    throw InvalidArgument(
        "spectrum has no second distinct |eta - lambda|; supply max_iterate");
  }
  const double estimate =
      estimate_iterations_from_magnitudes(pair.r1, pair.r2, num_qubits(op));
  return static_cast<std::size_t>(factor * std::ceil(estimate));
}

}  // namespace qpower
