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

/**
 * @file
 * Classical shifted power iteration v_k = (eta I - U) v_{k-1} / alpha_k.
 * This is the reference the measurement-driven engine is checked against.
 */

#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "qpower/core.hpp"

namespace qpower {

/// Iterates with alpha below this are treated as the zero vector.
inline constexpr double kDegenerateAlpha = 1e-14;

struct ShiftedStep {
  StateVector v;
  double alpha = 0.0;  ///< ||(eta I - U) v||
};

/**
 * @brief One step of the shifted power method.
 *
 * Throws DegenerateIterateError when ||(eta I - U) v|| < 1e-14, i.e. v lies in
 * the eigenspace of eigenvalue eta.
 */
ShiftedStep shifted_step(const Operator& op, const StateVector& v,
                         double eta = 1.0);

struct ClassicalResult {
  StateVector v_final;
  double alpha_final = 0.0;
  std::vector<double> alpha_history;
  std::size_t iterations = 0;
  bool converged = false;
};

struct ClassicalOptions {
  double eta = 1.0;
  double tol = 1e-10;
  /// Consecutive iterations with |alpha_k - alpha_{k-1}| < tol required.
  std::size_t window = 3;
  /// When unset, 10 * ceil(estimate_iterations) from the operator spectrum.
  std::optional<std::size_t> max_iterate;
};

ClassicalResult run_shifted_power(const Operator& op, const StateVector& v0,
                                  const ClassicalOptions& options = {});

/// |eta - e^{i phi}|.
double shifted_magnitude(double phi, double eta = 1.0);

/// n / ln(r1 / r2). Throws DomainError unless r1 > r2 > 0.
double estimate_iterations_from_magnitudes(double r1, double r2, unsigned n);

/// n / ln(|eta - e^{i phi1}| / |eta - e^{i phi2}|), natural log.
double estimate_iterations(double phi1, double phi2, unsigned n,
                           double eta = 1.0);

/// Eigenphases of any operator representation (exact for diagonal and
/// circuits, eigen-decomposition for dense).
std::vector<double> spectrum_phases(const Operator& op);

/// Largest and second-largest distinct |eta - lambda| over the spectrum.
struct DominantPair {
  double r1 = 0.0;
  double r2 = 0.0;
  std::size_t multiplicity = 0;  ///< eigenvalues sharing r1
};
DominantPair dominant_pair(std::span<const double> phases, double eta = 1.0);

/// factor * ceil(estimate_iterations) for the operator's own spectrum.
/// Throws InvalidArgument when there is no second distinct magnitude.
std::size_t default_max_iterate(const Operator& op, double eta, double factor);

void check_shift(double eta);

}  // namespace qpower
