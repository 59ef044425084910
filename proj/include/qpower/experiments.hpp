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
 * Convergence studies on random diagonal operators with a prescribed gap
 * between the two largest eigenphases: iterations-to-success versus qubit
 * count at fixed gap ("fig2") and versus gap at fixed qubit count ("fig3").
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpower/core.hpp"

namespace qpower {

struct PhaseRange {
  double lo = 0.0;
  double hi = std::numbers::pi / 3.0;
};

struct GappedInstance {
  DiagonalOperator op;
  BasisIndex dominant_index = 0;
  double gap = 0.0;
  PhaseRange range;

  [[nodiscard]] double phi1() const { return op.phases()[dominant_index]; }
  [[nodiscard]] double phi2() const { return phi1() - gap; }
};

/**
 * @brief 2^n uniform phases in @p range with exactly one maximum and the
 * runner-up at max - gap.
 *
 * The largest draw is kept as phi1 (raised to lo + gap if needed), the
 * second-largest is moved to phi1 - gap, and every other draw above that is
 * clamped one ulp below it. Throws InvalidArgument for n < 2, gap <= 0 or
 * gap >= hi - lo.
 */
GappedInstance gen_gapped_diagonal(unsigned n, double gap, PhaseRange range,
                                   std::uint64_t seed,
                                   const Limits& limits = {});

/**
 * @brief Smallest k <= cap with success_probability(iterate_k) >= target for
 * PostSelect iteration on a diagonal operator, via the closed form.
 *
 * For a diagonal operator and a dominant set holding every maximal
 * |eta - lambda|, the success probability is nondecreasing in k, so the
 * search doubles k and then bisects.
 */
std::optional<std::size_t> first_success_iteration(
    const DiagonalOperator& op, const StateVector& v0,
    std::span<const BasisIndex> dominant_set, double target, std::size_t cap,
    double eta = 1.0);

/// Same quantity, stepping the measurement engine one iteration at a time.
std::optional<std::size_t> first_success_iteration_engine(
    const Operator& op, const StateVector& v0,
    std::span<const BasisIndex> dominant_set, double target, std::size_t cap,
    double eta = 1.0);

struct ExperimentRow {
  std::string experiment;
  unsigned n = 0;
  double gap = 0.0;
  std::size_t run_index = 0;
  std::uint64_t seed = 0;
  std::size_t iterations = 0;  ///< 0 when not converged
  bool converged = false;
  double phi1 = 0.0;
  double phi2 = 0.0;
  double estimate = 0.0;  ///< n / ln(|1 - e^{i phi1}| / |1 - e^{i phi2}|)
};

struct GroupSummary {
  std::string experiment;
  unsigned n = 0;
  double gap = 0.0;
  std::size_t runs = 0;
  std::size_t converged = 0;
  double mean_iterations = 0.0;  ///< over converged runs
  double mean_estimate = 0.0;
};

struct ExperimentTable {
  std::vector<ExperimentRow> rows;  ///< sorted by (n, gap, run_index)
  std::vector<GroupSummary> summary;
};

struct ExperimentConfig {
  std::uint64_t seed = 0;
  std::size_t runs = 15;
  double target = 0.5;
  double eta = 1.0;
  /// Per-run iteration cap as a multiple of the iteration estimate.
  double cap_factor = 50.0;
  PhaseRange range;
  unsigned threads = 1;
  Limits limits;
};

ExperimentTable run_fig2(std::span<const unsigned> n_list, double gap,
                         const ExperimentConfig& cfg);

ExperimentTable run_fig3(unsigned n, std::span<const double> gaps,
                         const ExperimentConfig& cfg);

/// Per-run instance seed derived from the experiment seed.
std::uint64_t run_seed(std::uint64_t base, unsigned n, double gap,
                       std::size_t run_index);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit linear_fit(std::span<const double> x, std::span<const double> y);

}  // namespace qpower
