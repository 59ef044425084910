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
 * Measurement-driven shifted power iteration.
 *
 * One iteration is a Hadamard-test circuit: an ancilla prepared as
 * cos(theta)|0> + sin(theta)|1> with cot(theta) = eta controls U on the work
 * register, then a Hadamard on the ancilla and a measurement. Outcome 1 leaves
 * the register in (eta I - U) v / ||(eta I - U) v||, which is one step of the
 * classical shifted power method. For eta = 1 the preparation is a Hadamard
 * and p1 = ||(I - U) v||^2 / 4.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qpower/classical_power.hpp"
#include "qpower/core.hpp"

namespace qpower {

enum class CollapseMode {
  PostSelect,  ///< always keep ancilla outcome 1
  Sample,      ///< draw the outcome from its probability
};

/// Branches with norm below this are reported with p = 0 and no state.
inline constexpr double kDeadBranchNorm = 1e-14;

struct BranchOutcome {
  double p0 = 0.0;
  double p1 = 0.0;
  std::optional<StateVector> state0;
  std::optional<StateVector> state1;
  double alpha = 0.0;  ///< ||(eta I - U) v||, not halved
};

/// Simulates the ancilla circuit and returns both post-measurement branches.
BranchOutcome hadamard_test_step(const Operator& op, const StateVector& v,
                                 double eta = 1.0);

struct TraceRecord {
  std::size_t k = 0;
  int branch = 1;
  double p1 = 0.0;
  double alpha = 0.0;
  std::optional<double> phi_estimate;
  std::optional<double> success_prob;
};

struct PowerTrace {
  std::vector<TraceRecord> records;
  CollapseMode mode = CollapseMode::PostSelect;
  std::uint64_t seed = 0;
};

struct EngineConfig {
  double eta = 1.0;
  CollapseMode mode = CollapseMode::PostSelect;
  double tol = 1e-6;  ///< on successive sampled p1 values
  std::size_t window = 3;
  std::size_t max_iterate = 1000;
  std::uint64_t seed = 0;
  std::size_t tomography_stride = 5;

  void validate() const;
};

struct EngineResult {
  ClassicalResult summary;
  PowerTrace trace;
  /// Eigenphase recovered from the final alpha; set only when converged.
  std::optional<double> phase;
};

/**
 * @brief Runs the iteration from @p v0 until the ancilla statistics settle
 * or max_iterate is reached.
 *
 * In PostSelect mode the iterates coincide with run_shifted_power. Sample mode
 * draws each outcome from the "branch" sub-stream of cfg.seed and keeps
 * following branch-0 trajectories. When @p dominant_set is nonempty each
 * record carries the success probability of the current iterate.
 *
 * Throws DeadBranchError if PostSelect must follow a zero-probability branch.
 * Exhausting max_iterate is reported through summary.converged.
 */
EngineResult iterate(const Operator& op, const StateVector& v0,
                     const EngineConfig& cfg,
                     std::span<const BasisIndex> dominant_set = {});

/// arccos(1 - alpha^2 / 2). Throws DomainError for alpha outside [0, 2];
/// values within 1e-12 above 2 are clamped.
double recover_phase(double alpha);

/// Phase whose |eta - e^{i phi}| equals alpha, in [0, pi]. Equals
/// recover_phase(alpha) for eta = 1; empty when no such phase exists.
std::optional<double> recover_phase(double alpha, double eta);

/// True iff the last cfg.window p1 values recorded at iterations divisible by
/// cfg.tomography_stride lie within cfg.tol of each other.
bool tomography_converged(const PowerTrace& trace, const EngineConfig& cfg);

/**
 * @brief k PostSelect iterations on a diagonal operator in closed form,
 * normalize(w) with w_x = (eta - e^{i phi_x})^k v0_x.
 *
 * Works in log-magnitude/angle form and rescales by the largest magnitude
 * before exponentiating, so large k does not underflow.
 */
StateVector analytic_diagonal_iterate(const DiagonalOperator& op,
                                      const StateVector& v0, std::size_t k,
                                      double eta = 1.0);

/// Sum of |v_x|^2 over @p dominant_set (nonempty).
double success_probability(const StateVector& v,
                           std::span<const BasisIndex> dominant_set);

/// Basis states of a diagonal operator attaining the maximal |eta - lambda|.
std::vector<BasisIndex> dominant_indices(const DiagonalOperator& op,
                                         double eta = 1.0,
                                         double tie = 1e-12);

}  // namespace qpower
