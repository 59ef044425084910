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
 * QUBO and Ising instances, their compilation into circuits of diagonal
 * phase gates (one single-qubit gate per variable, one controlled gate per
 * quadratic term) and the end-to-end solver built on the power iteration.
 */

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qpower/core.hpp"
#include "qpower/quantum_power.hpp"

namespace qpower {

enum class Sense { Maximize, Minimize };

/// Which (alpha, beta) pair the gates use: Binary01 is (0, 1) and encodes
/// x in {0, 1}; IsingPM is (1, -1) and encodes the spin s = (-1)^x.
enum class GateConvention { Binary01, IsingPM };

struct QuadraticTerm {
  unsigned j = 0;
  unsigned k = 0;
  double q = 0.0;
};

/// sum_j c_j x_j + sum_{j<k} q_jk x_j x_k. Quadratic terms are kept sorted by
/// (j, k); j < k < n and no pair may repeat.
class QuboInstance {
 public:
  QuboInstance() = default;
  QuboInstance(unsigned n, std::vector<double> linear,
               std::vector<QuadraticTerm> quadratic,
               Sense sense = Sense::Maximize);

  [[nodiscard]] unsigned num_variables() const { return n_; }
  [[nodiscard]] std::span<const double> linear() const { return linear_; }
  [[nodiscard]] std::span<const QuadraticTerm> quadratic() const {
    return quadratic_;
  }
  [[nodiscard]] Sense sense() const { return sense_; }
  [[nodiscard]] QuboInstance with_sense(Sense sense) const;
  /// Same instance with every coefficient negated.
  [[nodiscard]] QuboInstance negated() const;

 private:
  unsigned n_ = 0;
  std::vector<double> linear_;
  std::vector<QuadraticTerm> quadratic_;
  Sense sense_ = Sense::Maximize;
};

using Bitstring = std::vector<std::uint8_t>;

Bitstring bits_from_index(BasisIndex x, unsigned n);
BasisIndex index_from_bits(std::span<const std::uint8_t> bits);
/// "x_0 x_1 ... x_{n-1}" as characters, e.g. "10" for x_0 = 1, x_1 = 0.
std::string bits_to_string(std::span<const std::uint8_t> bits);

/// Objective value; IsingPM evaluates with spins s_j = (-1)^{x_j}.
double evaluate(const QuboInstance& q, std::span<const std::uint8_t> x,
                GateConvention conv = GateConvention::Binary01);
double evaluate_index(const QuboInstance& q, BasisIndex x,
                      GateConvention conv = GateConvention::Binary01);

struct ObjectiveBounds {
  double lower = 0.0;
  double upper = 0.0;
};

/// Bounds from coefficient signs, valid for every assignment.
ObjectiveBounds coefficient_bounds(
    const QuboInstance& q, GateConvention conv = GateConvention::Binary01);

/**
 * @brief Maps objective values onto eigenphases in [0, pi/2].
 *
 * Maximize: phase = s (H - lower). Minimize: phase = s (upper - H). Either
 * way the optimum gets the largest phase and therefore the largest
 * |1 - e^{i phase}|. The constant part of the map is the offset.
 */
struct ScalingPlan {
  double s = 1.0;
  double offset = 0.0;
  double lower_bound = 0.0;
  double upper_bound = 0.0;
  Sense sense = Sense::Maximize;

  [[nodiscard]] double phase_of(double value) const;
  [[nodiscard]] double value_of(double phase) const;
};

/// Throws ConstantObjectiveError when the bounds coincide.
ScalingPlan make_scaling(const QuboInstance& q, Sense sense,
                         GateConvention conv = GateConvention::Binary01);

/// s = 1, offset 0. Used for constant objectives where no plan exists.
ScalingPlan unit_scaling(const QuboInstance& q, Sense sense,
                         GateConvention conv = GateConvention::Binary01);

/**
 * @brief Emits the phase circuit: one SinglePhase per variable, one
 * ControlledPhase per quadratic term, then one uniform offset gate on
 * qubit 0.
 *
 * Phases are the scaled coefficients in radians. Under IsingPM each
 * controlled gate carries -2 q_jk and the target's single-qubit gate absorbs
 * q_jk, because a gate that only fires on control = 1 realizes
 * q s_j s_k = q s_k - 2 q x_j s_k.
 */
PhaseCircuit compile(const QuboInstance& q, GateConvention conv,
                     const ScalingPlan& plan);

/// Objective gates for n variables and m quadratic terms: n + m. Throws
/// InvalidArgument when m > n (n - 1) / 2.
std::size_t gate_count(unsigned n, std::size_t m);

struct Optimum {
  Bitstring bits;
  BasisIndex index = 0;
  double value = 0.0;
};

/// Exhaustive search in the instance's sense; ties go to the smallest index.
Optimum brute_force_optimum(const QuboInstance& q,
                            GateConvention conv = GateConvention::Binary01,
                            const Limits& limits = {});

struct IsingModel {
  QuboInstance instance;
  GateConvention convention = GateConvention::IsingPM;
};

/// H = sum J_ij s_i s_j on n spins; each coupling needs i < j < n.
IsingModel ising_from_couplings(unsigned n,
                                std::vector<QuadraticTerm> couplings,
                                Sense sense = Sense::Minimize);

/// The spin form of a 0/1 instance: H(x) = constant + H_ising(s).
struct IsingReformulation {
  QuboInstance ising;
  double constant = 0.0;
};
IsingReformulation to_ising(const QuboInstance& q);

enum class Readout { Argmax, Sample };

struct SolveOptions {
  EngineConfig engine;
  GateConvention convention = GateConvention::Binary01;
  Readout readout = Readout::Argmax;
  double target = 0.5;
  /// Unset: 50 * ceil(estimate_iterations) of the compiled spectrum.
  std::optional<std::size_t> max_iterate;
  Limits limits;
};

struct Solution {
  Bitstring bits;
  BasisIndex index = 0;
  double value = 0.0;
  std::size_t iterations = 0;
  bool converged = false;
  std::optional<double> phi_recovered;
  double success_prob = 0.0;
  /// Basis states whose probability ties with the readout (degenerate optima).
  std::vector<BasisIndex> readout_set;
  ScalingPlan plan;
  std::size_t gate_count = 0;

  [[nodiscard]] bool confident(double target) const {
    return success_prob >= target;
  }
};

/// Compile, iterate from the equal superposition, read out.
Solution solve(const QuboInstance& q, const SolveOptions& options = {});

}  // namespace qpower
