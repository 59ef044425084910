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
 * Quadratic assignment: n facilities onto n locations, minimizing
 * sum f_ij d_kp x_ik x_jp + sum b_ik x_ik over permutation matrices X.
 * x_ik = 1 means facility i sits at location k.
 */

#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "qpower/qubo.hpp"

namespace qpower {

/// Flow F, distance D and allocation cost B, all n x n.
class QapInstance {
 public:
  QapInstance() = default;
  QapInstance(Eigen::MatrixXd flow, Eigen::MatrixXd distance,
              Eigen::MatrixXd allocation);

  [[nodiscard]] unsigned size() const { return n_; }
  [[nodiscard]] const Eigen::MatrixXd& flow() const { return flow_; }
  [[nodiscard]] const Eigen::MatrixXd& distance() const { return distance_; }
  [[nodiscard]] const Eigen::MatrixXd& allocation() const {
    return allocation_;
  }

 private:
  unsigned n_ = 0;
  Eigen::MatrixXd flow_;
  Eigen::MatrixXd distance_;
  Eigen::MatrixXd allocation_;
};

/// n x n 0/1 matrix; feasible iff it is a permutation matrix.
struct AssignmentMatrix {
  Eigen::MatrixXd x;

  [[nodiscard]] unsigned size() const {
    return static_cast<unsigned>(x.rows());
  }
  [[nodiscard]] bool feasible() const;
  /// location of each facility, when feasible
  [[nodiscard]] std::optional<std::vector<unsigned>> permutation() const;
};

AssignmentMatrix assignment_from_permutation(std::span<const unsigned> perm);

/// Quadruple sum plus the linear allocation term.
double objective_sum(const QapInstance& inst, const AssignmentMatrix& a);

/// trace(F X D^T X^T + B X^T), equal to the quadruple sum for any X.
double objective_trace(const QapInstance& inst, const AssignmentMatrix& a);

/// vec(X)^T K vec(X) + vec(B)^T vec(X) with column-major vec and
/// K[(k n + i), (p n + j)] = f_ij d_kp, the F (x) D pairing that matches the
/// column-major stacking.
double objective_kron(const QapInstance& inst, const AssignmentMatrix& a);

/// Variable index of x_ik in the n^2-variable QUBO.
inline unsigned qap_variable(unsigned i, unsigned k, unsigned n) {
  return i * n + k;
}

struct QapQubo {
  QuboInstance qubo;      ///< Minimize sense
  double constant = 0.0;  ///< 2 n P, add to a QUBO value to get the objective
  double penalty = 0.0;
  unsigned n = 0;
  ObjectiveBounds objective_bounds;  ///< of the unpenalized objective part
};

/// upper - lower of the coefficient-sign bounds of the objective terms.
double objective_spread(const QapInstance& inst);

/// 2 * spread + 1.
double default_penalty(const QapInstance& inst);

/**
 * @brief Rewrites the assignment problem as an unconstrained 0/1 problem
 * over n^2 variables with P (row sum - 1)^2 + P (col sum - 1)^2 penalties.
 *
 * Coefficients that cancel to exactly zero are dropped. Throws
 * InvalidArgument when @p penalty does not exceed the objective spread.
 */
QapQubo qap_to_qubo(const QapInstance& inst,
                    std::optional<double> penalty = std::nullopt);

struct QapOptimum {
  std::vector<unsigned> permutation;
  double value = 0.0;
};

/// Exhaustive minimum over all n! permutations, n <= 8; ties go to the
/// lexicographically smallest permutation.
QapOptimum brute_force_qap(const QapInstance& inst);

struct DecodedAssignment {
  AssignmentMatrix assignment;
  bool feasible = false;
};

/// Row-major fill: bit i n + k is x_ik. Infeasibility is a flag, not an error.
DecodedAssignment decode_assignment(std::span<const std::uint8_t> bits,
                                    unsigned n);

struct QapSolution {
  QapQubo reduction;
  Solution solution;
  DecodedAssignment decoded;
  std::optional<std::vector<unsigned>> permutation;
  std::optional<double> objective;  ///< when the readout is feasible
};

/// Reduce, solve in Minimize sense, decode. Limited to n <= 4 (16 qubits).
QapSolution solve_qap(const QapInstance& inst, const SolveOptions& options = {},
                      std::optional<double> penalty = std::nullopt);

inline constexpr unsigned kMaxQapSolveSize = 4;
inline constexpr unsigned kMaxQapBruteForceSize = 8;

}  // namespace qpower
