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
 * State vectors and the three interchangeable representations of a unitary
 * operator: a diagonal phase list, a dense matrix and a circuit of diagonal
 * phase gates.
 *
 * Basis convention: bit j of basis index x (x_0 least significant) is the
 * value of qubit j.
 */

#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <variant>
#include <vector>

#include <Eigen/Dense>

namespace qpower {

using Complex = std::complex<double>;
using BasisIndex = std::uint64_t;

/**
 * @brief Desk-scale size guards. Operations that allocate 2^n storage or
 * enumerate 2^n assignments refuse to run above these caps.
 */
struct Limits {
  unsigned max_state_qubits = 26;
  unsigned max_dense_qubits = 10;
  unsigned max_expansion_qubits = 20;  ///< circuit_to_diagonal
  unsigned max_enumeration_qubits = 24;  ///< brute-force oracles
};

void check_state_qubits(unsigned n, const Limits& limits = {});

class StateVector {
 public:
  StateVector() = default;
  /// @p amps must have power-of-two length >= 2. No normalization is applied.
  explicit StateVector(std::vector<Complex> amps);

  static StateVector basis(unsigned n, BasisIndex x, const Limits& limits = {});

  [[nodiscard]] unsigned num_qubits() const { return n_; }
  [[nodiscard]] std::size_t size() const { return amps_.size(); }
  [[nodiscard]] std::span<const Complex> amplitudes() const { return amps_; }
  [[nodiscard]] const Complex& operator[](std::size_t i) const {
    return amps_[i];
  }

  [[nodiscard]] double norm() const;
  [[nodiscard]] double probability(BasisIndex x) const {
    return std::norm(amps_[x]);
  }
  /// Unit-norm copy. Throws DegenerateIterateError on a zero vector.
  [[nodiscard]] StateVector normalized() const;

 private:
  unsigned n_ = 0;
  std::vector<Complex> amps_;
};

/// Every amplitude 2^{-n/2}.
StateVector equal_superposition(unsigned n, const Limits& limits = {});

/// diag(e^{i phases[x]}). Phases are stored as given, never reduced.
class DiagonalOperator {
 public:
  DiagonalOperator() = default;
  explicit DiagonalOperator(std::vector<double> phases);

  [[nodiscard]] unsigned num_qubits() const { return n_; }
  [[nodiscard]] std::size_t size() const { return phases_.size(); }
  [[nodiscard]] std::span<const double> phases() const { return phases_; }
  [[nodiscard]] Complex eigenvalue(BasisIndex x) const {
    return std::polar(1.0, phases_[x]);
  }

 private:
  unsigned n_ = 0;
  std::vector<double> phases_;
};

/// Dense 2^n x 2^n matrix, checked for unitarity on construction.
class DenseOperator {
 public:
  static constexpr double kUnitarityTol = 1e-10;

  DenseOperator() = default;
  explicit DenseOperator(Eigen::MatrixXcd matrix);

  [[nodiscard]] unsigned num_qubits() const { return n_; }
  [[nodiscard]] const Eigen::MatrixXcd& matrix() const { return matrix_; }

 private:
  unsigned n_ = 0;
  Eigen::MatrixXcd matrix_;
};

/// diag(e^{i phase0}, e^{i phase1}) on one qubit.
struct SinglePhase {
  unsigned qubit = 0;
  double phase0 = 0.0;
  double phase1 = 0.0;
};

/// diag(1, 1, e^{i phase10}, e^{i phase11}) in the (control, target) basis.
struct ControlledPhase {
  unsigned control = 0;
  unsigned target = 0;
  double phase10 = 0.0;
  double phase11 = 0.0;
};

using Gate = std::variant<SinglePhase, ControlledPhase>;

/// Ordered list of diagonal phase gates on n qubits.
class PhaseCircuit {
 public:
  PhaseCircuit() = default;
  explicit PhaseCircuit(unsigned n);

  void add(const Gate& gate);
  void add_phase(unsigned qubit, double phase0, double phase1) {
    add(SinglePhase{qubit, phase0, phase1});
  }
  void add_controlled_phase(unsigned control, unsigned target, double phase10,
                            double phase11) {
    add(ControlledPhase{control, target, phase10, phase11});
  }

  [[nodiscard]] unsigned num_qubits() const { return n_; }
  [[nodiscard]] std::span<const Gate> gates() const { return gates_; }
  [[nodiscard]] std::size_t size() const { return gates_.size(); }

 private:
  unsigned n_ = 0;
  std::vector<Gate> gates_;
};

using Operator = std::variant<DiagonalOperator, DenseOperator, PhaseCircuit>;

unsigned num_qubits(const Operator& op);

StateVector apply(const DiagonalOperator& op, const StateVector& v);
StateVector apply(const DenseOperator& op, const StateVector& v);
/// Gates act left to right on the amplitudes; no 2^n phase table is built.
StateVector apply(const PhaseCircuit& op, const StateVector& v);
StateVector apply(const Operator& op, const StateVector& v);

/// Phase contribution of one gate at basis index x.
double gate_phase(const Gate& gate, BasisIndex x);

/// Sum of gate phases at every basis index, each reduced into (-pi, pi].
DiagonalOperator circuit_to_diagonal(const PhaseCircuit& circuit,
                                     const Limits& limits = {});

/// Haar-distributed unitary from the QR decomposition of a seeded complex
/// Gaussian matrix.
DenseOperator random_unitary(unsigned n, std::uint64_t seed,
                             const Limits& limits = {});

/// Representative of @p phase modulo 2*pi in (-pi, pi].
double reduce_phase(double phase);

/// Distance between two angles on the circle, in [0, pi].
double phase_distance(double a, double b);

/// Rotate so the largest-magnitude amplitude (first index on near-ties) is
/// real and positive.
StateVector canonicalize_global_phase(const StateVector& v);

/// Largest elementwise |a_i - b_i|.
double max_abs_diff(const StateVector& a, const StateVector& b);

/// min over theta of ||a - e^{i theta} b||.
double ray_distance(const StateVector& a, const StateVector& b);

}  // namespace qpower
