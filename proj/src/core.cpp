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

#include "qpower/core.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "qpower/error.hpp"
#include "qpower/random.hpp"

namespace qpower {

namespace {

unsigned qubits_for_length(std::size_t length, const char* what) {
  if (length < 2 || !std::has_single_bit(length)) {
    throw DimensionError(std::string(what) +
                         ": length must be a power of two >= 2, got " +
                         std::to_string(length));
  }
  return static_cast<unsigned>(std::countr_zero(length));
}

void check_same_qubits(unsigned op_n, const StateVector& v) {
  if (op_n != v.num_qubits()) {
    throw DimensionError("operator acts on " + std::to_string(op_n) +
                         " qubits, state has " +
                         std::to_string(v.num_qubits()));
  }
}

}  // namespace

void check_state_qubits(unsigned n, const Limits& limits) {
  if (n == 0) {
    throw CapacityError("qubit count must be at least 1");
  }
  if (n > limits.max_state_qubits) {
    throw CapacityError("n = " + std::to_string(n) + " exceeds the cap of " +
                        std::to_string(limits.max_state_qubits) +
                        " qubits for state storage");
  }
}

StateVector::StateVector(std::vector<Complex> amps)
    : n_(qubits_for_length(amps.size(), "StateVector")),
      amps_(std::move(amps)) {}

StateVector StateVector::basis(unsigned n, BasisIndex x, const Limits& limits) {
  check_state_qubits(n, limits);
  std::vector<Complex> amps(std::size_t{1} << n);
  if (x >= amps.size()) {
    throw DimensionError("basis index out of range");
  }
  amps[x] = 1.0;
  return StateVector(std::move(amps));
}

double StateVector::norm() const {
  double sum = 0.0;
  for (const auto& a : amps_) {
    sum += std::norm(a);
  }
  return std::sqrt(sum);
}

StateVector StateVector::normalized() const {
  const double nrm = norm();
  if (!(nrm > 0.0)) {
    throw DegenerateIterateError("cannot normalize a zero vector");
  }
  std::vector<Complex> out(amps_.size());
  const double inv = 1.0 / nrm;
  std::transform(amps_.begin(), amps_.end(), out.begin(),
                 [inv](const Complex& a) { return a * inv; });
  return StateVector(std::move(out));
}

StateVector equal_superposition(unsigned n, const Limits& limits) {
  check_state_qubits(n, limits);
  const std::size_t dim = std::size_t{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(dim));
  return StateVector(std::vector<Complex>(dim, Complex{amp, 0.0}));
}

DiagonalOperator::DiagonalOperator(std::vector<double> phases)
    : n_(qubits_for_length(phases.size(), "DiagonalOperator")),
      phases_(std::move(phases)) {}

DenseOperator::DenseOperator(Eigen::MatrixXcd matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw DimensionError("dense operator must be square");
  }
  n_ = qubits_for_length(static_cast<std::size_t>(matrix.rows()),
                         "DenseOperator");
  const Eigen::MatrixXcd gram = matrix.adjoint() * matrix;
  const auto dim = matrix.rows();
  const double deviation =
      (gram - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (deviation > kUnitarityTol) {
    throw InvalidArgument("dense operator is not unitary: max |U^dag U - I| = " +
                          std::to_string(deviation));
  }
  matrix_ = std::move(matrix);
}

PhaseCircuit::PhaseCircuit(unsigned n) : n_(n) {
  if (n == 0) {
    throw InvalidArgument("circuit needs at least one qubit");
  }
}

void PhaseCircuit::add(const Gate& gate) {
  if (const auto* g = std::get_if<SinglePhase>(&gate)) {
    if (g->qubit >= n_) {
      throw InvalidArgument("phase gate qubit " + std::to_string(g->qubit) +
                            " out of range for " + std::to_string(n_) +
                            " qubits");
    }
  } else {
    const auto& c = std::get<ControlledPhase>(gate);
    if (c.control >= n_ || c.target >= n_) {
      throw InvalidArgument("controlled phase qubit out of range");
    }
    if (c.control == c.target) {
      throw InvalidArgument("controlled phase needs control != target");
    }
  }
  gates_.push_back(gate);
}

unsigned num_qubits(const Operator& op) {
  return std::visit([](const auto& o) { return o.num_qubits(); }, op);
}

StateVector apply(const DiagonalOperator& op, const StateVector& v) {
  check_same_qubits(op.num_qubits(), v);
  std::vector<Complex> out(v.size());
  const auto phases = op.phases();
  for (std::size_t x = 0; x < out.size(); ++x) {
    out[x] = std::polar(1.0, phases[x]) * v[x];
  }
  return StateVector(std::move(out));
}

StateVector apply(const DenseOperator& op, const StateVector& v) {
  check_same_qubits(op.num_qubits(), v);
  const auto in = v.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> vin(in.data(),
                                         static_cast<Eigen::Index>(in.size()));
  std::vector<Complex> out(v.size());
  Eigen::Map<Eigen::VectorXcd> vout(out.data(),
                                    static_cast<Eigen::Index>(out.size()));
  vout.noalias() = op.matrix() * vin;
  return StateVector(std::move(out));
}

StateVector apply(const PhaseCircuit& op, const StateVector& v) {
  check_same_qubits(op.num_qubits(), v);
  const auto in = v.amplitudes();
  std::vector<Complex> amps(in.begin(), in.end());
  for (const auto& gate : op.gates()) {
    if (const auto* g = std::get_if<SinglePhase>(&gate)) {
      const Complex e0 = std::polar(1.0, g->phase0);
      const Complex e1 = std::polar(1.0, g->phase1);
      for (std::size_t x = 0; x < amps.size(); ++x) {
        amps[x] *= ((x >> g->qubit) & 1U) ? e1 : e0;
      }
    } else {
      const auto& c = std::get<ControlledPhase>(gate);
      const Complex e10 = std::polar(1.0, c.phase10);
      const Complex e11 = std::polar(1.0, c.phase11);
      for (std::size_t x = 0; x < amps.size(); ++x) {
        if ((x >> c.control) & 1U) {
          amps[x] *= ((x >> c.target) & 1U) ? e11 : e10;
        }
      }
    }
  }
  return StateVector(std::move(amps));
}

StateVector apply(const Operator& op, const StateVector& v) {
  return std::visit([&v](const auto& o) { return apply(o, v); }, op);
}

double gate_phase(const Gate& gate, BasisIndex x) {
  if (const auto* g = std::get_if<SinglePhase>(&gate)) {
    return ((x >> g->qubit) & 1U) ? g->phase1 : g->phase0;
  }
  const auto& c = std::get<ControlledPhase>(gate);
  if (((x >> c.control) & 1U) == 0) {
    return 0.0;
  }
  return ((x >> c.target) & 1U) ? c.phase11 : c.phase10;
}

DiagonalOperator circuit_to_diagonal(const PhaseCircuit& circuit,
                                     const Limits& limits) {
  const unsigned n = circuit.num_qubits();
  if (n > limits.max_expansion_qubits) {
    throw CapacityError("circuit on " + std::to_string(n) +
                        " qubits exceeds the diagonal expansion cap of " +
                        std::to_string(limits.max_expansion_qubits));
  }
  check_state_qubits(n, limits);
  std::vector<double> phases(std::size_t{1} << n, 0.0);
  for (const auto& gate : circuit.gates()) {
    for (std::size_t x = 0; x < phases.size(); ++x) {
      phases[x] += gate_phase(gate, x);
    }
  }
  for (auto& p : phases) {
    p = reduce_phase(p);
  }
  return DiagonalOperator(std::move(phases));
}

DenseOperator random_unitary(unsigned n, std::uint64_t seed,
                             const Limits& limits) {
  if (n == 0 || n > limits.max_dense_qubits) {
    throw CapacityError("dense operators support 1.." +
                        std::to_string(limits.max_dense_qubits) +
                        " qubits, requested " + std::to_string(n));
  }
  const auto dim = Eigen::Index{1} << n;
  Rng rng = make_rng(seed, "unitary");
  std::normal_distribution<double> gauss(0.0, std::numbers::sqrt2 / 2.0);
  Eigen::MatrixXcd z(dim, dim);
  for (Eigen::Index c = 0; c < dim; ++c) {
    for (Eigen::Index r = 0; r < dim; ++r) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      z(r, c) = Complex{re, im};
    }
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(z);
  Eigen::MatrixXcd q = qr.householderQ();
  const Eigen::MatrixXcd& r = qr.matrixQR();
  // Fix the phase freedom of QR so the distribution is Haar.
  for (Eigen::Index c = 0; c < dim; ++c) {
    const Complex d = r(c, c);
    const double mag = std::abs(d);
    if (mag > 0.0) {
      q.col(c) *= d / mag;
    }
  }
  return DenseOperator(std::move(q));
}

double reduce_phase(double phase) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(phase, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) {
    r += two_pi;
  }
  return r;
}

double phase_distance(double a, double b) {
  return std::abs(reduce_phase(a - b));
}

StateVector canonicalize_global_phase(const StateVector& v) {
  const auto amps = v.amplitudes();
  double max_mag = 0.0;
  for (const auto& a : amps) {
    max_mag = std::max(max_mag, std::abs(a));
  }
  if (max_mag == 0.0) {
    return v;
  }
  std::size_t pivot = 0;
  while (std::abs(amps[pivot]) < max_mag * (1.0 - 1e-9)) {
    ++pivot;
  }
  const Complex rot = std::conj(amps[pivot]) / std::abs(amps[pivot]);
  std::vector<Complex> out(amps.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = amps[i] * rot;
  }
  out[pivot] = Complex{std::abs(amps[pivot]), 0.0};
  return StateVector(std::move(out));
}

double max_abs_diff(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("state sizes differ");
  }
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    worst = std::max(worst, std::abs(a[i] - b[i]));
  }
  return worst;
}

double ray_distance(const StateVector& a, const StateVector& b) {
  if (a.size() != b.size()) {
    throw DimensionError("state sizes differ");
  }
  Complex overlap{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) {
    overlap += std::conj(b[i]) * a[i];
  }
  const Complex rot =
      std::abs(overlap) > 0.0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sum += std::norm(a[i] - rot * b[i]);
  }
  return std::sqrt(sum);
}

}  // namespace qpower
