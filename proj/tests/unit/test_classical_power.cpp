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

#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "qpower/classical_power.hpp"
#include "qpower/error.hpp"

using namespace qpower;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::sqrt(2.0);

}  // namespace

TEST_CASE("shifted step on a sign-flip operator", "[classical]") {
  const Operator u = DiagonalOperator({0.0, kPi});
  const auto step = shifted_step(u, equal_superposition(1));
  CHECK_THAT(step.alpha, WithinAbs(kSqrt2, 1e-15));
  CHECK_THAT(std::abs(step.v[0]), WithinAbs(0.0, 1e-15));
  CHECK_THAT(step.v[1].real(), WithinAbs(1.0, 1e-15));
}

TEST_CASE("shifted step on the identity is degenerate", "[classical]") {
  const Operator u = DiagonalOperator({0.0, 0.0, 0.0, 0.0});
  CHECK_THROWS_AS(shifted_step(u, equal_superposition(2)),
                  DegenerateIterateError);
}

TEST_CASE("shifted step on an eigenvector", "[classical]") {
  const Operator u = DiagonalOperator({0.0, kPi / 2.0});
  const auto step = shifted_step(u, StateVector::basis(1, 1));
  const Complex expected = Complex{1.0, -1.0} / kSqrt2;
  CHECK_THAT(step.alpha, WithinAbs(kSqrt2, 1e-15));
  CHECK(std::abs(step.v[1] - expected) < 1e-15);
  CHECK(std::abs(step.v[0]) == 0.0);
}

TEST_CASE("shifted step agrees across operator representations",
          "[classical][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    PhaseCircuit c(3);
    c.add_phase(0, 0.1 * static_cast<double>(seed), 0.7);
    c.add_controlled_phase(1, 2, 0.2, -1.1);
    c.add_phase(2, 0.4, 1.9);
    const auto diag = circuit_to_diagonal(c);
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(8, 8);
    for (Eigen::Index i = 0; i < 8; ++i) {
      m(i, i) = diag.eigenvalue(static_cast<BasisIndex>(i));
    }
    const auto v = equal_superposition(3);
    for (const double eta : {1.0, 0.5, 2.0}) {
      const auto a = shifted_step(Operator{c}, v, eta);
      const auto b = shifted_step(Operator{diag}, v, eta);
      const auto d = shifted_step(Operator{DenseOperator(m)}, v, eta);
      CHECK(max_abs_diff(a.v, b.v) < 1e-13);
      CHECK(max_abs_diff(a.v, d.v) < 1e-13);
      CHECK_THAT(a.alpha, WithinAbs(b.alpha, 1e-13));
      CHECK_THAT(a.alpha, WithinAbs(d.alpha, 1e-13));
    }
  }
}

TEST_CASE("negative or non-finite shifts are rejected", "[classical]") {
  const Operator u = DiagonalOperator({0.0, kPi});
  CHECK_THROWS_AS(shifted_step(u, equal_superposition(1), -0.5),
                  InvalidArgument);
  CHECK_THROWS_AS(shifted_step(u, equal_superposition(1), std::nan("")),
                  InvalidArgument);
}

TEST_CASE("run converges on the sign-flip operator", "[classical]") {
  const Operator u = DiagonalOperator({0.0, kPi});
  ClassicalOptions opt;
  opt.max_iterate = 50;
  const auto r = run_shifted_power(u, equal_superposition(1), opt);
  REQUIRE(r.converged);
  // after the first step the iterate already sits on (0, 1); every later
  // alpha is |1 - e^{i pi}| = 2 and the window needs three equal deltas
  REQUIRE(r.alpha_history.size() >= 2);
  CHECK_THAT(r.alpha_history[0], WithinAbs(kSqrt2, 1e-15));
  CHECK_THAT(r.alpha_history[1], WithinAbs(2.0, 1e-15));
  CHECK(r.iterations <= 5);
  CHECK_THAT(r.alpha_final, WithinAbs(2.0, 1e-15));
  CHECK_THAT(std::abs(r.v_final[1]), WithinAbs(1.0, 1e-15));
}

TEST_CASE("run from the dominant eigenvector is a fixed point",
          "[classical]") {
  const Operator u = DiagonalOperator({0.3, 2.5, 1.0, -0.4});
  const auto v0 = StateVector::basis(2, 1);
  const auto r = run_shifted_power(u, v0, {});
  CHECK(r.converged);
  CHECK(r.iterations <= 4);
  CHECK(ray_distance(r.v_final, v0) < 1e-14);
  CHECK_THAT(r.alpha_final, WithinAbs(shifted_magnitude(2.5), 1e-14));
}

TEST_CASE("run on a gapless operator keeps both components", "[classical]") {
  const Operator u = DiagonalOperator({kPi / 2.0, -kPi / 2.0});
  ClassicalOptions opt;
  opt.max_iterate = 40;
  const auto r = run_shifted_power(u, equal_superposition(1), opt);
  CHECK(r.converged);
  CHECK_THAT(r.alpha_final, WithinAbs(kSqrt2, 1e-14));
  CHECK_THAT(r.v_final.probability(0), WithinAbs(0.5, 1e-12));
  CHECK_THAT(r.v_final.probability(1), WithinAbs(0.5, 1e-12));
}

TEST_CASE("run reports non-convergence within the budget", "[classical]") {
  const Operator u = DiagonalOperator({2.0, 2.01, 0.1, 0.2});
  ClassicalOptions opt;
  opt.max_iterate = 3;
  const auto r = run_shifted_power(u, equal_superposition(2), opt);
  CHECK_FALSE(r.converged);
  CHECK(r.iterations == 3);
  CHECK(r.alpha_history.size() == 3);
}

TEST_CASE("run rejects invalid options", "[classical]") {
  const Operator u = DiagonalOperator({0.0, kPi});
  ClassicalOptions opt;
  opt.tol = 0.0;
  CHECK_THROWS_AS(run_shifted_power(u, equal_superposition(1), opt),
                  InvalidArgument);
  opt = {};
  opt.max_iterate = 0;
  CHECK_THROWS_AS(run_shifted_power(u, equal_superposition(1), opt),
                  InvalidArgument);
}

TEST_CASE("alpha approaches the dominant magnitude", "[classical][property]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto u = random_unitary(3, seed);
    const auto phases = spectrum_phases(Operator{u});
    const auto pair = dominant_pair(phases);
    ClassicalOptions opt;
    opt.max_iterate = 20000;
    const auto r = run_shifted_power(Operator{u}, equal_superposition(3), opt);
    if (r.converged && pair.r1 - pair.r2 > 1e-3) {
      CHECK_THAT(r.alpha_final, WithinAbs(pair.r1, 1e-6));
    }
  }
}

TEST_CASE("iteration estimate", "[classical]") {
  CHECK_THAT(estimate_iterations(kPi / 2.0, kPi / 4.0, 10),
             WithinRel(10.0 / std::log(std::sin(kPi / 4.0) /
                                       std::sin(kPi / 8.0)),
                       1e-12));
  CHECK_THAT(estimate_iterations(kPi / 2.0, kPi / 4.0, 10),
             WithinAbs(16.2, 0.1));
  CHECK_THROWS_AS(estimate_iterations(0.7, 0.7, 4), DomainError);
  CHECK_THROWS_AS(estimate_iterations(0.5, 0.7, 4), DomainError);

  const double big = estimate_iterations(0.51, 0.50, 20);
  CHECK(big > 500.0);
  CHECK(big < 5000.0);
}

TEST_CASE("shifted magnitude", "[classical]") {
  CHECK_THAT(shifted_magnitude(kPi), WithinAbs(2.0, 1e-15));
  CHECK_THAT(shifted_magnitude(kPi / 2.0), WithinAbs(kSqrt2, 1e-15));
  CHECK_THAT(shifted_magnitude(0.3), WithinAbs(2.0 * std::sin(0.15), 1e-15));
  CHECK_THAT(shifted_magnitude(kPi, 2.0), WithinAbs(3.0, 1e-15));
}

TEST_CASE("dominant pair and default budget", "[classical]") {
  const double phases[] = {0.1, 1.2, 0.9, 1.2 - 0.05};
  const auto pair = dominant_pair(phases);
  CHECK_THAT(pair.r1, WithinAbs(shifted_magnitude(1.2), 1e-15));
  CHECK_THAT(pair.r2, WithinAbs(shifted_magnitude(1.15), 1e-15));

  const Operator op = DiagonalOperator({0.1, 1.2, 0.9, 1.15});
  const double est =
      estimate_iterations_from_magnitudes(pair.r1, pair.r2, 2);
  CHECK(default_max_iterate(op, 1.0, 10.0) ==
        static_cast<std::size_t>(10.0 * std::ceil(est)));

  const Operator flat = DiagonalOperator({0.5, -0.5});
  CHECK_THROWS_AS(default_max_iterate(flat, 1.0, 10.0), InvalidArgument);
}
