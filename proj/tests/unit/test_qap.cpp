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

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "qpower/error.hpp"
#include "qpower/qap.hpp"
#include "qpower/random.hpp"

using namespace qpower;
using Catch::Matchers::WithinAbs;

namespace {

QapInstance random_qap(unsigned n, std::uint64_t seed, bool with_b = true) {
  Rng rng(seed);
  std::uniform_int_distribution<int> small(0, 9);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd f(nn, nn);
  Eigen::MatrixXd d(nn, nn);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(nn, nn);
  for (Eigen::Index i = 0; i < nn; ++i) {
    for (Eigen::Index j = 0; j < nn; ++j) {
      f(i, j) = small(rng);
      d(i, j) = small(rng);
      if (with_b) {
        b(i, j) = small(rng);
      }
    }
  }
  return QapInstance(f, d, b);
}

std::vector<std::vector<unsigned>> all_permutations(unsigned n) {
  std::vector<unsigned> p(n);
  std::iota(p.begin(), p.end(), 0U);
  std::vector<std::vector<unsigned>> out;
  do {
    out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

}  // namespace

TEST_CASE("objective forms on the identity instance", "[qap]") {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(2, 2);
  const QapInstance inst(id, id, Eigen::MatrixXd::Zero(2, 2));
  const auto x = assignment_from_permutation(std::vector<unsigned>{0, 1});
  CHECK(objective_sum(inst, x) == 2.0);
  CHECK(objective_trace(inst, x) == 2.0);
  CHECK(objective_kron(inst, x) == 2.0);

  const AssignmentMatrix zero{Eigen::MatrixXd::Zero(2, 2)};
  CHECK(objective_sum(inst, zero) == 0.0);
  CHECK(objective_kron(inst, zero) == 0.0);
}

TEST_CASE("allocation-only instance is linear", "[qap]") {
  Eigen::MatrixXd b(3, 3);
  b << 1, 2, 3, 4, 5, 6, 7, 8, 9;
  const QapInstance inst(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Ones(3, 3),
                         b);
  for (const auto& p : all_permutations(3)) {
    const auto x = assignment_from_permutation(p);
    double expected = 0.0;
    for (unsigned i = 0; i < 3; ++i) {
      expected += b(i, p[i]);
    }
    CHECK(objective_trace(inst, x) == expected);
  }
}

TEST_CASE("three objective forms agree", "[qap][property]") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const unsigned n = 1 + static_cast<unsigned>(seed % 5);
    const auto inst = random_qap(n, seed);
    for (const auto& p : all_permutations(n)) {
      const auto x = assignment_from_permutation(p);
      const double s = objective_sum(inst, x);
      CHECK_THAT(objective_trace(inst, x), WithinAbs(s, 1e-10));
      CHECK_THAT(objective_kron(inst, x), WithinAbs(s, 1e-10));
    }
  }
}

TEST_CASE("vec convention pinned by an asymmetric instance", "[qap]") {
  Eigen::MatrixXd f(2, 2);
  f << 0, 3, 1, 0;
  Eigen::MatrixXd d(2, 2);
  d << 0, 5, 2, 0;
  Eigen::MatrixXd b(2, 2);
  b << 0, 7, 0, 0;
  const QapInstance inst(f, d, b);
  // identity: f01 d01 + f10 d10 = 15 + 2
  const auto id = assignment_from_permutation(std::vector<unsigned>{0, 1});
  CHECK(objective_sum(inst, id) == 17.0);
  CHECK(objective_kron(inst, id) == 17.0);
  // swap: f01 d10 + f10 d01 + b01 = 6 + 5 + 7
  const auto sw = assignment_from_permutation(std::vector<unsigned>{1, 0});
  CHECK(objective_sum(inst, sw) == 18.0);
  CHECK(objective_kron(inst, sw) == 18.0);
}

TEST_CASE("assignment matrices", "[qap]") {
  const auto x = assignment_from_permutation(std::vector<unsigned>{2, 0, 1});
  CHECK(x.feasible());
  CHECK(x.x(0, 2) == 1.0);
  REQUIRE(x.permutation());
  CHECK(*x.permutation() == std::vector<unsigned>{2, 0, 1});
  CHECK_THROWS_AS(assignment_from_permutation(std::vector<unsigned>{0, 0}),
                  InvalidArgument);
  CHECK_THROWS_AS(assignment_from_permutation(std::vector<unsigned>{0, 3, 1}),
                  InvalidArgument);
}

TEST_CASE("decode assignment", "[qap]") {
  const auto id = decode_assignment(Bitstring{1, 0, 0, 1}, 2);
  CHECK(id.feasible);
  CHECK(*id.assignment.permutation() == std::vector<unsigned>{0, 1});
  CHECK_FALSE(decode_assignment(Bitstring{0, 0, 0, 0}, 2).feasible);
  CHECK_FALSE(decode_assignment(Bitstring{1, 1, 0, 0}, 2).feasible);
  CHECK_THROWS_AS(decode_assignment(Bitstring{1, 0, 0}, 2), DimensionError);
  CHECK(qap_variable(1, 2, 3) == 5);
}

TEST_CASE("penalty-only reduction selects permutations", "[qap]") {
  const Eigen::MatrixXd z = Eigen::MatrixXd::Zero(2, 2);
  const auto red = qap_to_qubo(QapInstance(z, z, z), 1.0);
  CHECK(red.qubo.num_variables() == 4);
  CHECK(red.qubo.sense() == Sense::Minimize);
  CHECK(red.constant == 4.0);
  double best = std::numeric_limits<double>::infinity();
  for (BasisIndex x = 0; x < 16; ++x) {
    best = std::min(best, evaluate_index(red.qubo, x));
  }
  std::vector<std::string> minimizers;
  for (BasisIndex x = 0; x < 16; ++x) {
    if (evaluate_index(red.qubo, x) == best) {
      minimizers.push_back(bits_to_string(bits_from_index(x, 4)));
    }
  }
  CHECK(minimizers == std::vector<std::string>{"0110", "1001"});
  CHECK(best + red.constant == 0.0);
}

TEST_CASE("reduction preserves feasible objective values", "[qap]") {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const auto inst = random_qap(3, seed);
    const auto red = qap_to_qubo(inst);
    for (const auto& p : all_permutations(3)) {
      const auto x = assignment_from_permutation(p);
      Bitstring bits(9, 0);
      for (unsigned i = 0; i < 3; ++i) {
        bits[qap_variable(i, p[i], 3)] = 1;
      }
      CHECK_THAT(evaluate(red.qubo, bits) + red.constant,
                 WithinAbs(objective_sum(inst, x), 1e-9));
    }
  }
}

TEST_CASE("penalty soundness", "[qap][property]") {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const unsigned n = 2 + static_cast<unsigned>(seed % 2);
    const auto inst = random_qap(n, seed + 40);
    const auto red = qap_to_qubo(inst);
    double worst_feasible = -std::numeric_limits<double>::infinity();
    double best_feasible = std::numeric_limits<double>::infinity();
    double best_infeasible = std::numeric_limits<double>::infinity();
    const BasisIndex dim = BasisIndex{1} << (n * n);
    for (BasisIndex x = 0; x < dim; ++x) {
      const auto bits = bits_from_index(x, n * n);
      const double v = evaluate(red.qubo, bits);
      if (decode_assignment(bits, n).feasible) {
        worst_feasible = std::max(worst_feasible, v);
        best_feasible = std::min(best_feasible, v);
      } else {
        best_infeasible = std::min(best_infeasible, v);
      }
    }
    CHECK(best_infeasible > worst_feasible);
    CHECK(best_infeasible >= best_feasible + red.penalty - 1e-9);
  }
}

TEST_CASE("penalty below the spread is rejected", "[qap]") {
  const auto inst = random_qap(2, 5);
  const double spread = objective_spread(inst);
  CHECK(default_penalty(inst) == 2.0 * spread + 1.0);
  CHECK_THROWS_AS(qap_to_qubo(inst, spread), InvalidArgument);
  CHECK_NOTHROW(qap_to_qubo(inst, spread + 0.5));
}

TEST_CASE("operation count of the reduced QUBO", "[qap]") {
  const auto inst = random_qap(3, 11);
  const auto red = qap_to_qubo(inst);
  const unsigned m = 9;
  CHECK(red.qubo.quadratic().size() <= m * (m - 1) / 2);
  const auto c = compile(red.qubo, GateConvention::Binary01,
                         make_scaling(red.qubo, Sense::Minimize));
  CHECK(c.size() - 1 <= (81 + 9) / 2);
}

TEST_CASE("brute force QAP", "[qap]") {
  Eigen::MatrixXd one(1, 1);
  one << 3.0;
  Eigen::MatrixXd two(1, 1);
  two << 4.0;
  Eigen::MatrixXd b(1, 1);
  b << 0.5;
  const auto single = brute_force_qap(QapInstance(one, two, b));
  CHECK(single.permutation == std::vector<unsigned>{0});
  CHECK(single.value == 12.5);

  // one dominant allocation cost steers facility 0 away from location 0
  Eigen::MatrixXd big = Eigen::MatrixXd::Zero(3, 3);
  big(0, 0) = 100.0;
  const auto avoid = brute_force_qap(
      QapInstance(Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3), big));
  CHECK(avoid.permutation[0] != 0);
  CHECK(avoid.value == 0.0);
  CHECK(avoid.permutation == std::vector<unsigned>{1, 0, 2});

  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(3, 3);
  const auto ties = brute_force_qap(QapInstance(id, id, Eigen::MatrixXd::Zero(3, 3)));
  CHECK(ties.permutation == std::vector<unsigned>{0, 1, 2});
  CHECK(ties.value == 3.0);

  const auto nine = random_qap(9, 1);
  CHECK_THROWS_AS(brute_force_qap(nine), CapacityError);
}

TEST_CASE("reduced QUBO optimum decodes to the QAP optimum", "[qap]") {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const auto inst = random_qap(3, seed + 200);
    const auto red = qap_to_qubo(inst);
    const auto best = brute_force_optimum(red.qubo);
    const auto decoded = decode_assignment(best.bits, 3);
    REQUIRE(decoded.feasible);
    const auto qap_best = brute_force_qap(inst);
    CHECK_THAT(objective_sum(inst, decoded.assignment),
               WithinAbs(qap_best.value, 1e-9));
  }
}

TEST_CASE("solve_qap on small instances", "[qap]") {
  const auto inst = random_qap(2, 3);
  SolveOptions opts;
  const auto res = solve_qap(inst, opts);
  if (res.solution.converged) {
    REQUIRE(res.permutation);
    CHECK(*res.permutation == brute_force_qap(inst).permutation);
  }
  CHECK_THROWS_AS(solve_qap(random_qap(5, 0), opts), CapacityError);
}

TEST_CASE("instance validation", "[qap]") {
  CHECK_THROWS_AS(QapInstance(Eigen::MatrixXd::Zero(2, 2),
                              Eigen::MatrixXd::Zero(3, 3),
                              Eigen::MatrixXd::Zero(2, 2)),
                  DimensionError);
}
