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

#include "qpower/qap.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <string>
#include <utility>

#include "qpower/error.hpp"

namespace qpower {

namespace {

void check_dims(const QapInstance& inst, const AssignmentMatrix& a) {
  if (a.x.rows() != inst.size() || a.x.cols() != inst.size()) {
    throw DimensionError("assignment is " + std::to_string(a.x.rows()) + "x" +
                         std::to_string(a.x.cols()) + ", instance has n = " +
                         std::to_string(inst.size()));
  }
}

}  // namespace

QapInstance::QapInstance(Eigen::MatrixXd flow, Eigen::MatrixXd distance,
                         Eigen::MatrixXd allocation)
    : n_(static_cast<unsigned>(flow.rows())),
      flow_(std::move(flow)),
      distance_(std::move(distance)),
      allocation_(std::move(allocation)) {
  const auto n = static_cast<Eigen::Index>(n_);
  if (n == 0) {
    throw InvalidArgument("QAP needs n >= 1");
  }
  for (const auto* m : {&flow_, &distance_, &allocation_}) {
    if (m->rows() != n || m->cols() != n) {
      throw DimensionError("F, D and B must all be " + std::to_string(n) +
                           "x" + std::to_string(n));
    }
    if (!m->allFinite()) {
      throw InvalidArgument("QAP matrices must be finite");
    }
  }
}

bool AssignmentMatrix::feasible() const {
  if (x.rows() != x.cols()) {
    return false;
  }
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (Eigen::Index c = 0; c < x.cols(); ++c) {
      if (x(r, c) != 0.0 && x(r, c) != 1.0) {
        return false;
      }
    }
  }
  return (x.rowwise().sum().array() == 1.0).all() &&
         (x.colwise().sum().array() == 1.0).all();
}

std::optional<std::vector<unsigned>> AssignmentMatrix::permutation() const {
  if (!feasible()) {
    return std::nullopt;
  }
  std::vector<unsigned> perm(size());
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    Eigen::Index k = 0;
    x.row(i).maxCoeff(&k);
    perm[static_cast<std::size_t>(i)] = static_cast<unsigned>(k);
  }
  return perm;
}

AssignmentMatrix assignment_from_permutation(std::span<const unsigned> perm) {
  const auto n = static_cast<Eigen::Index>(perm.size());
  AssignmentMatrix a{Eigen::MatrixXd::Zero(n, n)};
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto k = static_cast<Eigen::Index>(perm[static_cast<std::size_t>(i)]);
    if (k >= n) {
      throw InvalidArgument("permutation entry out of range");
    }
    a.x(i, k) = 1.0;
  }
  if (!a.feasible()) {
    throw InvalidArgument("not a permutation");
  }
  return a;
}

double objective_sum(const QapInstance& inst, const AssignmentMatrix& a) {
  check_dims(inst, a);
  const auto n = static_cast<Eigen::Index>(inst.size());
  const auto& f = inst.flow();
  const auto& d = inst.distance();
  const auto& x = a.x;
  double value = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index k = 0; k < n; ++k) {
        for (Eigen::Index p = 0; p < n; ++p) {
          value += f(i, j) * d(k, p) * x(i, k) * x(j, p);
        }
      }
    }
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index k = 0; k < n; ++k) {
      value += inst.allocation()(i, k) * x(i, k);
    }
  }
  return value;
}

double objective_trace(const QapInstance& inst, const AssignmentMatrix& a) {
  check_dims(inst, a);
  const auto& x = a.x;
  return (inst.flow() * x * inst.distance().transpose() * x.transpose() +
          inst.allocation() * x.transpose())
      .trace();
}

double objective_kron(const QapInstance& inst, const AssignmentMatrix& a) {
  check_dims(inst, a);
  const auto n = static_cast<Eigen::Index>(inst.size());
  const Eigen::Index nn = n * n;
  const Eigen::VectorXd vx = a.x.reshaped();  // column-major
  const Eigen::VectorXd vb = inst.allocation().reshaped();
  Eigen::MatrixXd k(nn, nn);
  for (Eigen::Index kk = 0; kk < n; ++kk) {
    for (Eigen::Index i = 0; i < n; ++i) {
      for (Eigen::Index p = 0; p < n; ++p) {
        for (Eigen::Index j = 0; j < n; ++j) {
          k(kk * n + i, p * n + j) = inst.flow()(i, j) * inst.distance()(kk, p);
        }
      }
    }
  }
  return vx.dot(k * vx) + vb.dot(vx);
}

namespace {

using PairKey = std::pair<unsigned, unsigned>;

struct ObjectiveTerms {
  std::vector<double> linear;
  std::map<PairKey, double> quadratic;
};

ObjectiveTerms objective_terms(const QapInstance& inst) {
  const unsigned n = inst.size();
  ObjectiveTerms t;
  t.linear.assign(std::size_t{n} * n, 0.0);
  const auto& f = inst.flow();
  const auto& d = inst.distance();
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned k = 0; k < n; ++k) {
      const unsigned u = qap_variable(i, k, n);
      // x_ik^2 = x_ik
      t.linear[u] += inst.allocation()(i, k) + f(i, i) * d(k, k);
      for (unsigned j = 0; j < n; ++j) {
        for (unsigned p = 0; p < n; ++p) {
          const unsigned w = qap_variable(j, p, n);
          if (u < w) {
            t.quadratic[{u, w}] += f(i, j) * d(k, p) + f(j, i) * d(p, k);
          }
        }
      }
    }
  }
  return t;
}

ObjectiveBounds bounds_of(const ObjectiveTerms& t) {
  ObjectiveBounds b;
  for (const double c : t.linear) {
    b.lower += std::min(0.0, c);
    b.upper += std::max(0.0, c);
  }
  for (const auto& [key, c] : t.quadratic) {
    b.lower += std::min(0.0, c);
    b.upper += std::max(0.0, c);
  }
  return b;
}

}  // namespace

double objective_spread(const QapInstance& inst) {
  const auto b = bounds_of(objective_terms(inst));
  return b.upper - b.lower;
}

double default_penalty(const QapInstance& inst) {
  return 2.0 * objective_spread(inst) + 1.0;
}

QapQubo qap_to_qubo(const QapInstance& inst, std::optional<double> penalty) {
  const unsigned n = inst.size();
  ObjectiveTerms terms = objective_terms(inst);
  const ObjectiveBounds bounds = bounds_of(terms);
  const double spread = bounds.upper - bounds.lower;
  const double p = penalty ? *penalty : 2.0 * spread + 1.0;
  if (!(p > spread)) {
    throw InvalidArgument("penalty " + std::to_string(p) +
                          " too small: must exceed the objective spread " +
                          std::to_string(spread));
  }

  // (sum x - 1)^2 = -sum x + 2 sum_{a<b} x_a x_b + 1 over 0/1 variables
  for (auto& c : terms.linear) {
    c -= 2.0 * p;  // one row and one column constraint per variable
  }
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned k = 0; k < n; ++k) {
      for (unsigned other = k + 1; other < n; ++other) {
        terms.quadratic[{qap_variable(i, k, n), qap_variable(i, other, n)}] +=
            2.0 * p;
        terms.quadratic[{qap_variable(k, i, n), qap_variable(other, i, n)}] +=
            2.0 * p;
      }
    }
  }

  std::vector<QuadraticTerm> quadratic;
  for (const auto& [key, c] : terms.quadratic) {
    if (c != 0.0) {
      quadratic.push_back({key.first, key.second, c});
    }
  }
  QapQubo out;
  out.qubo = QuboInstance(n * n, std::move(terms.linear), std::move(quadratic),
                          Sense::Minimize);
  out.constant = 2.0 * n * p;
  out.penalty = p;
  out.n = n;
  out.objective_bounds = bounds;
  return out;
}

QapOptimum brute_force_qap(const QapInstance& inst) {
  const unsigned n = inst.size();
  if (n > kMaxQapBruteForceSize) {
    throw CapacityError("brute-force QAP limited to n <= " +
                        std::to_string(kMaxQapBruteForceSize));
  }
  std::vector<unsigned> perm(n);
  std::iota(perm.begin(), perm.end(), 0U);
  QapOptimum best;
  bool first = true;
  do {
    const double v = objective_sum(inst, assignment_from_permutation(perm));
    if (first || v < best.value) {
      best.value = v;
      best.permutation = perm;
      first = false;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best;
}

DecodedAssignment decode_assignment(std::span<const std::uint8_t> bits,
                                    unsigned n) {
  if (bits.size() != std::size_t{n} * n) {
    throw DimensionError("expected " + std::to_string(n * n) + " bits, got " +
                         std::to_string(bits.size()));
  }
  const auto nn = static_cast<Eigen::Index>(n);
  DecodedAssignment out{{Eigen::MatrixXd::Zero(nn, nn)}, false};
  for (unsigned i = 0; i < n; ++i) {
    for (unsigned k = 0; k < n; ++k) {
      out.assignment.x(i, k) = bits[qap_variable(i, k, n)] ? 1.0 : 0.0;
    }
  }
  out.feasible = out.assignment.feasible();
  return out;
}

QapSolution solve_qap(const QapInstance& inst, const SolveOptions& options,
                      std::optional<double> penalty) {
  if (inst.size() > kMaxQapSolveSize) {
    throw CapacityError("QAP solves are limited to n <= " +
                        std::to_string(kMaxQapSolveSize) + " (n^2 qubits)");
  }
  QapSolution out;
  out.reduction = qap_to_qubo(inst, penalty);
  SolveOptions opts = options;
  opts.convention = GateConvention::Binary01;
  out.solution = solve(out.reduction.qubo, opts);
  out.decoded = decode_assignment(out.solution.bits, inst.size());
  out.permutation = out.decoded.assignment.permutation();
  if (out.permutation) {
    out.objective = out.solution.value + out.reduction.constant;
  }
  return out;
}

}  // namespace qpower
