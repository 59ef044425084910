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

#include "qpower/experiments.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <future>
#include <limits>
#include <string>
#include <tuple>

#include "qpower/classical_power.hpp"
#include "qpower/error.hpp"
#include "qpower/quantum_power.hpp"
#include "qpower/random.hpp"

namespace qpower {

GappedInstance gen_gapped_diagonal(unsigned n, double gap, PhaseRange range,
                                   std::uint64_t seed, const Limits& limits) {
  if (n < 2) {
    throw InvalidArgument("gapped instances need n >= 2");
  }
  if (!(range.hi > range.lo)) {
    throw InvalidArgument("phase range must have hi > lo");
  }
  if (!(gap > 0.0) || !(gap < range.hi - range.lo)) {
    throw InvalidArgument("gap " + std::to_string(gap) +
                          " infeasible for a phase range of width " +
                          std::to_string(range.hi - range.lo));
  }
  check_state_qubits(n, limits);

  const std::size_t dim = std::size_t{1} << n;
  Rng rng = make_rng(seed, "instance");
  std::uniform_real_distribution<double> draw(range.lo, range.hi);
  std::vector<double> phases(dim);
  for (auto& p : phases) {
    p = draw(rng);
  }

  const auto top = static_cast<BasisIndex>(
      std::max_element(phases.begin(), phases.end()) - phases.begin());
  phases[top] = std::max(phases[top], range.lo + gap);
  const double phi2 = phases[top] - gap;

  BasisIndex runner_up = top == 0 ? 1 : 0;
  for (BasisIndex x = 0; x < dim; ++x) {
    if (x != top && phases[x] > phases[runner_up]) {
      runner_up = x;
    }
  }
  phases[runner_up] = phi2;
  const double below = std::max(range.lo, std::nextafter(phi2, range.lo));
  for (BasisIndex x = 0; x < dim; ++x) {
    if (x != top && x != runner_up && phases[x] > phi2) {
      phases[x] = below;
    }
  }
  return GappedInstance{DiagonalOperator(std::move(phases)), top, gap, range};
}

std::optional<std::size_t> first_success_iteration(
    const DiagonalOperator& op, const StateVector& v0,
    std::span<const BasisIndex> dominant_set, double target, std::size_t cap,
    double eta) {
  auto reached = [&](std::size_t k) {
    return success_probability(analytic_diagonal_iterate(op, v0, k, eta),
                               dominant_set) >= target;
  };
  if (reached(0)) {
    return 0;
  }
  if (cap == 0) {
    return std::nullopt;
  }
  std::size_t fail = 0;
  std::size_t k = 1;
  while (k < cap && !reached(k)) {
    fail = k;
    k *= 2;
  }
  if (k >= cap) {
    if (!reached(cap)) {
      return std::nullopt;
    }
    k = cap;
  }
  // reached(k) holds, reached(fail) does not
  while (k - fail > 1) {
    const std::size_t mid = fail + (k - fail) / 2;
    if (reached(mid)) {
      k = mid;
    } else {
      fail = mid;
    }
  }
  return k;
}

std::optional<std::size_t> first_success_iteration_engine(
    const Operator& op, const StateVector& v0,
    std::span<const BasisIndex> dominant_set, double target, std::size_t cap,
    double eta) {
  StateVector v = v0;
  if (success_probability(v, dominant_set) >= target) {
    return 0;
  }
  for (std::size_t k = 1; k <= cap; ++k) {
    auto step = hadamard_test_step(op, v, eta);
    if (!step.state1) {
      throw DeadBranchError("outcome-1 branch vanished at iteration " +
                            std::to_string(k));
    }
    v = std::move(*step.state1);
    if (success_probability(v, dominant_set) >= target) {
      return k;
    }
  }
  return std::nullopt;
}

std::uint64_t run_seed(std::uint64_t base, unsigned n, double gap,
                       std::size_t run_index) {
  return derive_seed(base, "instance",
                     {n, std::bit_cast<std::uint64_t>(gap), run_index});
}

namespace {

struct RunSpec {
  unsigned n;
  double gap;
  std::size_t run_index;
};

ExperimentRow run_one(const std::string& name, const RunSpec& spec,
                      const ExperimentConfig& cfg) {
  ExperimentRow row;
  row.experiment = name;
  row.n = spec.n;
  row.gap = spec.gap;
  row.run_index = spec.run_index;
  row.seed = run_seed(cfg.seed, spec.n, spec.gap, spec.run_index);

  const auto inst =
      gen_gapped_diagonal(spec.n, spec.gap, cfg.range, row.seed, cfg.limits);
  row.phi1 = inst.phi1();
  row.phi2 = inst.phi2();
  row.estimate = estimate_iterations(row.phi1, row.phi2, spec.n, cfg.eta);
  const auto cap =
      static_cast<std::size_t>(std::ceil(cfg.cap_factor * row.estimate));

  const BasisIndex dominant[] = {inst.dominant_index};
  const auto k = first_success_iteration(
      inst.op, equal_superposition(spec.n, cfg.limits), dominant, cfg.target,
      cap, cfg.eta);
  row.converged = k.has_value();
  row.iterations = k.value_or(0);
  return row;
}

ExperimentTable run_grid(const std::string& name,
                         const std::vector<RunSpec>& specs,
                         const ExperimentConfig& cfg) {
  if (!(cfg.target > 0.0 && cfg.target <= 1.0)) {
    throw InvalidArgument("target success probability must be in (0, 1]");
  }
  ExperimentTable table;
  table.rows.resize(specs.size());
  const std::size_t workers = std::max(1U, cfg.threads);
  for (std::size_t begin = 0; begin < specs.size(); begin += workers) {
    const std::size_t end = std::min(specs.size(), begin + workers);
    if (workers == 1) {
      table.rows[begin] = run_one(name, specs[begin], cfg);
      continue;
    }
    std::vector<std::future<ExperimentRow>> batch;
    for (std::size_t i = begin; i < end; ++i) {
      batch.push_back(std::async(std::launch::async, run_one, std::cref(name),
                                 std::cref(specs[i]), std::cref(cfg)));
    }
    for (std::size_t i = begin; i < end; ++i) {
      table.rows[i] = batch[i - begin].get();
    }
  }

  std::sort(table.rows.begin(), table.rows.end(),
            [](const ExperimentRow& a, const ExperimentRow& b) {
              return std::tie(a.n, a.gap, a.run_index) <
                     std::tie(b.n, b.gap, b.run_index);
            });
  for (const auto& row : table.rows) {
    if (table.summary.empty() || table.summary.back().n != row.n ||
        table.summary.back().gap != row.gap) {
      table.summary.push_back({name, row.n, row.gap, 0, 0, 0.0, 0.0});
    }
    auto& g = table.summary.back();
    ++g.runs;
    g.mean_estimate += row.estimate;
    if (row.converged) {
      ++g.converged;
      g.mean_iterations += static_cast<double>(row.iterations);
    }
  }
  for (auto& g : table.summary) {
    g.mean_estimate /= static_cast<double>(g.runs);
    g.mean_iterations = g.converged > 0
                            ? g.mean_iterations / static_cast<double>(g.converged)
                            : std::numeric_limits<double>::quiet_NaN();
  }
  return table;
}

}  // namespace

ExperimentTable run_fig2(std::span<const unsigned> n_list, double gap,
                         const ExperimentConfig& cfg) {
  std::vector<RunSpec> specs;
  for (const unsigned n : n_list) {
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      specs.push_back({n, gap, r});
    }
  }
  return run_grid("fig2", specs, cfg);
}

ExperimentTable run_fig3(unsigned n, std::span<const double> gaps,
                         const ExperimentConfig& cfg) {
  std::vector<RunSpec> specs;
  for (const double gap : gaps) {
    for (std::size_t r = 0; r < cfg.runs; ++r) {
      specs.push_back({n, gap, r});
    }
  }
  return run_grid("fig3", specs, cfg);
}

LinearFit linear_fit(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("linear fit needs two or more paired points");
  }
  const auto m = static_cast<double>(x.size());
  double sx = 0.0;
  double sy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / m;
  const double my = sy / m;
  double sxx = 0.0;
  double sxy = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

}  // namespace qpower
