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

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <vector>

#include "qpower/classical_power.hpp"
#include "qpower/core.hpp"
#include "qpower/error.hpp"
#include "qpower/experiments.hpp"
#include "qpower/io.hpp"
#include "qpower/qap.hpp"
#include "qpower/quantum_power.hpp"
#include "qpower/qubo.hpp"

namespace py = pybind11;
using namespace qpower;

namespace {

std::vector<Complex> amplitudes_of(const StateVector& v) {
  return {v.amplitudes().begin(), v.amplitudes().end()};
}

std::vector<double> phases_of(const DiagonalOperator& op) {
  return {op.phases().begin(), op.phases().end()};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Shifted power method for unitary operators and its QUBO/QAP solvers";
  m.attr("__version__") = std::string(kVersion);

  auto base = py::register_exception<Error>(m, "QpowerError", PyExc_RuntimeError);
  py::register_exception<CapacityError>(m, "CapacityError", base.ptr());
  py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<DegenerateIterateError>(m, "DegenerateIterateError",
                                                 base.ptr());
  py::register_exception<DeadBranchError>(m, "DeadBranchError", base.ptr());
  py::register_exception<ConstantObjectiveError>(m, "ConstantObjectiveError",
                                                 base.ptr());
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  // core

  py::class_<StateVector>(m, "StateVector")
      .def(py::init<std::vector<Complex>>(), py::arg("amplitudes"))
      .def_static("basis", [](unsigned n, BasisIndex x) {
        return StateVector::basis(n, x);
      }, py::arg("n"), py::arg("index"))
      .def_property_readonly("num_qubits", &StateVector::num_qubits)
      .def_property_readonly("amplitudes", &amplitudes_of)
      .def("probability", &StateVector::probability, py::arg("index"))
      .def("norm", &StateVector::norm)
      .def("normalized", &StateVector::normalized)
      .def("__len__", &StateVector::size);

  m.def("equal_superposition", [](unsigned n) { return equal_superposition(n); },
        py::arg("n"));

  py::class_<DiagonalOperator>(m, "DiagonalOperator")
      .def(py::init<std::vector<double>>(), py::arg("phases"))
      .def_property_readonly("num_qubits", &DiagonalOperator::num_qubits)
      .def_property_readonly("phases", &phases_of);

  py::class_<DenseOperator>(m, "DenseOperator")
      .def(py::init<Eigen::MatrixXcd>(), py::arg("matrix"))
      .def_property_readonly("num_qubits", &DenseOperator::num_qubits)
      .def_property_readonly("matrix", &DenseOperator::matrix);

  py::class_<PhaseCircuit>(m, "PhaseCircuit")
      .def(py::init<unsigned>(), py::arg("n"))
      .def("add_phase", &PhaseCircuit::add_phase, py::arg("qubit"),
           py::arg("phase0"), py::arg("phase1"))
      .def("add_controlled_phase", &PhaseCircuit::add_controlled_phase,
           py::arg("control"), py::arg("target"), py::arg("phase10"),
           py::arg("phase11"))
      .def_property_readonly("num_qubits", &PhaseCircuit::num_qubits)
      .def("__len__", &PhaseCircuit::size)
      .def("to_json", [](const PhaseCircuit& c) { return circuit_to_json(c).dump(); });

  m.def("apply", [](const Operator& op, const StateVector& v) { return apply(op, v); },
        py::arg("op"), py::arg("v"));
  m.def("circuit_to_diagonal",
        [](const PhaseCircuit& c) { return circuit_to_diagonal(c); },
        py::arg("circuit"));
  m.def("random_unitary", [](unsigned n, std::uint64_t seed) {
    return random_unitary(n, seed);
  }, py::arg("n"), py::arg("seed"));
  m.def("reduce_phase", &reduce_phase, py::arg("phase"));
  m.def("ray_distance", &ray_distance, py::arg("a"), py::arg("b"));
  m.def("operator_from_json",
        [](const std::string& text) { return operator_from_json(json::parse(text)); },
        py::arg("text"));

  // classical power method

  py::class_<ShiftedStep>(m, "ShiftedStep")
      .def_readonly("v", &ShiftedStep::v)
      .def_readonly("alpha", &ShiftedStep::alpha);

  py::class_<ClassicalResult>(m, "ClassicalResult")
      .def_readonly("v_final", &ClassicalResult::v_final)
      .def_readonly("alpha_final", &ClassicalResult::alpha_final)
      .def_readonly("alpha_history", &ClassicalResult::alpha_history)
      .def_readonly("iterations", &ClassicalResult::iterations)
      .def_readonly("converged", &ClassicalResult::converged);

  m.def("shifted_step", &shifted_step, py::arg("op"), py::arg("v"),
        py::arg("eta") = 1.0);
  m.def(
      "run_shifted_power",
      [](const Operator& op, const StateVector& v0, double eta, double tol,
         std::size_t window, std::optional<std::size_t> max_iterate) {
        return run_shifted_power(op, v0, {eta, tol, window, max_iterate});
      },
      py::arg("op"), py::arg("v0"), py::arg("eta") = 1.0, py::arg("tol") = 1e-10,
      py::arg("window") = 3, py::arg("max_iterate") = py::none());
  m.def("estimate_iterations", &estimate_iterations, py::arg("phi1"),
        py::arg("phi2"), py::arg("n"), py::arg("eta") = 1.0);

  // quantum power method

  py::enum_<CollapseMode>(m, "CollapseMode")
      .value("PostSelect", CollapseMode::PostSelect)
      .value("Sample", CollapseMode::Sample);

  py::class_<EngineConfig>(m, "EngineConfig")
      .def(py::init<>())
      .def_readwrite("eta", &EngineConfig::eta)
      .def_readwrite("mode", &EngineConfig::mode)
      .def_readwrite("tol", &EngineConfig::tol)
      .def_readwrite("window", &EngineConfig::window)
      .def_readwrite("max_iterate", &EngineConfig::max_iterate)
      .def_readwrite("seed", &EngineConfig::seed)
      .def_readwrite("tomography_stride", &EngineConfig::tomography_stride);

  py::class_<BranchOutcome>(m, "BranchOutcome")
      .def_readonly("p0", &BranchOutcome::p0)
      .def_readonly("p1", &BranchOutcome::p1)
      .def_readonly("state0", &BranchOutcome::state0)
      .def_readonly("state1", &BranchOutcome::state1)
      .def_readonly("alpha", &BranchOutcome::alpha);

  py::class_<EngineResult>(m, "EngineResult")
      .def_readonly("summary", &EngineResult::summary)
      .def_readonly("phase", &EngineResult::phase)
      .def_property_readonly("trace_json", [](const EngineResult& r) {
        return trace_to_json(r.trace).dump();
      });

  m.def("hadamard_test_step", &hadamard_test_step, py::arg("op"), py::arg("v"),
        py::arg("eta") = 1.0);
  m.def(
      "iterate",
      [](const Operator& op, const StateVector& v0, const EngineConfig& cfg,
         const std::vector<BasisIndex>& dominant_set) {
        return iterate(op, v0, cfg, dominant_set);
      },
      py::arg("op"), py::arg("v0"), py::arg("config") = EngineConfig{},
      py::arg("dominant_set") = std::vector<BasisIndex>{});
  m.def("recover_phase", py::overload_cast<double>(&recover_phase), py::arg("alpha"));
  m.def("recover_phase", py::overload_cast<double, double>(&recover_phase),
        py::arg("alpha"), py::arg("eta"));
  m.def(
      "success_probability",
      [](const StateVector& v, const std::vector<BasisIndex>& dominant) {
        return success_probability(v, dominant);
      },
      py::arg("v"), py::arg("dominant_set"));

  // QUBO

  py::enum_<Sense>(m, "Sense")
      .value("Maximize", Sense::Maximize)
      .value("Minimize", Sense::Minimize);
  py::enum_<GateConvention>(m, "GateConvention")
      .value("Binary01", GateConvention::Binary01)
      .value("IsingPM", GateConvention::IsingPM);
  py::enum_<Readout>(m, "Readout")
      .value("Argmax", Readout::Argmax)
      .value("Sample", Readout::Sample);

  py::class_<QuboInstance>(m, "QuboInstance")
      .def(py::init([](unsigned n, std::vector<double> linear,
                       const std::vector<std::tuple<unsigned, unsigned, double>>& quad,
                       Sense sense) {
             std::vector<QuadraticTerm> terms;
             for (const auto& [j, k, q] : quad) {
               terms.push_back({j, k, q});
             }
             return QuboInstance(n, std::move(linear), std::move(terms), sense);
           }),
           py::arg("n"), py::arg("linear"),
           py::arg("quadratic") = std::vector<std::tuple<unsigned, unsigned, double>>{},
           py::arg("sense") = Sense::Maximize)
      .def_static("from_json",
                  [](const std::string& text) { return qubo_from_json(json::parse(text)); },
                  py::arg("text"))
      .def("to_json", [](const QuboInstance& q) { return qubo_to_json(q).dump(); })
      .def_property_readonly("num_variables", &QuboInstance::num_variables)
      .def_property_readonly("sense", &QuboInstance::sense)
      .def("evaluate",
           [](const QuboInstance& q, const Bitstring& bits, GateConvention conv) {
             return evaluate(q, bits, conv);
           },
           py::arg("bits"), py::arg("convention") = GateConvention::Binary01);

  py::class_<ScalingPlan>(m, "ScalingPlan")
      .def_readonly("s", &ScalingPlan::s)
      .def_readonly("offset", &ScalingPlan::offset)
      .def_readonly("lower_bound", &ScalingPlan::lower_bound)
      .def_readonly("upper_bound", &ScalingPlan::upper_bound)
      .def_readonly("sense", &ScalingPlan::sense)
      .def("phase_of", &ScalingPlan::phase_of, py::arg("value"))
      .def("value_of", &ScalingPlan::value_of, py::arg("phase"));

  py::class_<Optimum>(m, "Optimum")
      .def_readonly("bits", &Optimum::bits)
      .def_readonly("index", &Optimum::index)
      .def_readonly("value", &Optimum::value);

  py::class_<Solution>(m, "Solution")
      .def_readonly("bits", &Solution::bits)
      .def_readonly("index", &Solution::index)
      .def_readonly("value", &Solution::value)
      .def_readonly("iterations", &Solution::iterations)
      .def_readonly("converged", &Solution::converged)
      .def_readonly("phi_recovered", &Solution::phi_recovered)
      .def_readonly("success_prob", &Solution::success_prob)
      .def_readonly("readout_set", &Solution::readout_set)
      .def_readonly("plan", &Solution::plan)
      .def_readonly("gate_count", &Solution::gate_count)
      .def_property_readonly("bitstring",
                             [](const Solution& s) { return bits_to_string(s.bits); });

  m.def("make_scaling", &make_scaling, py::arg("qubo"), py::arg("sense"),
        py::arg("convention") = GateConvention::Binary01);
  m.def("compile", &compile, py::arg("qubo"), py::arg("convention"), py::arg("plan"));
  m.def("gate_count", &gate_count, py::arg("n"), py::arg("m"));
  m.def("brute_force_optimum",
        [](const QuboInstance& q, GateConvention conv) { return brute_force_optimum(q, conv); },
        py::arg("qubo"), py::arg("convention") = GateConvention::Binary01);
  m.def(
      "solve",
      [](const QuboInstance& q, GateConvention conv, Readout readout,
         const EngineConfig& engine, std::optional<std::size_t> max_iterate,
         double target) {
        SolveOptions opts;
        opts.engine = engine;
        opts.convention = conv;
        opts.readout = readout;
        opts.max_iterate = max_iterate;
        opts.target = target;
        return solve(q, opts);
      },
      py::arg("qubo"), py::arg("convention") = GateConvention::Binary01,
      py::arg("readout") = Readout::Argmax, py::arg("engine") = EngineConfig{},
      py::arg("max_iterate") = py::none(), py::arg("target") = 0.5);

  // QAP

  py::class_<QapInstance>(m, "QapInstance")
      .def(py::init<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::MatrixXd>(),
           py::arg("flow"), py::arg("distance"), py::arg("allocation"))
      .def_static("from_json",
                  [](const std::string& text) { return qap_from_json(json::parse(text)); },
                  py::arg("text"))
      .def_property_readonly("size", &QapInstance::size)
      .def_property_readonly("flow", &QapInstance::flow)
      .def_property_readonly("distance", &QapInstance::distance)
      .def_property_readonly("allocation", &QapInstance::allocation);

  m.def(
      "qap_objective",
      [](const QapInstance& inst, const std::vector<unsigned>& perm) {
        return objective_sum(inst, assignment_from_permutation(perm));
      },
      py::arg("instance"), py::arg("permutation"));

  py::class_<QapOptimum>(m, "QapOptimum")
      .def_readonly("permutation", &QapOptimum::permutation)
      .def_readonly("value", &QapOptimum::value);

  py::class_<QapSolution>(m, "QapSolution")
      .def_readonly("solution", &QapSolution::solution)
      .def_readonly("permutation", &QapSolution::permutation)
      .def_readonly("objective", &QapSolution::objective)
      .def_property_readonly("penalty",
                             [](const QapSolution& s) { return s.reduction.penalty; })
      .def_property_readonly("feasible",
                             [](const QapSolution& s) { return s.decoded.feasible; });

  m.def("default_penalty", &default_penalty, py::arg("instance"));
  m.def("brute_force_qap", &brute_force_qap, py::arg("instance"));
  m.def(
      "solve_qap",
      [](const QapInstance& inst, std::optional<double> penalty, const EngineConfig& engine) {
        SolveOptions opts;
        opts.engine = engine;
        return solve_qap(inst, opts, penalty);
      },
      py::arg("instance"), py::arg("penalty") = py::none(),
      py::arg("engine") = EngineConfig{});

  // experiments

  py::class_<ExperimentRow>(m, "ExperimentRow")
      .def_readonly("experiment", &ExperimentRow::experiment)
      .def_readonly("n", &ExperimentRow::n)
      .def_readonly("gap", &ExperimentRow::gap)
      .def_readonly("run_index", &ExperimentRow::run_index)
      .def_readonly("seed", &ExperimentRow::seed)
      .def_readonly("iterations", &ExperimentRow::iterations)
      .def_readonly("converged", &ExperimentRow::converged)
      .def_readonly("estimate", &ExperimentRow::estimate);

  py::class_<GroupSummary>(m, "GroupSummary")
      .def_readonly("n", &GroupSummary::n)
      .def_readonly("gap", &GroupSummary::gap)
      .def_readonly("runs", &GroupSummary::runs)
      .def_readonly("converged", &GroupSummary::converged)
      .def_readonly("mean_iterations", &GroupSummary::mean_iterations)
      .def_readonly("mean_estimate", &GroupSummary::mean_estimate);

  py::class_<ExperimentTable>(m, "ExperimentTable")
      .def_readonly("rows", &ExperimentTable::rows)
      .def_readonly("summary", &ExperimentTable::summary);

  auto experiment_config = [](std::size_t runs, std::uint64_t seed, unsigned threads) {
    ExperimentConfig cfg;
    cfg.runs = runs;
    cfg.seed = seed;
    cfg.threads = threads;
    return cfg;
  };
  m.def(
      "run_fig2",
      [experiment_config](const std::vector<unsigned>& n_list, double gap,
                          std::size_t runs, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return run_fig2(n_list, gap, experiment_config(runs, seed, threads));
      },
      py::arg("n_list"), py::arg("gap"), py::arg("runs") = 15, py::arg("seed") = 0,
      py::arg("threads") = 1);
  m.def(
      "run_fig3",
      [experiment_config](unsigned n, const std::vector<double>& gaps,
                          std::size_t runs, std::uint64_t seed, unsigned threads) {
        py::gil_scoped_release release;
        return run_fig3(n, gaps, experiment_config(runs, seed, threads));
      },
      py::arg("n"), py::arg("gaps"), py::arg("runs") = 15, py::arg("seed") = 0,
      py::arg("threads") = 1);
}
