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

// qpower command-line interface.
//
// Exit codes: 0 success, 2 input error, 3 non-convergence or dead branch,
// 4 converged with success probability below target.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <Eigen/Eigenvalues>

#include "qpower/classical_power.hpp"
#include "qpower/error.hpp"
#include "qpower/experiments.hpp"
#include "qpower/io.hpp"
#include "qpower/qap.hpp"
#include "qpower/quantum_power.hpp"
#include "qpower/qubo.hpp"
#include "qpower/random.hpp"

namespace {

using namespace qpower;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitLowConfidence = 4;

struct EngineFlags {
  double eta = 1.0;
  std::string mode = "postselect";
  std::uint64_t seed = 0;
  std::optional<std::size_t> max_iterate;
  double tol = 1e-6;
  std::size_t window = 3;
  std::size_t stride = 5;

  void attach(CLI::App* app) {
    app->add_option("--eta", eta, "real shift eta >= 0 of (eta I - U)");
    app->add_option("--mode", mode, "postselect | sample")
        ->check(CLI::IsMember({"postselect", "sample"}));
    app->add_option("--seed", seed, "seed for every random sub-stream");
    app->add_option("--max-iterate", max_iterate, "iteration budget");
    app->add_option("--tol", tol, "tomography tolerance on p1");
    app->add_option("--window", window, "tomography window");
    app->add_option("--stride", stride, "tomography stride");
  }

  [[nodiscard]] EngineConfig config(std::size_t max_iter) const {
    EngineConfig cfg;
    cfg.eta = eta;
    cfg.mode = mode == "sample" ? CollapseMode::Sample : CollapseMode::PostSelect;
    cfg.seed = seed;
    cfg.max_iterate = max_iter;
    cfg.tol = tol;
    cfg.window = window;
    cfg.tomography_stride = stride;
    return cfg;
  }

  [[nodiscard]] json to_json() const {
    return {{"eta", eta},
            {"mode", mode},
            {"seed", seed},
            {"max_iterate", max_iterate ? json(*max_iterate) : json(nullptr)},
            {"tol", tol},
            {"window", window},
            {"stride", stride}};
  }
};

GateConvention parse_convention(const std::string& s) {
  return s == "ising" ? GateConvention::IsingPM : GateConvention::Binary01;
}

void emit_json(const std::string& path, const json& doc, const RunManifest& m) {
  const std::string text = doc.dump(2) + "\n";
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  write_text_file(path, text);
  write_manifest(path, m);
}

RunManifest manifest_for(const std::string& command, json params,
                         std::uint64_t seed) {
  RunManifest m;
  m.command = command;
  m.parameters = std::move(params);
  m.seed = seed;
  m.timestamp = utc_timestamp();
  return m;
}

// Probability mass of the iterate on the eigenspace with maximal |eta - lambda|.
double dominant_mass(const Operator& op, const StateVector& v, double eta) {
  if (const auto* d = std::get_if<DiagonalOperator>(&op)) {
    return success_probability(v, dominant_indices(*d, eta));
  }
  const auto& dense = std::get<DenseOperator>(op);
  const Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(dense.matrix());
  const auto& values = solver.eigenvalues();
  double best = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    best = std::max(best, std::abs(eta - values(i)));
  }
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (std::abs(eta - values(i)) >= best - 1e-9) {
      keep.push_back(i);
    }
  }
  Eigen::MatrixXcd basis(values.size(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t c = 0; c < keep.size(); ++c) {
    basis.col(static_cast<Eigen::Index>(c)) = solver.eigenvectors().col(keep[c]);
  }
  const Eigen::HouseholderQR<Eigen::MatrixXcd> qr(basis);
  const Eigen::MatrixXcd q = qr.householderQ() *
      Eigen::MatrixXcd::Identity(basis.rows(), basis.cols());
  const auto amps = v.amplitudes();
  Eigen::Map<const Eigen::VectorXcd> vv(amps.data(),
                                        static_cast<Eigen::Index>(amps.size()));
  return (q.adjoint() * vv).squaredNorm();
}

int cmd_power(const std::string& input, const EngineFlags& flags,
              const std::string& init, const std::string& json_out,
              bool show_trace) {
  const Operator op = operator_from_json(read_json_file(input));
  const unsigned n = num_qubits(op);

  std::size_t max_iter = 10000;
  if (flags.max_iterate) {
    max_iter = *flags.max_iterate;
  } else {
    try {
      max_iter = default_max_iterate(op, flags.eta, 50.0);
    } catch (const InvalidArgument&) {
      // gapless spectrum: keep the fixed budget
    }
  }

  StateVector v0 = equal_superposition(n);
  if (init == "random") {
    Rng rng = make_rng(flags.seed, "init");
    std::normal_distribution<double> g(0.0, 1.0);
    std::vector<Complex> amps(v0.size());
    for (auto& a : amps) {
      const double re = g(rng);
      a = Complex{re, g(rng)};
    }
    v0 = StateVector(std::move(amps)).normalized();
  }

  const auto cfg = flags.config(max_iter);
  const auto run = iterate(op, v0, cfg);
  const double success = dominant_mass(op, run.summary.v_final, flags.eta);

  std::cout << "qubits:        " << n << "\n";
  std::cout << "iterations:    " << run.summary.iterations << "\n";
  std::cout << "converged:     " << (run.summary.converged ? "yes" : "no") << "\n";
  std::cout << "alpha:         " << format_double(run.summary.alpha_final) << "\n";
  std::cout << "eigenphase:    "
            << (run.phase ? format_double(*run.phase) : std::string("n/a"))
            << "\n";
  std::cout << "success prob:  " << format_double(success) << "\n";
  if (show_trace) {
    std::cout << "k,branch,p1,alpha,phi_estimate\n";
    for (const auto& r : run.trace.records) {
      std::cout << r.k << ',' << r.branch << ',' << format_double(r.p1) << ','
                << format_double(r.alpha) << ','
                << (r.phi_estimate ? format_double(*r.phi_estimate) : "") << '\n';
    }
  }

  if (!json_out.empty()) {
    json doc;
    doc["qubits"] = n;
    doc["iterations"] = run.summary.iterations;
    doc["converged"] = run.summary.converged;
    doc["alpha_final"] = run.summary.alpha_final;
    doc["eigenphase"] = run.phase ? json(*run.phase) : json(nullptr);
    doc["success_prob"] = success;
    doc["trace"] = trace_to_json(run.trace);
    json params = flags.to_json();
    params["input"] = input;
    params["init"] = init;
    emit_json(json_out, doc, manifest_for("power", params, flags.seed));
  }
  return run.summary.converged ? kExitOk : kExitNoConvergence;
}

struct SolveFlags {
  std::string sense;
  std::string convention = "binary";
  std::string readout = "argmax";
  std::string json_out;
  bool verify = false;
};

SolveOptions solve_options(const EngineFlags& flags, const SolveFlags& sf) {
  SolveOptions opts;
  opts.engine = flags.config(1);
  opts.max_iterate = flags.max_iterate;
  opts.convention = parse_convention(sf.convention);
  opts.readout = sf.readout == "sample" ? Readout::Sample : Readout::Argmax;
  return opts;
}

int exit_for(const Solution& sol, double target) {
  if (!sol.converged) {
    return kExitNoConvergence;
  }
  return sol.confident(target) ? kExitOk : kExitLowConfidence;
}

int cmd_solve_qubo(const std::string& input, const EngineFlags& flags,
                   const SolveFlags& sf) {
  QuboInstance q = qubo_from_json(read_json_file(input));
  if (!sf.sense.empty()) {
    q = q.with_sense(parse_sense(sf.sense));
  }
  const auto opts = solve_options(flags, sf);
  const Solution sol = solve(q, opts);

  std::cout << "bitstring:     " << bits_to_string(sol.bits) << "\n";
  std::cout << "value:         " << format_double(sol.value) << "\n";
  std::cout << "iterations:    " << sol.iterations << "\n";
  std::cout << "converged:     " << (sol.converged ? "yes" : "no") << "\n";
  std::cout << "success prob:  " << format_double(sol.success_prob) << "\n";
  std::cout << "phase:         "
            << (sol.phi_recovered ? format_double(*sol.phi_recovered) : "n/a")
            << "\n";
  json doc = solution_to_json(sol);
  if (sf.verify) {
    if (q.num_variables() > 20) {
      throw CapacityError("--verify supports n <= 20");
    }
    const auto best = brute_force_optimum(q, opts.convention);
    const bool agree = best.value == sol.value;
    std::cout << "brute force:   " << bits_to_string(best.bits) << " value "
              << format_double(best.value) << " ("
              << (agree ? "agree" : "DISAGREE") << ")\n";
    doc["verify"] = {{"bitstring", bits_to_string(best.bits)},
                     {"value", best.value},
                     {"agree", agree}};
  }
  if (!sf.json_out.empty()) {
    json params = flags.to_json();
    params["input"] = input;
    params["sense"] = sense_name(q.sense());
    params["convention"] = sf.convention;
    params["readout"] = sf.readout;
    emit_json(sf.json_out, doc, manifest_for("solve-qubo", params, flags.seed));
  }
  return exit_for(sol, 0.5);
}

int cmd_solve_qap(const std::string& input, const EngineFlags& flags,
                  const SolveFlags& sf, std::optional<double> penalty) {
  const QapInstance inst = qap_from_json(read_json_file(input));
  const auto opts = solve_options(flags, sf);
  const QapSolution res = solve_qap(inst, opts, penalty);

  std::cout << "bitstring:     " << bits_to_string(res.solution.bits) << "\n";
  std::cout << "feasible:      " << (res.decoded.feasible ? "yes" : "no") << "\n";
  json perm = nullptr;
  if (res.permutation) {
    std::cout << "permutation:  ";
    for (const auto p : *res.permutation) {
      std::cout << ' ' << p;
    }
    std::cout << "\nobjective:     " << format_double(*res.objective) << "\n";
    perm = *res.permutation;
  }
  std::cout << "iterations:    " << res.solution.iterations << "\n";
  std::cout << "converged:     " << (res.solution.converged ? "yes" : "no") << "\n";
  std::cout << "success prob:  " << format_double(res.solution.success_prob)
            << "\n";

  json doc = solution_to_json(res.solution);
  doc["feasible"] = res.decoded.feasible;
  doc["permutation"] = perm;
  doc["objective"] = res.objective ? json(*res.objective) : json(nullptr);
  doc["penalty"] = res.reduction.penalty;
  doc["constant"] = res.reduction.constant;
  if (sf.verify) {
    const auto best = brute_force_qap(inst);
    const bool agree = res.permutation && *res.permutation == best.permutation;
    std::cout << "brute force:   value " << format_double(best.value) << " ("
              << (agree ? "agree" : "DISAGREE") << ")\n";
    doc["verify"] = {{"permutation", best.permutation},
                     {"value", best.value},
                     {"agree", agree}};
  }
  if (!sf.json_out.empty()) {
    json params = flags.to_json();
    params["input"] = input;
    params["penalty"] = res.reduction.penalty;
    emit_json(sf.json_out, doc, manifest_for("solve-qap", params, flags.seed));
  }
  return exit_for(res.solution, 0.5);
}

int cmd_compile(const std::string& input, const std::string& convention_name,
                const std::string& sense_override, std::optional<double> penalty,
                const std::string& out) {
  const json src = read_json_file(input);
  const bool is_qap = src.is_object() && src.contains("F");
  GateConvention conv = parse_convention(convention_name);

  QuboInstance q;
  json extra = json::object();
  if (is_qap) {
    const auto red = qap_to_qubo(qap_from_json(src), penalty);
    q = red.qubo;
    conv = GateConvention::Binary01;
    extra = {{"n", red.n}, {"penalty", red.penalty}, {"constant", red.constant}};
  } else {
    q = qubo_from_json(src);
  }
  if (!sense_override.empty()) {
    q = q.with_sense(parse_sense(sense_override));
  }

  ScalingPlan plan;
  try {
    plan = make_scaling(q, q.sense(), conv);
  } catch (const ConstantObjectiveError&) {
    plan = unit_scaling(q, q.sense(), conv);
  }
  const PhaseCircuit circuit = compile(q, conv, plan);
  const std::size_t objective_gates =
      gate_count(q.num_variables(), q.quadratic().size());

  json doc = circuit_to_json(circuit);
  doc["source"] = is_qap ? "qap" : "qubo";
  doc["convention"] = conv == GateConvention::IsingPM ? "ising" : "binary";
  doc["scaling"] = scaling_to_json(plan);
  doc["gate_count"] = {{"objective", objective_gates},
                       {"offset", circuit.size() - objective_gates},
                       {"total", circuit.size()}};
  if (is_qap) {
    doc["qap"] = extra;
  }
  json params = {{"input", input},
                 {"convention", convention_name},
                 {"sense", sense_name(q.sense())},
                 {"penalty", penalty ? json(*penalty) : json(nullptr)}};
  emit_json(out, doc, manifest_for("compile", params, 0));
  return kExitOk;
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) {
      out.push_back(item);
    }
  }
  return out;
}

struct ExperimentFlags {
  std::string which;
  std::string n_list = "6,7,8,9,10,11,12,13,14,15,16";
  std::string gaps = "0.005,0.01,0.02,0.05,0.1";
  double gap = 0.01;
  unsigned n = 20;
  std::size_t runs = 15;
  std::uint64_t seed = 0;
  double target = 0.5;
  unsigned threads = 1;
  bool low_memory = false;
  bool no_plot = false;
  std::string out;
  std::string summary;
  std::string svg;
};

int cmd_experiment(const ExperimentFlags& f) {
  ExperimentConfig cfg;
  cfg.seed = f.seed;
  cfg.runs = f.runs;
  cfg.target = f.target;
  cfg.threads = f.threads;

  ExperimentTable table;
  json params = {{"experiment", f.which}, {"runs", f.runs},
                 {"seed", f.seed},        {"target", f.target},
                 {"phase_range", {cfg.range.lo, cfg.range.hi}}};
  PlotSpec plot;
  if (f.which == "fig2") {
    std::vector<unsigned> ns;
    for (const auto& s : split_list(f.n_list)) {
      ns.push_back(static_cast<unsigned>(std::stoul(s)));
    }
    table = run_fig2(ns, f.gap, cfg);
    params["n_list"] = ns;
    params["gap"] = f.gap;
    plot = {"Mean iterations to success probability >= " + format_double(f.target) +
                " (gap " + format_double(f.gap) + ")",
            "qubits n", "iterations", {}};
    PlotSeries s{"mean over " + std::to_string(f.runs) + " runs", {}, {}};
    for (const auto& g : table.summary) {
      s.x.push_back(g.n);
      s.y.push_back(g.mean_iterations);
    }
    plot.series.push_back(std::move(s));
  } else {
    std::vector<double> gaps;
    for (const auto& s : split_list(f.gaps)) {
      gaps.push_back(std::stod(s));
    }
    const unsigned n = f.low_memory ? std::min(f.n, 16U) : f.n;
    table = run_fig3(n, gaps, cfg);
    params["n"] = n;
    params["gaps"] = gaps;
    plot = {"Iterations versus eigengap (n = " + std::to_string(n) + ")",
            "eigengap", "iterations", {}};
    PlotSeries s{"mean iterations", {}, {}};
    PlotSeries e{"n / ln(r1/r2)", {}, {}};
    for (const auto& g : table.summary) {
      s.x.push_back(g.gap);
      s.y.push_back(g.mean_iterations);
      e.x.push_back(g.gap);
      e.y.push_back(g.mean_estimate);
    }
    plot.series.push_back(std::move(s));
    plot.series.push_back(std::move(e));
  }

  std::ostringstream rows;
  write_rows_csv(rows, table.rows);
  std::ostringstream summary;
  write_summary_csv(summary, table.summary);
  const auto manifest = manifest_for("experiment " + f.which, params, f.seed);

  if (f.out.empty() || f.out == "-") {
    std::cout << rows.str();
  } else {
    write_text_file(f.out, rows.str());
    write_manifest(f.out, manifest);
  }
  std::string summary_path = f.summary;
  if (summary_path.empty() && !f.out.empty() && f.out != "-") {
    summary_path = f.out + ".summary.csv";
  }
  if (!summary_path.empty()) {
    write_text_file(summary_path, summary.str());
  } else {
    std::cerr << summary.str();
  }
  if (!f.no_plot) {
    std::string svg_path = f.svg;
    if (svg_path.empty() && !f.out.empty() && f.out != "-") {
      svg_path = f.out + ".svg";
    }
    if (!svg_path.empty()) {
      write_text_file(svg_path, render_svg(plot));
    }
  }
  for (const auto& g : table.summary) {
    if (g.converged < g.runs) {
      return kExitNoConvergence;
    }
  }
  return kExitOk;
}

int cmd_estimate(double phi1, double phi2, unsigned n, double eta) {
  const double est = estimate_iterations(phi1, phi2, n, eta);
  std::cout << format_double(est) << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qpower: measurement-driven shifted power iteration and "
               "phase-circuit optimization"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(qpower::kVersion));

  int code = kExitOk;
  try {
    EngineFlags power_flags;
    std::string power_input;
    std::string power_init = "uniform";
    std::string power_json;
    bool power_trace = false;
    auto* power = app.add_subcommand("power", "estimate the dominant eigenpair "
                                              "of an operator file");
    power->add_option("input", power_input, "diagonal or dense operator JSON")
        ->required();
    power_flags.attach(power);
    power->add_option("--init", power_init, "uniform | random")
        ->check(CLI::IsMember({"uniform", "random"}));
    power->add_option("--json", power_json, "write a JSON report here");
    power->add_flag("--trace", power_trace, "print the iteration trace");

    EngineFlags qubo_flags;
    SolveFlags qubo_solve;
    std::string qubo_input;
    auto* solve_qubo =
        app.add_subcommand("solve-qubo", "solve a QUBO instance file");
    solve_qubo->add_option("input", qubo_input)->required();
    qubo_flags.attach(solve_qubo);
    solve_qubo->add_option("--sense", qubo_solve.sense, "max | min")
        ->check(CLI::IsMember({"max", "min"}));
    solve_qubo->add_option("--convention", qubo_solve.convention, "binary | ising")
        ->check(CLI::IsMember({"binary", "ising"}));
    solve_qubo->add_option("--readout", qubo_solve.readout, "argmax | sample")
        ->check(CLI::IsMember({"argmax", "sample"}));
    solve_qubo->add_option("--json", qubo_solve.json_out, "write a JSON report");
    solve_qubo->add_flag("--verify", qubo_solve.verify,
                         "compare with exhaustive search (n <= 20)");

    EngineFlags qap_flags;
    SolveFlags qap_solve;
    std::string qap_input;
    std::optional<double> qap_penalty;
    auto* solve_qap_cmd =
        app.add_subcommand("solve-qap", "solve a quadratic assignment file");
    solve_qap_cmd->add_option("input", qap_input)->required();
    qap_flags.attach(solve_qap_cmd);
    solve_qap_cmd->add_option("--penalty", qap_penalty, "constraint penalty P");
    solve_qap_cmd->add_option("--readout", qap_solve.readout, "argmax | sample")
        ->check(CLI::IsMember({"argmax", "sample"}));
    solve_qap_cmd->add_option("--json", qap_solve.json_out, "write a JSON report");
    solve_qap_cmd->add_flag("--verify", qap_solve.verify,
                            "compare with exhaustive search");

    std::string compile_input;
    std::string compile_convention = "binary";
    std::string compile_sense;
    std::optional<double> compile_penalty;
    std::string compile_out;
    auto* compile_cmd = app.add_subcommand(
        "compile", "compile a QUBO or QAP file into a phase circuit");
    compile_cmd->add_option("input", compile_input)->required();
    compile_cmd->add_option("--convention", compile_convention, "binary | ising")
        ->check(CLI::IsMember({"binary", "ising"}));
    compile_cmd->add_option("--sense", compile_sense, "max | min")
        ->check(CLI::IsMember({"max", "min"}));
    compile_cmd->add_option("--penalty", compile_penalty, "QAP penalty P");
    compile_cmd->add_option("-o,--out", compile_out, "output path (default stdout)");

    ExperimentFlags ef;
    auto* experiment =
        app.add_subcommand("experiment", "iteration-count studies");
    experiment->add_option("which", ef.which, "fig2 | fig3")
        ->required()
        ->check(CLI::IsMember({"fig2", "fig3"}));
    experiment->add_option("--n-list", ef.n_list, "fig2 qubit counts, comma separated");
    experiment->add_option("--gap", ef.gap, "fig2 eigengap");
    experiment->add_option("--n", ef.n, "fig3 qubit count");
    experiment->add_option("--gaps", ef.gaps, "fig3 gaps, comma separated");
    experiment->add_option("--runs", ef.runs, "runs per group");
    experiment->add_option("--seed", ef.seed, "base seed");
    experiment->add_option("--target", ef.target, "success probability target");
    experiment->add_option("--threads", ef.threads, "worker threads");
    experiment->add_flag("--low-memory", ef.low_memory, "fig3 at n = 16");
    experiment->add_flag("--no-plot", ef.no_plot, "skip the SVG plot");
    experiment->add_option("-o,--out", ef.out, "rows CSV (default stdout)");
    experiment->add_option("--summary", ef.summary, "per-group summary CSV");
    experiment->add_option("--svg", ef.svg, "SVG plot path");

    double phi1 = 0.0;
    double phi2 = 0.0;
    unsigned est_n = 1;
    double est_eta = 1.0;
    auto* estimate = app.add_subcommand(
        "estimate", "iteration estimate n / ln(|eta - e^{i phi1}| / |eta - e^{i phi2}|)");
    estimate->add_option("--phi1", phi1)->required();
    estimate->add_option("--phi2", phi2)->required();
    estimate->add_option("--n", est_n)->required();
    estimate->add_option("--eta", est_eta);

    try {
      app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int rc = app.exit(e);
      return rc == 0 ? kExitOk : kExitInput;
    }

    if (*power) {
      code = cmd_power(power_input, power_flags, power_init, power_json,
                       power_trace);
    } else if (*solve_qubo) {
      code = cmd_solve_qubo(qubo_input, qubo_flags, qubo_solve);
    } else if (*solve_qap_cmd) {
      code = cmd_solve_qap(qap_input, qap_flags, qap_solve, qap_penalty);
    } else if (*compile_cmd) {
      code = cmd_compile(compile_input, compile_convention, compile_sense,
                         compile_penalty, compile_out);
    } else if (*experiment) {
      code = cmd_experiment(ef);
    } else if (*estimate) {
      code = cmd_estimate(phi1, phi2, est_n, est_eta);
    }
  } catch (const DeadBranchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const DegenerateIterateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const qpower::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return code;
}
