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

#include "qpower/io.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qpower/error.hpp"

namespace qpower {

namespace {

template <typename F>
auto parse_guard(std::string_view what, F&& body) -> decltype(body()) {
  try {
    return body();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    throw ParseError(std::string(what) + ": " + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParseError(std::string("missing field \"") + key + "\"");
  }
  return j.at(key);
}

unsigned require_n(const json& j) {
  const auto& v = require(j, "n");
  if (!v.is_number_integer() || v.get<long long>() < 1) {
    throw ParseError("\"n\" must be a positive integer");
  }
  return v.get<unsigned>();
}

Eigen::MatrixXd matrix_from_json(const json& j, unsigned n, const char* key) {
  const auto& rows = require(j, key);
  if (!rows.is_array() || rows.size() != n) {
    throw ParseError(std::string("\"") + key + "\" must have " +
                     std::to_string(n) + " rows");
  }
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(nn, nn);
  for (Eigen::Index r = 0; r < nn; ++r) {
    const auto& row = rows.at(static_cast<std::size_t>(r));
    if (!row.is_array() || row.size() != n) {
      throw ParseError(std::string("\"") + key + "\" row " +
                       std::to_string(r) + " must have " + std::to_string(n) +
                       " entries");
    }
    for (Eigen::Index c = 0; c < nn; ++c) {
      m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
  }
  return m;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(m(r, c));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (const char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw Error("cannot write " + path.string());
  }
  out << text;
}

std::string sense_name(Sense sense) {
  return sense == Sense::Maximize ? "max" : "min";
}

Sense parse_sense(std::string_view text) {
  if (text == "max" || text == "maximize") {
    return Sense::Maximize;
  }
  if (text == "min" || text == "minimize") {
    return Sense::Minimize;
  }
  throw ParseError("sense must be \"max\" or \"min\", got \"" +
                   std::string(text) + "\"");
}

QuboInstance qubo_from_json(const json& j) {
  return parse_guard("QUBO", [&] {
    const unsigned n = require_n(j);
    const auto& lin = require(j, "linear");
    if (!lin.is_array()) {
      throw ParseError("\"linear\" must be an array");
    }
    auto linear = lin.get<std::vector<double>>();
    std::vector<QuadraticTerm> quadratic;
    if (j.contains("quadratic")) {
      for (const auto& t : j.at("quadratic")) {
        if (!t.is_array() || t.size() != 3) {
          throw ParseError("quadratic entries must be [j, k, q]");
        }
        quadratic.push_back(
            {t.at(0).get<unsigned>(), t.at(1).get<unsigned>(), t.at(2).get<double>()});
      }
    }
    const Sense sense =
        j.contains("sense") ? parse_sense(j.at("sense").get<std::string>())
                            : Sense::Maximize;
    return QuboInstance(n, std::move(linear), std::move(quadratic), sense);
  });
}

json qubo_to_json(const QuboInstance& q) {
  json j;
  j["n"] = q.num_variables();
  j["linear"] = std::vector<double>(q.linear().begin(), q.linear().end());
  json quad = json::array();
  for (const auto& t : q.quadratic()) {
    quad.push_back(json::array({t.j, t.k, t.q}));
  }
  j["quadratic"] = std::move(quad);
  j["sense"] = sense_name(q.sense());
  return j;
}

QapInstance qap_from_json(const json& j) {
  return parse_guard("QAP", [&] {
    const unsigned n = require_n(j);
    return QapInstance(matrix_from_json(j, n, "F"), matrix_from_json(j, n, "D"),
                       matrix_from_json(j, n, "B"));
  });
}

json qap_to_json(const QapInstance& inst) {
  json j;
  j["n"] = inst.size();
  j["F"] = matrix_to_json(inst.flow());
  j["D"] = matrix_to_json(inst.distance());
  j["B"] = matrix_to_json(inst.allocation());
  return j;
}

Operator operator_from_json(const json& j) {
  return parse_guard("operator", [&]() -> Operator {
    const unsigned n = require_n(j);
    if (n > Limits{}.max_state_qubits) {
      throw CapacityError("operator on " + std::to_string(n) +
                          " qubits exceeds the state cap");
    }
    const std::size_t dim = std::size_t{1} << n;
    if (j.contains("phases")) {
      auto phases = j.at("phases").get<std::vector<double>>();
      if (phases.size() != dim) {
        throw ParseError("\"phases\" must have 2^n = " + std::to_string(dim) +
                         " entries");
      }
      return DiagonalOperator(std::move(phases));
    }
    if (j.contains("re") && j.contains("im")) {
      if (n > Limits{}.max_dense_qubits) {
        throw CapacityError("dense operators are limited to " +
                            std::to_string(Limits{}.max_dense_qubits) +
                            " qubits");
      }
      const auto re = matrix_from_json(j, static_cast<unsigned>(dim), "re");
      const auto im = matrix_from_json(j, static_cast<unsigned>(dim), "im");
      Eigen::MatrixXcd m(re.rows(), re.cols());
      m.real() = re;
      m.imag() = im;
      return DenseOperator(std::move(m));
    }
    throw ParseError("operator file needs \"phases\" or \"re\"/\"im\"");
  });
}

json circuit_to_json(const PhaseCircuit& circuit) {
  json j;
  j["n"] = circuit.num_qubits();
  json gates = json::array();
  for (const auto& gate : circuit.gates()) {
    if (const auto* g = std::get_if<SinglePhase>(&gate)) {
      gates.push_back({{"type", "phase"},
                       {"qubit", g->qubit},
                       {"phase0", g->phase0},
                       {"phase1", g->phase1}});
    } else {
      const auto& c = std::get<ControlledPhase>(gate);
      gates.push_back({{"type", "cphase"},
                       {"control", c.control},
                       {"target", c.target},
                       {"phase10", c.phase10},
                       {"phase11", c.phase11}});
    }
  }
  j["gates"] = std::move(gates);
  return j;
}

PhaseCircuit circuit_from_json(const json& j) {
  return parse_guard("circuit", [&] {
    PhaseCircuit circuit(require_n(j));
    for (const auto& g : require(j, "gates")) {
      const auto type = require(g, "type").get<std::string>();
      if (type == "phase") {
        circuit.add_phase(require(g, "qubit").get<unsigned>(),
                          require(g, "phase0").get<double>(),
                          require(g, "phase1").get<double>());
      } else if (type == "cphase") {
        circuit.add_controlled_phase(require(g, "control").get<unsigned>(),
                                     require(g, "target").get<unsigned>(),
                                     require(g, "phase10").get<double>(),
                                     require(g, "phase11").get<double>());
      } else {
        throw ParseError("unknown gate type \"" + type + "\"");
      }
    }
    return circuit;
  });
}

json scaling_to_json(const ScalingPlan& plan) {
  return {{"s", plan.s},
          {"offset", plan.offset},
          {"lower_bound", plan.lower_bound},
          {"upper_bound", plan.upper_bound},
          {"sense", sense_name(plan.sense)}};
}

json solution_to_json(const Solution& sol) {
  json j;
  j["bitstring"] = bits_to_string(sol.bits);
  j["index"] = sol.index;
  j["value"] = sol.value;
  j["iterations"] = sol.iterations;
  j["converged"] = sol.converged;
  j["phi_recovered"] =
      sol.phi_recovered ? json(*sol.phi_recovered) : json(nullptr);
  j["success_prob"] = sol.success_prob;
  j["readout_set"] = sol.readout_set;
  j["gate_count"] = sol.gate_count;
  j["scaling"] = scaling_to_json(sol.plan);
  return j;
}

json trace_to_json(const PowerTrace& trace) {
  json records = json::array();
  for (const auto& r : trace.records) {
    records.push_back(
        {{"k", r.k},
         {"branch", r.branch},
         {"p1", r.p1},
         {"alpha", r.alpha},
         {"phi_estimate", r.phi_estimate ? json(*r.phi_estimate) : json(nullptr)},
         {"success_prob", r.success_prob ? json(*r.success_prob) : json(nullptr)}});
  }
  return {{"mode", trace.mode == CollapseMode::PostSelect ? "postselect" : "sample"},
          {"seed", trace.seed},
          {"records", std::move(records)}};
}

std::string format_double(double value) {
  if (std::isnan(value)) {
    return "nan";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, res.ptr};
}

void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows) {
  out << "experiment,n,gap,run_index,seed,iterations,converged\n";
  for (const auto& r : rows) {
    out << r.experiment << ',' << r.n << ',' << format_double(r.gap) << ','
        << r.run_index << ',' << r.seed << ',' << r.iterations << ','
        << (r.converged ? "true" : "false") << '\n';
  }
}

void write_summary_csv(std::ostream& out,
                       std::span<const GroupSummary> summary) {
  out << "experiment,n,gap,runs,converged,mean_iterations,mean_estimate\n";
  for (const auto& g : summary) {
    out << g.experiment << ',' << g.n << ',' << format_double(g.gap) << ','
        << g.runs << ',' << g.converged << ','
        << format_double(g.mean_iterations) << ','
        << format_double(g.mean_estimate) << '\n';
  }
}

std::string render_svg(const PlotSpec& spec) {
  constexpr double width = 640.0;
  constexpr double height = 420.0;
  constexpr double left = 70.0;
  constexpr double right = 20.0;
  constexpr double top = 40.0;
  constexpr double bottom = 60.0;
  static constexpr const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c",
                                           "#9467bd", "#ff7f0e"};

  double x0 = std::numeric_limits<double>::infinity();
  double x1 = -x0;
  double y0 = 0.0;
  double y1 = -x0;
  for (const auto& s : spec.series) {
    for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) {
        continue;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (!(x1 > x0)) {
    x0 = std::isfinite(x0) ? x0 - 1.0 : 0.0;
    x1 = x0 + 2.0;
  }
  if (!(y1 > y0)) {
    y1 = y0 + 1.0;
  }
  const double pw = width - left - right;
  const double ph = height - top - bottom;
  auto sx = [&](double x) { return left + (x - x0) / (x1 - x0) * pw; };
  auto sy = [&](double y) { return top + ph - (y - y0) / (y1 - y0) * ph; };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" font-family=\"sans-serif\" "
      << "font-size=\"12\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" "
      << "font-size=\"15\">" << xml_escape(spec.title) << "</text>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\""
      << left + pw << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + ph << "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double xv = x0 + (x1 - x0) * t / 5.0;
    const double yv = y0 + (y1 - y0) * t / 5.0;
    svg << "<text x=\"" << sx(xv) << "\" y=\"" << top + ph + 18
        << "\" text-anchor=\"middle\">" << format_double(std::round(xv * 1e4) / 1e4)
        << "</text>\n";
    svg << "<text x=\"" << left - 6 << "\" y=\"" << sy(yv) + 4
        << "\" text-anchor=\"end\">" << format_double(std::round(yv * 1e2) / 1e2)
        << "</text>\n";
  }
  svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15
      << "\" text-anchor=\"middle\">" << xml_escape(spec.x_label) << "</text>\n";
  svg << "<text transform=\"translate(16," << top + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << xml_escape(spec.y_label)
      << "</text>\n";
  for (std::size_t s = 0; s < spec.series.size(); ++s) {
    const auto& series = spec.series[s];
    const char* color = colors[s % std::size(colors)];
    svg << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
      if (std::isfinite(series.y[i])) {
        svg << sx(series.x[i]) << ',' << sy(series.y[i]) << ' ';
      }
    }
    svg << "\"/>\n";
    for (std::size_t i = 0; i < series.x.size() && i < series.y.size(); ++i) {
      if (std::isfinite(series.y[i])) {
        svg << "<circle cx=\"" << sx(series.x[i]) << "\" cy=\""
            << sy(series.y[i]) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
      }
    }
    svg << "<text x=\"" << left + 10 << "\" y=\"" << top + 14 + 16.0 * s
        << "\" fill=\"" << color << "\">" << xml_escape(series.label)
        << "</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

json RunManifest::to_json() const {
  return {{"command", command},
          {"parameters", parameters},
          {"seed", seed},
          {"version", version},
          {"timestamp", timestamp}};
}

std::string utc_timestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const std::filesystem::path& output,
                    const RunManifest& manifest) {
  auto path = output;
  path += ".manifest.json";
  write_text_file(path, manifest.to_json().dump(2) + "\n");
}

}  // namespace qpower
