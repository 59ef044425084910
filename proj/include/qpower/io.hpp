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
 * File formats and report emission.
 *
 *   QUBO      {"n": int, "linear": [c...], "quadratic": [[j, k, q], ...],
 *              "sense": "max" | "min"}
 *   QAP       {"n": int, "F": [[...]], "D": [[...]], "B": [[...]]}
 *   diagonal  {"n": int, "phases": [...]}
 *   dense     {"n": int, "re": [[...]], "im": [[...]]}
 *   circuit   {"n": int, "gates": [{"type": "phase", ...} |
 *                                  {"type": "cphase", ...}], ...}
 *
 * Angles are radians everywhere. Numbers are written in shortest
 * round-trip form, independent of locale.
 */

#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "qpower/core.hpp"
#include "qpower/experiments.hpp"
#include "qpower/qap.hpp"
#include "qpower/quantum_power.hpp"
#include "qpower/qubo.hpp"

namespace qpower {

inline constexpr std::string_view kVersion = "0.1.0";

using json = nlohmann::ordered_json;

/// Reads and parses a JSON file; ParseError on I/O or syntax failure.
json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

QuboInstance qubo_from_json(const json& j);
json qubo_to_json(const QuboInstance& q);

QapInstance qap_from_json(const json& j);
json qap_to_json(const QapInstance& inst);

/// Diagonal when "phases" is present, dense when "re"/"im" are.
Operator operator_from_json(const json& j);

json circuit_to_json(const PhaseCircuit& circuit);
PhaseCircuit circuit_from_json(const json& j);

json scaling_to_json(const ScalingPlan& plan);
json solution_to_json(const Solution& sol);
json trace_to_json(const PowerTrace& trace);

std::string sense_name(Sense sense);
Sense parse_sense(std::string_view text);

/// Shortest representation that reads back to the same double.
std::string format_double(double value);

/// experiment,n,gap,run_index,seed,iterations,converged
void write_rows_csv(std::ostream& out, std::span<const ExperimentRow> rows);
/// experiment,n,gap,runs,converged,mean_iterations,mean_estimate
void write_summary_csv(std::ostream& out,
                       std::span<const GroupSummary> summary);

struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
};

struct PlotSpec {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<PlotSeries> series;
};

/// Self-contained SVG line plot with linear axes.
std::string render_svg(const PlotSpec& spec);

/// Parameters of one CLI run. Re-running with the same manifest reproduces
/// every output byte for byte; only the timestamp differs.
struct RunManifest {
  std::string command;
  json parameters = json::object();
  std::uint64_t seed = 0;
  std::string version{kVersion};
  std::string timestamp;

  [[nodiscard]] json to_json() const;
};

/// UTC time, ISO 8601.
std::string utc_timestamp();

/// Writes the manifest next to @p output as "<output>.manifest.json".
void write_manifest(const std::filesystem::path& output,
                    const RunManifest& manifest);

}  // namespace qpower
