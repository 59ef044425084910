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

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>

#include "qpower/io.hpp"

using namespace qpower;
using Catch::Matchers::ContainsSubstring;
using Catch::Matchers::StartsWith;
using Catch::Matchers::WithinAbs;

namespace fs = std::filesystem;

namespace {

struct Run {
  int code = -1;
  std::string out;
};

fs::path workdir() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / "qpower_test_cli";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path write(const std::string& name, const std::string& text) {
  const auto p = workdir() / name;
  std::ofstream(p) << text;
  return p;
}

Run cli(const std::string& args) {
  static int counter = 0;
  const auto capture = workdir() / ("stdout_" + std::to_string(counter++));
  const std::string cmd = std::string("\"") + QPOWER_CLI_PATH + "\" " + args +
                          " > \"" + capture.string() + "\" 2>&1";
  const int status = std::system(cmd.c_str());
  Run r;
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  r.out = slurp(capture);
  return r;
}

std::string quoted(const fs::path& p) { return "\"" + p.string() + "\""; }

double field(const std::string& text, const std::string& key) {
  const auto pos = text.find(key);
  REQUIRE(pos != std::string::npos);
  return std::stod(text.substr(pos + key.size()));
}

const char* kSmallQubo =
    R"({"n": 2, "linear": [1, -2], "quadratic": [[0, 1, 3]], "sense": "max"})";

}  // namespace

TEST_CASE("power reports the pi/2 eigenphase", "[cli]") {
  const auto f = write("half.json", R"({"n": 1, "phases": [0, 1.5707963267948966]})");
  const auto r = cli("power " + quoted(f));
  CHECK(r.code == 0);
  CHECK_THAT(field(r.out, "eigenphase:"), WithinAbs(std::numbers::pi / 2.0, 1e-6));
}

TEST_CASE("power on the identity is a dead branch", "[cli]") {
  const auto f = write("identity.json", R"({"n": 2, "phases": [0, 0, 0, 0]})");
  CHECK(cli("power " + quoted(f)).code == 3);
}

TEST_CASE("power reports non-convergence", "[cli]") {
  const auto f = write("slow.json", R"({"n": 2, "phases": [0.5, 0.51, 0.1, 0.2]})");
  CHECK(cli("power " + quoted(f) + " --max-iterate 4").code == 3);
}

TEST_CASE("power on a dense operator", "[cli]") {
  const auto f = write("flip.json",
                       R"({"n": 1, "re": [[0, 1], [1, 0]], "im": [[0, 0], [0, 0]]})");
  // the uniform start is the eigenvalue-1 eigenvector, so it is a dead branch
  CHECK(cli("power " + quoted(f)).code == 3);
  const auto r = cli("power " + quoted(f) + " --init random --seed 1");
  CHECK(r.code == 0);
  CHECK_THAT(field(r.out, "eigenphase:"), WithinAbs(std::numbers::pi, 1e-6));
  CHECK_THAT(field(r.out, "success prob:"), WithinAbs(1.0, 1e-9));
}

TEST_CASE("sample mode reports are reproducible", "[cli]") {
  const auto f = write("rand.json",
                       R"({"n": 2, "phases": [0.3, 2.0, 1.1, -0.7]})");
  const auto a_json = workdir() / "sample_a.json";
  const auto b_json = workdir() / "sample_b.json";
  const auto a = cli("power " + quoted(f) + " --mode sample --seed 1 --trace --json " +
                     quoted(a_json));
  const auto b = cli("power " + quoted(f) + " --mode sample --seed 1 --trace --json " +
                     quoted(b_json));
  CHECK(a.code == b.code);
  CHECK(a.out == b.out);
  CHECK(slurp(a_json) == slurp(b_json));
  CHECK(fs::exists(workdir() / "sample_a.json.manifest.json"));
}

TEST_CASE("solve-qubo on the two-variable instance", "[cli]") {
  const auto f = write("small.json", kSmallQubo);
  const auto r = cli("solve-qubo " + quoted(f) + " --sense max --verify");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("bitstring:     11"));
  CHECK_THAT(r.out, ContainsSubstring("value:         2"));
  CHECK_THAT(r.out, ContainsSubstring("(agree)"));

  const auto m = cli("solve-qubo " + quoted(f) + " --sense min");
  CHECK(m.code == 0);
  CHECK_THAT(m.out, ContainsSubstring("bitstring:     01"));
}

TEST_CASE("solve-qubo input errors exit 2", "[cli]") {
  const auto empty = write("empty.json", "");
  CHECK(cli("solve-qubo " + quoted(empty)).code == 2);
  const auto blank = write("blank.json", "{}");
  CHECK(cli("solve-qubo " + quoted(blank)).code == 2);
  const auto flat = write("flat.json", R"({"n": 2, "linear": [0, 0]})");
  CHECK(cli("solve-qubo " + quoted(flat)).code == 2);
  CHECK(cli("solve-qubo " + quoted(workdir() / "nope.json")).code == 2);
  CHECK(cli("solve-qubo").code == 2);
}

TEST_CASE("solve-qubo low confidence exits 4", "[cli]") {
  // eight near-tied maxima: 111xyz scores 3 - 0.001 (x + y + z)
  const auto f = write(
      "tied.json",
      R"({"n": 6, "linear": [1, 1, 1, -0.001, -0.001, -0.001], "quadratic": []})");
  const auto r = cli("solve-qubo " + quoted(f) + " --tol 1");
  CHECK(r.code == 4);
}

TEST_CASE("solve-qubo with the spin convention", "[cli]") {
  const auto f = write("chain.json",
                       R"({"n": 4, "linear": [0, 0, 0, 0],
                           "quadratic": [[0, 1, -1], [1, 2, -1], [2, 3, -1]],
                           "sense": "min"})");
  const auto r = cli("solve-qubo " + quoted(f) + " --convention ising --tol 1e-10");
  CHECK(r.code == 0);
  CHECK_THAT(r.out, ContainsSubstring("value:         -3"));
}

TEST_CASE("solve-qap", "[cli]") {
  const auto f = write("qap2.json",
                       R"({"n": 2, "F": [[0, 3], [1, 0]], "D": [[0, 5], [2, 0]],
                           "B": [[0, 7], [0, 0]]})");
  const auto r = cli("solve-qap " + quoted(f) + " --verify");
  CHECK((r.code == 0 || r.code == 3 || r.code == 4));
  if (r.code == 0) {
    CHECK_THAT(r.out, ContainsSubstring("permutation:   0 1"));
    CHECK_THAT(r.out, ContainsSubstring("(agree)"));
  }
}

TEST_CASE("compile emits the objective gates and one offset gate", "[cli]") {
  const auto f = write(
      "full4.json",
      R"({"n": 4, "linear": [1, 2, 3, 4],
          "quadratic": [[0,1,1],[0,2,2],[0,3,3],[1,2,4],[1,3,5],[2,3,6]]})");
  const auto out = workdir() / "full4.circuit.json";
  const auto r = cli("compile " + quoted(f) + " -o " + quoted(out));
  REQUIRE(r.code == 0);
  const auto j = json::parse(slurp(out));
  CHECK(j["gate_count"]["objective"] == 10);
  CHECK(j["gate_count"]["offset"] == 1);
  CHECK(j["gates"].size() == 11);
  CHECK(fs::exists(workdir() / "full4.circuit.json.manifest.json"));

  // round trip through the file matches the in-memory compilation
  const auto q = qubo_from_json(read_json_file(f));
  const auto direct = circuit_to_diagonal(
      compile(q, GateConvention::Binary01, make_scaling(q, Sense::Maximize)));
  const auto parsed = circuit_to_diagonal(circuit_from_json(j));
  for (std::size_t x = 0; x < direct.size(); ++x) {
    CHECK_THAT(parsed.phases()[x], WithinAbs(direct.phases()[x], 1e-12));
  }
}

TEST_CASE("compile keeps zero-phase gates", "[cli]") {
  const auto f = write("zero.json",
                       R"({"n": 3, "linear": [0, 0, 0], "quadratic": [[0, 2, 0]]})");
  const auto r = cli("compile " + quoted(f));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["gates"].size() == 5);
  for (const auto& g : j["gates"]) {
    if (g["type"] == "phase") {
      CHECK(g["phase0"] == 0.0);
      CHECK(g["phase1"] == 0.0);
    } else {
      CHECK(g["phase10"] == 0.0);
      CHECK(g["phase11"] == 0.0);
    }
  }
}

TEST_CASE("compile a QAP file", "[cli]") {
  const auto f = write("qap_small.json",
                       R"({"n": 2, "F": [[0, 1], [1, 0]], "D": [[0, 2], [2, 0]],
                           "B": [[1, 0], [0, 1]]})");
  const auto r = cli("compile " + quoted(f));
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(j["n"] == 4);
  CHECK(j["source"] == "qap");
  CHECK(j["qap"]["penalty"].get<double>() > 0.0);
}

TEST_CASE("experiment CSV is byte-identical for a fixed seed", "[cli]") {
  const auto a = workdir() / "fig2_a.csv";
  const auto b = workdir() / "fig2_b.csv";
  const std::string args = "experiment fig2 --n-list 4,5 --gap 0.05 --runs 3 --seed 7 ";
  REQUIRE(cli(args + "-o " + quoted(a)).code == 0);
  REQUIRE(cli(args + "--threads 3 -o " + quoted(b)).code == 0);
  const auto text = slurp(a);
  CHECK(text == slurp(b));
  CHECK_THAT(text, StartsWith("experiment,n,gap,run_index,seed,iterations,converged\n"));
  CHECK(slurp(workdir() / "fig2_a.csv.summary.csv") ==
        slurp(workdir() / "fig2_b.csv.summary.csv"));
  CHECK_THAT(slurp(workdir() / "fig2_a.csv.svg"), ContainsSubstring("<svg"));
  CHECK(fs::exists(workdir() / "fig2_a.csv.manifest.json"));

  const auto c = workdir() / "fig2_c.csv";
  REQUIRE(cli(args + "--no-plot -o " + quoted(c)).code == 0);
  CHECK_FALSE(fs::exists(workdir() / "fig2_c.csv.svg"));
}

TEST_CASE("experiment fig3 on stdout", "[cli]") {
  const auto r = cli("experiment fig3 --n 6 --gaps 0.05,0.1 --runs 2 --summary " +
                     quoted(workdir() / "fig3_summary.csv"));
  CHECK(r.code == 0);
  CHECK_THAT(r.out, StartsWith("experiment,n,gap,run_index,seed,iterations,converged\n"));
  CHECK_THAT(slurp(workdir() / "fig3_summary.csv"),
             StartsWith("experiment,n,gap,runs,converged,mean_iterations,mean_estimate\n"));
}

TEST_CASE("estimate", "[cli]") {
  const auto r = cli("estimate --phi1 1.5707963267948966 --phi2 0.7853981633974483 --n 10");
  CHECK(r.code == 0);
  CHECK_THAT(std::stod(r.out), WithinAbs(16.287, 1e-3));
  CHECK(cli("estimate --phi1 0.5 --phi2 0.5 --n 4").code == 2);
}
