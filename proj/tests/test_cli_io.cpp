/* Copyright 2026 The timeslit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "timeslit/commands.hpp"
#include "timeslit/errors.hpp"
#include "timeslit/output.hpp"
#include "timeslit/scenario.hpp"

using namespace timeslit;
namespace fs = std::filesystem;

namespace {

json minimal() {
  return json::parse(R"({
    "theory": "stueckelberg",
    "setup": { "wavelength_nm": 850, "photon_count": 300, "flight_distance_m": 0.01 }
  })");
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("timeslit_cli_io_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string config_message(const json& j) {
  try {
    scenario_from_json(j);
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

Scenario desk(const std::string& theory, const fs::path& dir, const std::string& prefix) {
  json j = minimal();
  j["theory"] = theory;
  j["output"] = {{"dir", dir.string()}, {"prefix", prefix}};
  return scenario_from_json(j);
}

}  // namespace

TEST_CASE("minimal scenario takes defaults") {
  const Scenario s = scenario_from_json(minimal());
  CHECK(s.theory == Theory::stueckelberg);
  CHECK(s.engine == Engine::closed_form);
  CHECK(s.workers == 1);
  CHECK(s.packet == PacketSpec{});
  CHECK(s.analysis.threshold_fraction == 0.2);
  CHECK(s.output.dir == "out");
  CHECK(s.setup.wavelength_nm == 850.0);
  CHECK(s.setup.photon_count == 300);
}

TEST_CASE("validation names the field") {
  json j = minimal();
  j["packet"] = {{"gate_width", -0.5}};
  CHECK(config_message(j).find("gate_width") != std::string::npos);

  j = minimal();
  j["setup"].erase("photon_count");
  CHECK(config_message(j).find("photon_count") != std::string::npos);

  j = minimal();
  j["theory"] = "newton";
  CHECK_FALSE(config_message(j).empty());

  j = minimal();
  j["analysis"] = {{"threshold_fraction", 1.5}};
  CHECK(config_message(j).find("threshold_fraction") != std::string::npos);

  j = minimal();
  j["packet"] = {{"p0", "fast"}};
  CHECK(config_message(j).find("p0") != std::string::npos);
}

TEST_CASE("unknown keys suggest the nearest one") {
  json j = minimal();
  j["packet"] = {{"gatewidth", 0.3}};
  const std::string msg = config_message(j);
  CHECK(msg.find("gatewidth") != std::string::npos);
  CHECK(msg.find("gate_width") != std::string::npos);

  j = minimal();
  j["engin"] = "quadrature";
  CHECK(config_message(j).find("engine") != std::string::npos);
  CHECK(edit_distance("kitten", "sitting") == 3);
  CHECK(edit_distance("", "abc") == 3);
}

TEST_CASE("file errors") {
  CHECK_THROWS_AS(parse_scenario("/nonexistent/dir/scenario.json"), IoError);
  const fs::path dir = scratch("malformed");
  write_text(dir / "bad.json", "{ \"theory\": ");
  CHECK_THROWS_AS(parse_scenario(dir / "bad.json"), ConfigError);
  write_text(dir / "good.json", minimal().dump());
  CHECK(parse_scenario(dir / "good.json") == scenario_from_json(minimal()));
  fs::remove_all(dir);
}

TEST_CASE("round trip and hash") {
  json j = minimal();
  j["engine"] = "quadrature";
  j["workers"] = 3;
  j["packet"] = {{"gate_width", 0.25}, {"energy", 1.05}, {"profile", "rectangular"}};
  j["grid"] = {{"observation", {{"x_min", 5}, {"x_max", 15}, {"n_x", 21},
                                {"t_min", -100}, {"t_max", 100}, {"n_t", 401}}}};
  const Scenario s = scenario_from_json(j);
  const Scenario back = scenario_from_json(to_json(s));
  CHECK(back == s);
  CHECK(canonical_text(back) == canonical_text(s));
  CHECK(scenario_hash(back) == scenario_hash(s));
  CHECK(scenario_hash(s).size() == 16);
  CHECK(scenario_hash(s) != scenario_hash(scenario_from_json(minimal())));
  // FNV-1a reference values.
  CHECK(fnv1a_hex("") == "cbf29ce484222325");
  CHECK(fnv1a_hex("a") == "af63dc4c8601ec8c");
}

TEST_CASE("csv headers carry units") {
  IntensityTrace tr;
  tr.times = {0.0, 1.0};
  tr.intensity = {0.5, 0.25};
  const std::string csv = trace_csv(tr, 2.0);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.find(std::string("t[") + kTimeUnit + "]") != std::string::npos);
  CHECK(header.find("t_lab[s]") != std::string::npos);
  CHECK(header.find(std::string("intensity[") + kDensityUnit + "]") != std::string::npos);
  CHECK(csv.find("\n1,2,0.25") != std::string::npos);
  CHECK(format_number(0.1) == "0.1");
  CHECK(format_number(std::nan("")) == "nan");
}

TEST_CASE("trace csv read back") {
  const fs::path dir = scratch("readback");
  IntensityTrace tr;
  for (int i = 0; i < 50; ++i) {
    tr.times.push_back(0.1 * i - 2.0);
    tr.intensity.push_back(1.0 + std::sin(0.37 * i));
  }
  write_text(dir / "t.csv", trace_csv(tr, 1e-18));
  const IntensityTrace back = read_trace_csv(dir / "t.csv");
  CHECK(back.times == tr.times);
  CHECK(back.intensity == tr.intensity);
  CHECK_THROWS_AS(read_trace_csv(dir / "missing.csv"), IoError);
  write_text(dir / "bad.csv", "a,b\n1,2\n");
  CHECK_THROWS_AS(read_trace_csv(dir / "bad.csv"), Error);
  fs::remove_all(dir);
}

TEST_CASE("svg embeds the scenario hash") {
  SvgPlot p;
  p.title = "trace";
  p.hash = "0123456789abcdef";
  p.series.push_back(SvgSeries{{0, 1, 2}, {1, 3, 2}, "I"});
  p.series.push_back(SvgSeries{{1}, {3}, "peaks", "#c00", true});
  const std::string svg = render_svg(p);
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("<metadata>scenario-hash: 0123456789abcdef</metadata>") != std::string::npos);
  CHECK(svg.find("scenario 0123456789abcdef") != std::string::npos);
}

TEST_CASE("estimate command") {
  const fs::path dir = scratch("estimate");
  const RunReport r = cmd_estimate(desk("stueckelberg", dir, "est"));
  CHECK(r.exit_code() == 0);
  REQUIRE(r.estimate.has_value());
  CHECK(r.estimate->diffraction.epsilon_T_product == doctest::Approx(6.52327364470124691e-30).epsilon(1e-9));
  const std::string csv = slurp(dir / "est_estimate.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  for (const EstimateReport* e : {&r.estimate->diffraction, &r.estimate->crude}) {
    CHECK(csv.find(format_number(e->epsilon_T_product)) != std::string::npos);
    CHECK(csv.find(format_number(e->equal_spacing_T)) != std::string::npos);
  }
  CHECK(csv.find(",diffraction,") != std::string::npos);
  CHECK(csv.find(",crude_nonrelativistic,") != std::string::npos);
  CHECK(fs::exists(dir / "est_estimate.svg"));
  const json report = json::parse(slurp(dir / "est_report.json"));
  CHECK(report["status"] == "ok");
  CHECK(report["scenario_hash"] == r.scenario_hash);
  fs::remove_all(dir);
}

TEST_CASE("simulate command") {
  const fs::path dir = scratch("simulate");
  SUBCASE("stueckelberg") {
    const RunReport r = cmd_simulate(desk("stueckelberg", dir, "st"));
    CHECK(r.exit_code() == 0);
    REQUIRE(r.fringes.has_value());
    CHECK(r.fringes->peak_times.size() >= 6);
    const std::string svg = slurp(dir / "st_trace.svg");
    std::size_t markers = 0;
    for (auto pos = svg.find("class=\"peak\""); pos != std::string::npos;
         pos = svg.find("class=\"peak\"", pos + 1)) {
      ++markers;
    }
    CHECK(markers == r.fringes->peak_times.size());
    CHECK(svg.find(r.scenario_hash) != std::string::npos);
    CHECK(fs::exists(dir / "st_trace.csv"));
    CHECK(fs::exists(dir / "st_field.csv"));
    CHECK(fs::exists(dir / "st_peaks.csv"));

    // Re-analysing the written trace reproduces the peaks.
    FringesRequest req;
    req.trace = dir / "st_trace.csv";
    req.out_dir = dir;
    const RunReport again = cmd_fringes(req);
    CHECK(again.exit_code() == 0);
    REQUIRE(again.fringes.has_value());
    CHECK(again.fringes->peak_times == r.fringes->peak_times);
  }
  SUBCASE("control and floquet record no fringes") {
    for (const char* theory : {"schrodinger_control", "floquet"}) {
      const RunReport r = cmd_simulate(desk(theory, dir, theory));
      CHECK(r.exit_code() == 0);
      CHECK(r.no_fringes);
      REQUIRE(r.visibility.has_value());
      if (std::string(theory) == "schrodinger_control") CHECK(*r.visibility == 0.0);
      else CHECK(*r.visibility < 1e-10);
    }
    FringesRequest req;
    req.trace = dir / "schrodinger_control_trace.csv";
    req.out_dir = dir;
    const RunReport f = cmd_fringes(req);
    CHECK(f.exit_code() == 4);
    CHECK(f.error_name == "NoFringes");
    CHECK(fs::exists(dir / "fringes_report.json"));
  }
  SUBCASE("resolution errors are reported") {
    Scenario s = desk("stueckelberg", dir, "coarse");
    s.engine = Engine::quadrature;
    s.grid.policy.max_points = 64;
    const RunReport r = cmd_simulate(s);
    CHECK(r.exit_code() == 3);
    const json report = json::parse(slurp(dir / "coarse_report.json"));
    CHECK(report["status"] == "error");
    CHECK(report["error"]["class"] == "ResolutionError");
    CHECK(report["error"]["exit_code"] == 3);
  }
  fs::remove_all(dir);
}

TEST_CASE("scan command") {
  const fs::path dir = scratch("scan");
  const Scenario s = desk("stueckelberg", dir, "scan");
  const RunReport r = cmd_scan(s, ScanParameter::gate_spacing, {4.0, 8.0});
  CHECK(r.exit_code() == 0);
  CHECK(fs::exists(dir / "scan_scan.csv"));
  CHECK(fs::exists(dir / "scan_scan.svg"));
  const std::string csv = slurp(dir / "scan_scan.csv");
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header.rfind("parameter[-],gate_spacing[", 0) == 0);
  CHECK(header.find("flight_distance[") == header.rfind("flight_distance["));
  CHECK(csv.find("\ngate_spacing,4,10,") != std::string::npos);
  CHECK(cmd_scan(s, ScanParameter::flight_distance, {10.0, 20.0}).exit_code() == 0);
  const std::string by_L = slurp(dir / "scan_scan.csv");
  CHECK(by_L.find("\nflight_distance,4,20,") != std::string::npos);
  CHECK(cmd_scan(s, ScanParameter::gate_spacing, {4.0}).exit_code() == 2);
  fs::remove_all(dir);
}

TEST_CASE("csv output is bit-identical across worker counts") {
  const fs::path dir = scratch("determinism");
  for (const char* engine : {"closed_form", "quadrature"}) {
    std::vector<std::string> traces, fields;
    for (unsigned w : {1u, 2u, 3u}) {
      Scenario s = desk("stueckelberg", dir, std::string(engine) + std::to_string(w));
      s.engine = engine_from_string(engine);
      s.workers = w;
      REQUIRE(cmd_simulate(s).exit_code() == 0);
      traces.push_back(slurp(dir / (s.output.prefix + "_trace.csv")));
      fields.push_back(slurp(dir / (s.output.prefix + "_field.csv")));
    }
    CHECK(traces[0] == traces[1]);
    CHECK(traces[0] == traces[2]);
    CHECK(fields[0] == fields[1]);
    CHECK(fields[0] == fields[2]);
  }
  fs::remove_all(dir);
}
