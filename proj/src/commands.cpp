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

#include "timeslit/commands.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "timeslit/output.hpp"

namespace timeslit {

namespace {

using Clock = std::chrono::steady_clock;

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"n", a.n}}; }

json grid_json(const Grid2D& g) { return {{"x", axis_json(g.x)}, {"t", axis_json(g.t)}}; }

json fringe_json(const FringeReport& f) {
  return {{"peak_times", f.peak_times},
          {"peak_intensities", f.peak_intensities},
          {"peak_count", f.peak_times.size()},
          {"spacing_T", f.spacing_T},
          {"spacing_T_predicted", optional_number(f.spacing_T_predicted)},
          {"relative_error", optional_number(f.relative_error)},
          {"visibility", f.visibility},
          {"modulation_depth", f.modulation_depth},
          {"window", {f.window_min, f.window_max}}};
}

json estimate_json(const EstimateReport& r) {
  return {{"formula", std::string(to_string(r.formula))},
          {"epsilon_T_product_s2", r.epsilon_T_product},
          {"equal_spacing_T_s", r.equal_spacing_T}};
}

json setup_json(const PhysicalSetup& s) {
  return {{"wavelength_nm", s.wavelength_nm},
          {"photon_count", s.photon_count},
          {"flight_distance_m", s.flight_distance_m},
          {"gate_spacing_s", s.gate_spacing_s},
          {"gate_width_s", s.gate_width_s},
          {"momentum_model", std::string(to_string(s.momentum_model))}};
}

std::filesystem::path out_path(const Scenario& s, const std::string& kind) {
  return std::filesystem::path(s.output.dir) / (s.output.prefix + "_" + kind);
}

// Runs `body`, records any library error in the report, stamps the wall time
// and writes the report JSON next to the data files.
RunReport run_command(const std::string& name, const std::optional<Scenario>& scenario,
                      const std::filesystem::path& report_path,
                      const std::function<void(RunReport&)>& body) {
  RunReport r;
  r.command = name;
  r.scenario = scenario;
  if (scenario) r.scenario_hash = scenario_hash(*scenario);
  const auto start = Clock::now();
  try {
    body(r);
  } catch (const Error& e) {
    r.status = "error";
    r.error = e.error_class();
    r.error_name = e.class_name();
    r.error_message = e.what();
  }
  r.wall_time_s = std::chrono::duration<double>(Clock::now() - start).count();
  try {
    r.outputs.push_back(report_path.string());
    write_text(report_path, to_json(r).dump(2) + "\n");
  } catch (const Error& e) {
    r.outputs.pop_back();
    if (!r.error) {
      r.status = "error";
      r.error = e.error_class();
      r.error_name = e.class_name();
      r.error_message = e.what();
    }
  }
  return r;
}

void emit(RunReport& r, const std::filesystem::path& path, const std::string& text) {
  write_text(path, text);
  r.outputs.push_back(path.string());
}

std::vector<double> log_space(double lo, double hi, std::size_t n) {
  std::vector<double> v(n);
  for (std::size_t i = 0; i < n; ++i) {
    v[i] = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(n - 1));
  }
  return v;
}

}  // namespace

int RunReport::exit_code() const { return error ? timeslit::exit_code(*error) : 0; }

json to_json(const RunReport& r) {
  json j;
  j["command"] = r.command;
  j["status"] = r.status;
  j["error"] = r.error ? json{{"class", r.error_name},
                              {"exit_code", exit_code(*r.error)},
                              {"message", r.error_message}}
                       : json(nullptr);
  j["scenario"] = r.scenario ? to_json(*r.scenario) : json(nullptr);
  j["scenario_hash"] = r.scenario_hash;
  j["wall_time_s"] = r.wall_time_s;
  j["norm_drift"] = optional_number(r.norm_drift);
  if (r.resolution) {
    const auto& d = *r.resolution;
    j["resolution"] = {{"source_grid", grid_json(d.source)},
                       {"max_source_dx", number_or_null(d.max_source_dx)},
                       {"max_source_dt", number_or_null(d.max_source_dt)},
                       {"required_source_nx", d.required_source_nx},
                       {"required_source_nt", d.required_source_nt}};
  } else {
    j["resolution"] = nullptr;
  }
  j["fringes"] = r.fringes ? fringe_json(*r.fringes) : json(nullptr);
  j["no_fringes"] = r.no_fringes;
  j["visibility"] = optional_number(r.visibility);
  if (r.estimate) {
    const auto& c = *r.estimate;
    j["estimate"] = {{"photon_energy_ev", c.photon_energy_ev},
                     {"kinetic_ev", c.kinetic_ev},
                     {"cp_ev", c.cp_ev},
                     {"diffraction", estimate_json(c.diffraction)},
                     {"crude", estimate_json(c.crude)},
                     {"ratio_crude_over_diffraction", c.ratio},
                     {"inputs", setup_json(c.diffraction.inputs_echo)}};
  } else {
    j["estimate"] = nullptr;
  }
  j["details"] = r.details;
  j["warnings"] = r.warnings;
  j["outputs"] = r.outputs;
  return j;
}

std::string estimate_table(const EstimateComparison& c, double compare_cp_ev,
                           const EstimateReport& quoted) {
  std::ostringstream o;
  char line[256];
  o << "photon energy        " << format_number(c.photon_energy_ev) << " eV\n";
  o << "kinetic energy       " << format_number(c.kinetic_ev) << " eV\n";
  o << "cp (" << to_string(c.diffraction.inputs_echo.momentum_model) << ")   "
    << format_number(c.cp_ev) << " eV\n\n";
  std::snprintf(line, sizeof line, "%-28s %14s %14s %14s\n", "estimate", "cp [eV]",
                "eps*T [s^2]", "T [s]");
  o << line;
  auto row = [&](const char* name, double cp, const EstimateReport& r) {
    std::snprintf(line, sizeof line, "%-28s %14.6g %14.6g %14.6g\n", name, cp, r.epsilon_T_product,
                  r.equal_spacing_T);
    o << line;
  };
  row("stueckelberg (derived cp)", c.cp_ev, c.diffraction);
  std::snprintf(line, sizeof line, "%-28s %14s %14.6g %14.6g\n", "crude nonrelativistic", "-",
                c.crude.epsilon_T_product, c.crude.equal_spacing_T);
  o << line;
  row("stueckelberg (compare cp)", compare_cp_ev, quoted);
  o << "\nratio crude / stueckelberg  " << format_number(c.ratio) << "\n";
  return o.str();
}

RunReport cmd_estimate(const Scenario& scenario) {
  return run_command("estimate", scenario, out_path(scenario, "report.json"), [&](RunReport& r) {
    scenario.validate();
    const EstimateComparison c = compare_estimates(scenario.setup);
    const EstimateReport quoted =
        stueckelberg_report(scenario.setup, scenario.analysis.compare_cp_ev);
    r.estimate = c;
    r.details["compare_cp"] = {{"cp_ev", scenario.analysis.compare_cp_ev},
                               {"report", estimate_json(quoted)}};
    r.details["table"] = estimate_table(c, scenario.analysis.compare_cp_ev, quoted);

    const std::vector<EstimateRow> rows = {
        {"stueckelberg_derived_cp", c.cp_ev, c.diffraction},
        {"crude_nonrelativistic", std::numeric_limits<double>::quiet_NaN(), c.crude},
        {"stueckelberg_compare_cp", scenario.analysis.compare_cp_ev, quoted},
    };
    emit(r, out_path(scenario, "estimate.csv"), estimate_csv(rows));

    const double L = scenario.setup.flight_distance_m;
    SvgPlot plot;
    plot.title = "epsilon T versus flight distance";
    plot.x_label = "L [m]";
    plot.y_label = "epsilon T [s^2]";
    plot.log_y = true;
    plot.hash = r.scenario_hash;
    SvgSeries diffraction{{}, {}, "stueckelberg (derived cp)", "#1f4e9c"};
    SvgSeries crude{{}, {}, "crude nonrelativistic", "#b5401a"};
    for (double l : log_space(0.25 * L, 4.0 * L, 41)) {
      diffraction.x.push_back(l);
      diffraction.y.push_back(stueckelberg_product(l, c.cp_ev));
      crude.x.push_back(l);
      crude.y.push_back(crude_nonrelativistic_product(l, c.kinetic_ev));
    }
    plot.series = {diffraction, crude};
    emit(r, out_path(scenario, "estimate.svg"), render_svg(plot));
  });
}

RunReport cmd_simulate(const Scenario& scenario) {
  return run_command("simulate", scenario, out_path(scenario, "report.json"), [&](RunReport& r) {
    scenario.validate();
    const TwoGateConfig cfg = scenario.two_gate_config();
    const TwoGateRun run = run_two_gate(scenario.theory, cfg);
    r.norm_drift = run.norm_drift;
    r.resolution = run.resolution;
    r.warnings = run.warnings;
    r.visibility = measure_visibility(run.trace);
    try {
      r.fringes = extract_fringes(run.trace, scenario.analysis.threshold_fraction);
    } catch (const NoFringes& e) {
      // The controls are expected to show no fringes.
      if (scenario.theory == Theory::stueckelberg) throw;
      r.no_fringes = true;
      r.details["no_fringes_reason"] = e.what();
    }

    const UnitScales& u = scenario.units;
    const double tpred = cfg.predicted_spacing();
    r.details["s_star"] = run.s_star;
    r.details["detector_x"] = run.trace.detector_x;
    r.details["observation_grid"] = grid_json(run.observation);
    r.details["predicted_spacing"] = tpred;
    r.details["lab_mapping"] = {{"length_scale_m", u.length_scale},
                                {"time_scale_s", u.time_scale},
                                {"mass_scale_kg", u.mass_scale},
                                {"flight_distance_m", cfg.flight_distance * u.length_scale},
                                {"gate_spacing_s", cfg.gate_spacing * u.time_scale},
                                {"gate_width_s", cfg.gate_width * u.time_scale},
                                {"predicted_spacing_s", tpred * u.time_scale}};
    const InternalSetup lab = to_internal(scenario.setup, u);
    const EstimateComparison est = compare_estimates(scenario.setup);
    r.details["lab_setup"] = {{"flight_distance_internal", lab.flight_distance},
                              {"gate_spacing_internal", lab.gate_spacing},
                              {"gate_width_internal", lab.gate_width},
                              {"predicted_spacing_s", est.diffraction.epsilon_T_product /
                                                          scenario.setup.gate_spacing_s}};

    emit(r, out_path(scenario, "trace.csv"), trace_csv(run.trace, u.time_scale));
    if (run.field) emit(r, out_path(scenario, "field.csv"), field_csv(*run.field));
    if (r.fringes) emit(r, out_path(scenario, "peaks.csv"), peaks_csv(*r.fringes));

    SvgPlot plot;
    plot.title = "arrival-time intensity at x = L (" + std::string(to_string(scenario.theory)) + ")";
    plot.x_label = std::string("t [") + kTimeUnit + "]";
    plot.y_label = "intensity";
    plot.hash = r.scenario_hash;
    plot.series.push_back({run.trace.times, run.trace.intensity, "intensity", "#1f4e9c"});
    if (run.trace.incoherent && scenario.theory != Theory::schrodinger_control) {
      plot.series.push_back({run.trace.times, *run.trace.incoherent, "sum of single gates", "#999999"});
    }
    if (r.fringes) {
      plot.series.push_back({r.fringes->peak_times, r.fringes->peak_intensities,
                             std::to_string(r.fringes->peak_times.size()) + " peaks", "#b5401a",
                             true});
    }
    emit(r, out_path(scenario, "trace.svg"), render_svg(plot));
  });
}

RunReport cmd_scan(const Scenario& scenario, ScanParameter parameter,
                   const std::vector<double>& values) {
  return run_command("scan", scenario, out_path(scenario, "report.json"), [&](RunReport& r) {
    scenario.validate();
    if (values.size() < 2) throw ConfigError("--values: a scan needs at least 2 values");
    const TwoGateConfig cfg = scenario.two_gate_config();
    const auto rows = parameter_scan(scenario.theory, cfg, parameter, values,
                                     scenario.analysis.threshold_fraction);
    r.details["parameter"] = std::string(to_string(parameter));
    json table = json::array();
    for (const auto& row : rows) {
      table.push_back({{"value", row.value},
                       {"visibility", row.visibility},
                       {"spacing_T", row.fringes ? json(row.fringes->spacing_T) : json(nullptr)},
                       {"predicted_spacing", row.predicted_spacing},
                       {"epsilon_T", number_or_null(row.epsilon_T())},
                       {"norm_drift", row.norm_drift},
                       {"status", row.error ? row.error_name : std::string("ok")},
                       {"message", row.error_message}});
      for (const auto& w : row.warnings) r.warnings.push_back(w);
    }
    r.details["rows"] = table;
    emit(r, out_path(scenario, "scan.csv"), scan_csv(rows, parameter));

    SvgPlot plot;
    plot.title = "epsilon T across the " + std::string(to_string(parameter)) + " scan (" +
                 std::string(to_string(scenario.theory)) + ")";
    plot.x_label = std::string(to_string(parameter));
    plot.y_label = std::string("epsilon T [(") + kTimeUnit + ")^2]";
    plot.hash = r.scenario_hash;
    SvgSeries predicted{{}, {}, "2 pi hbar L / (p0 c^2)", "#999999"};
    SvgSeries measured{{}, {}, "measured", "#b5401a", true};
    for (const auto& row : rows) {
      predicted.x.push_back(row.value);
      predicted.y.push_back(row.predicted_spacing * row.gate_spacing);
      measured.x.push_back(row.value);
      measured.y.push_back(row.epsilon_T());
    }
    plot.series = {predicted, measured};
    emit(r, out_path(scenario, "scan.svg"), render_svg(plot));
  });
}

RunReport cmd_fringes(const FringesRequest& req) {
  const auto report_path = req.out_dir / (req.prefix + "_report.json");
  return run_command("fringes", std::nullopt, report_path, [&](RunReport& r) {
    IntensityTrace trace = read_trace_csv(req.trace);
    {
      std::ifstream in(req.trace, std::ios::binary);
      std::stringstream buf;
      buf << in.rdbuf();
      r.scenario_hash = fnv1a_hex(buf.str());
    }
    r.details["trace"] = req.trace.string();
    r.details["threshold_fraction"] = req.threshold_fraction;
    trace.predicted_spacing = req.predicted_spacing;
    r.visibility = measure_visibility(trace);
    r.fringes = extract_fringes(trace, req.threshold_fraction);
    emit(r, req.out_dir / (req.prefix + "_peaks.csv"), peaks_csv(*r.fringes));
    SvgPlot plot;
    plot.title = "re-analysed trace";
    plot.x_label = "t";
    plot.y_label = "intensity";
    plot.hash = r.scenario_hash;
    plot.series = {{trace.times, trace.intensity, "intensity", "#1f4e9c"},
                   {r.fringes->peak_times, r.fringes->peak_intensities,
                    std::to_string(r.fringes->peak_times.size()) + " peaks", "#b5401a", true}};
    emit(r, req.out_dir / (req.prefix + "_trace.svg"), render_svg(plot));
  });
}

}  // namespace timeslit
