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

// Command-line entry point: estimate, simulate, scan, fringes.

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "timeslit/commands.hpp"
#include "timeslit/output.hpp"

namespace ts = timeslit;

namespace {

struct Overrides {
  std::string scenario;
  std::string out;
  std::string engine;
  std::string theory;
  unsigned workers = 0;
};

void add_common(CLI::App* cmd, Overrides& o, bool physics) {
  cmd->add_option("--scenario", o.scenario, "scenario JSON file")->required();
  cmd->add_option("--out", o.out, "output directory (overrides output.dir)");
  if (physics) {
    cmd->add_option("--engine", o.engine, "closed_form | quadrature");
    cmd->add_option("--theory", o.theory, "schrodinger_control | floquet | stueckelberg");
    cmd->add_option("--workers", o.workers, "worker threads (overrides workers)");
  }
}

// Failures before a scenario exists still leave a report behind.
int early_failure(const std::string& command, const std::string& out_dir, const ts::Error& e) {
  ts::RunReport r;
  r.command = command;
  r.status = "error";
  r.error = e.error_class();
  r.error_name = e.class_name();
  r.error_message = e.what();
  const auto path = std::filesystem::path(out_dir.empty() ? "out" : out_dir) / (command + "_report.json");
  try {
    ts::write_text(path, ts::to_json(r).dump(2) + "\n");
  } catch (const ts::Error&) {
  }
  std::cerr << "error: " << e.class_name() << ": " << e.what() << "\n";
  return r.exit_code();
}

ts::Scenario load(const Overrides& o) {
  ts::Scenario s = ts::parse_scenario(o.scenario);
  try {
    if (!o.engine.empty()) s.engine = ts::engine_from_string(o.engine);
    if (!o.theory.empty()) s.theory = ts::theory_from_string(o.theory);
  } catch (const ts::Error& e) {
    throw ts::ConfigError(std::string("command line: ") + e.what());
  }
  if (!o.out.empty()) s.output.dir = o.out;
  if (o.workers > 0) s.workers = o.workers;
  s.validate();
  return s;
}

int finish(const ts::RunReport& r) {
  for (const auto& w : r.warnings) std::cerr << "warning: " << w << "\n";
  if (r.error) {
    std::cerr << "error: " << r.error_name << ": " << r.error_message << "\n";
  }
  for (const auto& path : r.outputs) std::cout << "wrote " << path << "\n";
  return r.exit_code();
}

void print_simulation(const ts::RunReport& r) {
  if (r.norm_drift) std::cout << "norm drift         " << ts::format_number(*r.norm_drift) << "\n";
  if (r.visibility) std::cout << "visibility         " << ts::format_number(*r.visibility) << "\n";
  if (r.fringes) {
    std::cout << "fringe peaks       " << r.fringes->peak_times.size() << "\n";
    std::cout << "spacing T          " << ts::format_number(r.fringes->spacing_T) << "\n";
    if (r.fringes->spacing_T_predicted) {
      std::cout << "predicted T        " << ts::format_number(*r.fringes->spacing_T_predicted)
                << "\n";
    }
    if (r.fringes->relative_error) {
      std::cout << "relative error     " << ts::format_number(*r.fringes->relative_error) << "\n";
    }
  }
  if (r.no_fringes) std::cout << "no fringes (expected for this theory)\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Interference in time: two-gate emission under three evolution laws"};
  app.require_subcommand(1);

  Overrides est_o, sim_o, scan_o;
  auto* est = app.add_subcommand("estimate", "closed-form epsilon*T estimates for the lab setup");
  add_common(est, est_o, false);

  auto* sim = app.add_subcommand("simulate", "run the two-gate experiment and analyse fringes");
  add_common(sim, sim_o, true);

  auto* scan = app.add_subcommand("scan", "repeat the experiment over a parameter");
  add_common(scan, scan_o, true);
  std::string param;
  std::vector<double> values;
  scan->add_option("--param", param, "gate_spacing | flight_distance")->required();
  scan->add_option("--values", values, "comma-separated values")->required()->delimiter(',');

  auto* fr = app.add_subcommand("fringes", "re-analyse an existing trace CSV");
  ts::FringesRequest req;
  std::string trace, fr_out, fr_scenario;
  std::optional<double> threshold, predicted;
  fr->add_option("--trace", trace, "trace CSV with t and intensity columns")->required();
  fr->add_option("--scenario", fr_scenario, "scenario supplying analysis.threshold_fraction");
  fr->add_option("--threshold", threshold, "peak threshold as a fraction of the maximum");
  fr->add_option("--predicted", predicted, "predicted spacing for the relative error");
  fr->add_option("--out", fr_out, "output directory");
  fr->add_option("--prefix", req.prefix, "output file prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return ts::exit_code(ts::ErrorClass::config);
  }

  if (*est) {
    ts::Scenario s;
    try {
      s = load(est_o);
    } catch (const ts::Error& e) {
      return early_failure("estimate", est_o.out, e);
    }
    const auto r = ts::cmd_estimate(s);
    if (r.details.contains("table")) std::cout << r.details["table"].get<std::string>() << "\n";
    return finish(r);
  }
  if (*sim) {
    ts::Scenario s;
    try {
      s = load(sim_o);
    } catch (const ts::Error& e) {
      return early_failure("simulate", sim_o.out, e);
    }
    const auto r = ts::cmd_simulate(s);
    print_simulation(r);
    return finish(r);
  }
  if (*scan) {
    ts::Scenario s;
    ts::ScanParameter p{};
    try {
      s = load(scan_o);
      p = ts::scan_parameter_from_string(param);
    } catch (const ts::Error& e) {
      return early_failure("scan", scan_o.out, e);
    }
    const auto r = ts::cmd_scan(s, p, values);
    if (r.details.contains("rows")) {
      for (const auto& row : r.details["rows"]) {
        std::printf("%-14s %12s  visibility %-12.6g epsilon_T %-12s %s\n",
                    ts::format_number(row["value"].get<double>()).c_str(), param.c_str(),
                    row["visibility"].get<double>(),
                    row["epsilon_T"].is_null()
                        ? "-"
                        : ts::format_number(row["epsilon_T"].get<double>()).c_str(),
                    row["status"].get<std::string>().c_str());
      }
    }
    return finish(r);
  }
  // fringes
  req.trace = trace;
  req.out_dir = fr_out.empty() ? "out" : fr_out;
  req.predicted_spacing = predicted;
  try {
    if (!fr_scenario.empty()) {
      const ts::Scenario s = ts::parse_scenario(fr_scenario);
      req.threshold_fraction = s.analysis.threshold_fraction;
      if (fr_out.empty()) req.out_dir = s.output.dir;
    }
    if (threshold) req.threshold_fraction = *threshold;
    if (!(req.threshold_fraction > 0.0 && req.threshold_fraction < 1.0)) {
      throw ts::ConfigError("--threshold: must lie in (0, 1)");
    }
  } catch (const ts::Error& e) {
    return early_failure("fringes", fr_out, e);
  }
  const auto r = ts::cmd_fringes(req);
  print_simulation(r);
  return finish(r);
}
