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

// Subcommands behind the command-line tool. Each returns a RunReport and
// writes it, together with its data files, into the output directory; failed
// runs are reported too.

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "timeslit/errors.hpp"
#include "timeslit/estimates.hpp"
#include "timeslit/experiments.hpp"
#include "timeslit/scenario.hpp"

namespace timeslit {

struct RunReport {
  std::string command;
  std::string status = "ok";  // ok | error
  std::optional<ErrorClass> error;
  std::string error_name;
  std::string error_message;
  std::optional<Scenario> scenario;
  std::string scenario_hash;
  double wall_time_s = 0.0;
  std::optional<double> norm_drift;
  std::optional<ResolutionDiagnostics> resolution;
  std::optional<FringeReport> fringes;
  bool no_fringes = false;  // NoFringes recorded as the expected outcome
  std::optional<double> visibility;
  std::optional<EstimateComparison> estimate;
  json details = json::object();
  std::vector<std::string> warnings;
  std::vector<std::string> outputs;

  /// 0 on success, otherwise the code of the recorded error class.
  int exit_code() const;
};

json to_json(const RunReport& r);

RunReport cmd_estimate(const Scenario& scenario);
RunReport cmd_simulate(const Scenario& scenario);
RunReport cmd_scan(const Scenario& scenario, ScanParameter parameter,
                   const std::vector<double>& values);

struct FringesRequest {
  std::filesystem::path trace;
  double threshold_fraction = 0.2;
  std::optional<double> predicted_spacing;
  std::filesystem::path out_dir = "out";
  std::string prefix = "fringes";
};

RunReport cmd_fringes(const FringesRequest& request);

/// Human-readable table of a comparison, as printed by `estimate`.
std::string estimate_table(const EstimateComparison& c, double compare_cp_ev,
                           const EstimateReport& quoted);

}  // namespace timeslit
