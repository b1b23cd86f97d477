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

// Scenario files: strict JSON schema, defaults, validation and round-trip.
//
// {
//   "theory": "stueckelberg",            required
//   "engine": "closed_form",
//   "workers": 1,
//   "setup": { "wavelength_nm", "photon_count", "flight_distance_m",   required
//              "gate_spacing_s", "gate_width_s", "momentum_model" },
//   "units": { "length_scale", "time_scale", "mass_scale" },
//   "packet": { "hbar", "mass", "c", "p0", "sigma_x", "x0", "flight_distance",
//               "gate_width", "gate_spacing", "profile", "energy", "s_override" },
//   "grid": { "policy": { "samples_per_period", "samples_per_width",
//                         "samples_per_sigma", "samples_per_fringe",
//                         "range_sigmas", "max_points" },
//             "observation": { "x_min", "x_max", "n_x", "t_min", "t_max", "n_t" },
//             "source": { same keys as observation } },
//   "analysis": { "threshold_fraction", "compare_cp_ev" },
//   "output": { "dir", "prefix" }
// }

#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "timeslit/experiments.hpp"
#include "timeslit/propagation.hpp"
#include "timeslit/units.hpp"

namespace timeslit {

using json = nlohmann::json;

struct PacketSpec {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;
  double p0 = 0.2;
  double sigma_x = 2.0;
  double x0 = 0.0;
  double flight_distance = 10.0;
  double gate_width = 0.2;
  double gate_spacing = 4.0;
  GateProfile profile = GateProfile::gaussian;
  std::optional<double> energy;
  std::optional<double> s_override;

  bool operator==(const PacketSpec&) const = default;
};

struct GridSpec {
  ResolutionPolicy policy;
  std::optional<Grid2D> observation;
  std::optional<Grid2D> source;

  bool operator==(const GridSpec&) const = default;
};

struct AnalysisSpec {
  double threshold_fraction = 0.2;
  double compare_cp_ev = 1210.0;  // quoted cp, printed next to the derived one

  bool operator==(const AnalysisSpec&) const = default;
};

struct OutputSpec {
  std::string dir = "out";
  std::string prefix = "run";

  bool operator==(const OutputSpec&) const = default;
};

struct Scenario {
  Theory theory = Theory::stueckelberg;
  Engine engine = Engine::closed_form;
  unsigned workers = 1;
  PhysicalSetup setup;
  UnitScales units = electron_natural_scales();
  PacketSpec packet;
  GridSpec grid;
  AnalysisSpec analysis;
  OutputSpec output;

  /// Throws ConfigError naming the first invalid field.
  void validate() const;
  TwoGateConfig two_gate_config() const;
  bool operator==(const Scenario&) const = default;
};

/// Parses and validates; unknown keys are rejected with the nearest known key.
Scenario scenario_from_json(const json& j);
/// Reads a file; IoError if it cannot be read, ConfigError if malformed.
Scenario parse_scenario(const std::filesystem::path& path);
json to_json(const Scenario& s);
/// Canonical serialization (sorted keys, compact) used for hashing.
std::string canonical_text(const Scenario& s);
/// FNV-1a 64-bit hash as 16 hex digits.
std::string fnv1a_hex(std::string_view bytes);
/// fnv1a_hex of the canonical text.
std::string scenario_hash(const Scenario& s);

/// Levenshtein distance, used for key suggestions.
std::size_t edit_distance(std::string_view a, std::string_view b);

}  // namespace timeslit
