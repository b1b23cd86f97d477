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

// Two-gate emission experiment under each evolution law, and fringe analysis
// of the arrival-time intensity at the detector plane x = L.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "timeslit/errors.hpp"
#include "timeslit/packets.hpp"
#include "timeslit/propagation.hpp"
#include "timeslit/units.hpp"

namespace timeslit {

/// Arrival-time intensity at a fixed detector position.
struct IntensityTrace {
  std::vector<double> times;
  std::vector<double> intensity;
  /// Sum of the single-gate intensities, when known. Visibility is measured
  /// against it; it coincides with `intensity` for the mixed-state control.
  std::optional<std::vector<double>> incoherent;
  double detector_x = 0.0;
  Theory theory = Theory::stueckelberg;
  /// Fringe period predicted by 2 pi hbar L / (p0 c^2 epsilon).
  std::optional<double> predicted_spacing;

  /// Throws DomainError on empty, mismatched, non-monotone or negative data.
  void validate() const;
};

struct FringeReport {
  std::vector<double> peak_times;
  std::vector<double> peak_intensities;
  double spacing_T = 0.0;
  std::optional<double> spacing_T_predicted;
  double visibility = 0.0;
  double modulation_depth = 0.0;  // (Imax - Imin) / (Imax + Imin) in the window
  std::optional<double> relative_error;
  double window_min = 0.0;
  double window_max = 0.0;
};

/// Packet template and geometry in internal units.
struct TwoGateConfig {
  ModelConstants constants;
  double p0 = 0.2;
  double sigma_x = 2.0;
  double x0 = 0.0;
  double flight_distance = 10.0;
  double gate_width = 0.2;
  double gate_spacing = 4.0;
  GateProfile profile = GateProfile::gaussian;
  std::optional<double> energy;      // defaults to M c^2 + p0^2 / 2M
  std::optional<double> s_override;  // defaults to M L / p0
  Engine engine = Engine::closed_form;
  unsigned workers = 1;
  ResolutionPolicy policy;
  std::optional<Grid2D> observation;
  std::optional<Grid2D> source;

  void validate() const;
  double mean_energy() const;
  double flight_s() const;
  /// Gates centred at -epsilon/2 and +epsilon/2, normalised to unit norm.
  SpacetimePacket packet() const;
  /// 2 pi hbar s / (M c^2 epsilon).
  double predicted_spacing() const;
};

struct TwoGateRun {
  IntensityTrace trace;
  double norm_drift = 0.0;
  double s_star = 0.0;
  std::vector<std::string> warnings;
  Grid2D observation;
  ResolutionDiagnostics resolution;
  std::optional<Field2D> field;  // two-gate field at s*; absent for the control
};

/// True when the gates overlap enough to interfere under Floquet evolution:
/// spacing below 6 widths (Gaussian) or below the duration (rectangular).
bool gates_overlap(const TwoGateConfig& config);

/// Propagates the two-gate packet to s* and reads the intensity along t at
/// x = L. The control adds the two single-gate intensities.
TwoGateRun run_two_gate(Theory theory, const TwoGateConfig& config);

/// Central window |t - <t>| <= 1.5 sigma_t of the envelope (the incoherent
/// reference when present, the intensity otherwise).
std::pair<double, double> central_window(const IntensityTrace& trace);

/// Fringe visibility in the central window. With an incoherent reference this
/// is max|I - I_inc| / max I_inc, which equals the two-beam contrast
/// 2 sqrt(I1 I2) / (I1 + I2) and vanishes for a mixture; without one it is
/// (Imax - Imin) / (Imax + Imin).
double measure_visibility(const IntensityTrace& trace);

/// Local maxima above threshold_fraction * max inside the central window.
/// With a reference, only maxima of constructive interference (I > I_inc)
/// count as fringes. Throws NoFringes below two peaks.
FringeReport extract_fringes(const IntensityTrace& trace, double threshold_fraction = 0.2);

enum class ScanParameter { gate_spacing, flight_distance };

std::string_view to_string(ScanParameter p);
ScanParameter scan_parameter_from_string(std::string_view s);

struct ScanRow {
  double value = 0.0;
  double gate_spacing = 0.0;
  double flight_distance = 0.0;
  std::optional<FringeReport> fringes;
  double visibility = 0.0;
  double norm_drift = 0.0;
  double predicted_spacing = 0.0;
  std::vector<std::string> warnings;
  std::optional<ErrorClass> error;
  std::string error_name;  // e.g. NoFringes
  std::string error_message;

  /// epsilon * T measured, or NaN without fringes.
  double epsilon_T() const;
};

/// One run per value, in parallel; rows keep the order of `values`. Errors
/// are recorded per row and the scan continues.
std::vector<ScanRow> parameter_scan(Theory theory, const TwoGateConfig& base,
                                    ScanParameter parameter, const std::vector<double>& values,
                                    double threshold_fraction = 0.2);

/// Scan over the gate spacing; needs at least two values.
std::vector<ScanRow> visibility_scan(Theory theory, const TwoGateConfig& base,
                                     const std::vector<double>& epsilon_values,
                                     double threshold_fraction = 0.2);

}  // namespace timeslit
