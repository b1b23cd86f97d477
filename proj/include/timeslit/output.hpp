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

// CSV tables, trace re-reading and SVG figures. Numbers are written with the
// shortest round-trip representation, so equal doubles give equal bytes.

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "timeslit/estimates.hpp"
#include "timeslit/experiments.hpp"
#include "timeslit/packets.hpp"

namespace timeslit {

inline constexpr const char* kLengthUnit = "hbar/Mc";
inline constexpr const char* kTimeUnit = "hbar/Mc^2";
// |psi|^2 is a density per unit length and unit time.
inline constexpr const char* kDensityUnit = "(hbar/Mc)^-1 (hbar/Mc^2)^-1";
inline constexpr const char* kAmplitudeUnit = "(hbar/Mc)^-1/2 (hbar/Mc^2)^-1/2";

std::string format_number(double v);

std::string field_csv(const Field2D& field);
/// Columns t, t_lab (when time_scale > 0), intensity, intensity_incoherent.
std::string trace_csv(const IntensityTrace& trace, double time_scale = 0.0);
std::string peaks_csv(const FringeReport& report);
std::string scan_csv(const std::vector<ScanRow>& rows, ScanParameter parameter);

struct EstimateRow {
  std::string label;
  double cp_ev = 0.0;  // 0 when not applicable
  EstimateReport report;
};
std::string estimate_csv(const std::vector<EstimateRow>& rows);

/// Reads a trace written by trace_csv, or any CSV whose header has a `t`
/// column and an `intensity` column (units in brackets are ignored).
IntensityTrace read_trace_csv(const std::filesystem::path& path);

/// Writes text, creating parent directories; IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& text);

struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string label;
  std::string color = "#1f4e9c";
  bool points = false;  // markers instead of a polyline
};

struct SvgPlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<SvgSeries> series;
  bool log_y = false;
  std::string hash;  // embedded as metadata and printed in the footer
};

std::string render_svg(const SvgPlot& plot);

}  // namespace timeslit
