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

// Space-time wave packets (spatial Gaussian times a sum of time gates times a
// plane-wave carrier), the sampling grids they live on, and their moments.

#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "timeslit/units.hpp"

namespace timeslit {

using cplx = std::complex<double>;

/// Uniform sampling of [min, max] with n points (both ends included).
struct Axis {
  double min = 0.0;
  double max = 1.0;
  std::size_t n = 2;

  double step() const { return (max - min) / static_cast<double>(n - 1); }
  double at(std::size_t i) const { return min + step() * static_cast<double>(i); }
  /// Index of the sample closest to u (clamped to the axis).
  std::size_t nearest(double u) const;
  Axis translated(double shift) const { return {min + shift, max + shift, n}; }
  /// Throws DomainError unless n >= 2 and max > min (both finite).
  void validate(const char* name) const;

  bool operator==(const Axis&) const = default;
};

/// Axis of n points centred on `center` with the given half width.
Axis centered_axis(double center, double half_width, std::size_t n);

/// Composite Simpson weights (Simpson 3/8 closes an odd interval count).
std::vector<double> simpson_weights(const Axis& axis);

struct Grid2D {
  Axis x;
  Axis t;

  void validate() const;
  std::size_t size() const { return x.n * t.n; }
  bool operator==(const Grid2D&) const = default;
};

struct GaussianSpatialPacket {
  double center_x = 0.0;
  double width_sigma_x = 1.0;  // standard deviation of |psi|^2
  double mean_momentum_p0 = 0.0;
  double global_phase = 0.0;

  void validate() const;
  /// Normalised envelope times the carrier exp(i p0 x / hbar).
  cplx evaluate(double x, const ModelConstants& k = {}) const;
  bool operator==(const GaussianSpatialPacket&) const = default;
};

enum class GateProfile { gaussian, rectangular };

struct TimeGate {
  double center_t = 0.0;
  // gaussian: standard deviation of the amplitude envelope exp(-(t-c)^2 / (2 w^2)),
  // so the intensity standard deviation is w / sqrt(2).
  // rectangular: full duration of the unit-height window.
  double width_delta_t = 1.0;
  GateProfile profile = GateProfile::gaussian;
  cplx amplitude = 1.0;

  void validate() const;
  /// Envelope without amplitude or carrier.
  double envelope(double t) const;
  bool operator==(const TimeGate&) const = default;
};

/// Integral of envelope_a(t) * envelope_b(t) over t.
double gate_overlap(const TimeGate& a, const TimeGate& b);

struct SpacetimePacket {
  GaussianSpatialPacket spatial;
  std::vector<TimeGate> gates;
  double mean_energy_E0 = 1.0;

  void validate() const;
  bool all_gaussian() const;
  /// Exact space-time norm squared from the gate overlap integrals.
  double closed_form_norm2() const;
  /// Copy with gate amplitudes rescaled to unit space-time norm.
  SpacetimePacket normalized() const;
  /// Copy holding only gate k.
  SpacetimePacket single_gate(std::size_t k) const;
  bool operator==(const SpacetimePacket&) const = default;
};

/// psi(x, t) = g(x) * sum_k a_k h_k(t) * exp(i (p0 x - E0 t) / hbar).
cplx evaluate_packet(const SpacetimePacket& packet, double x, double t,
                     const ModelConstants& k = {});

/// Complex samples on a Grid2D, stored row-major with t as the slow index.
struct Field2D {
  Grid2D grid;
  std::vector<cplx> values;

  Field2D() = default;
  explicit Field2D(const Grid2D& g) : grid(g), values(g.size()) {}
  cplx& at(std::size_t ix, std::size_t it) { return values[it * grid.x.n + ix]; }
  const cplx& at(std::size_t ix, std::size_t it) const { return values[it * grid.x.n + ix]; }
};

struct Field1D {
  Axis x;
  std::vector<cplx> values;
};

Field2D sample_packet(const SpacetimePacket& packet, const Grid2D& grid,
                      const ModelConstants& k = {}, unsigned workers = 1);
Field1D sample_spatial(const GaussianSpatialPacket& packet, const Axis& axis,
                       const ModelConstants& k = {});

/// Simpson approximation of the integral of |psi|^2.
double norm2(const Field2D& field);
double norm2(const Field1D& field);

/// Samples the packet and integrates |psi|^2. Throws ResolutionError when a
/// packet width spans fewer than 4 grid steps.
double norm2(const SpacetimePacket& packet, const Grid2D& grid, const ModelConstants& k = {});

/// Throws ResolutionError if the packet is not resolved by the grid.
void check_packet_resolution(const SpacetimePacket& packet, const Grid2D& grid);

struct Moments {
  double mean_x = 0.0;
  double mean_t = 0.0;
  double mean_p = 0.0;
  double mean_E = 0.0;
  double sigma_x = 0.0;
  double sigma_t = 0.0;
};

/// First and second moments of |psi|^2. Mean momentum and energy use the
/// lag-one spectral centroid hbar * arg(sum psi*_j psi_{j+1}) / step (with a
/// minus sign on the time axis), which is exact for a real envelope times a
/// plane-wave carrier sampled below Nyquist.
Moments expectations(const Field2D& field, const ModelConstants& k = {});
Moments expectations(const SpacetimePacket& packet, const Grid2D& grid,
                     const ModelConstants& k = {});

}  // namespace timeslit
