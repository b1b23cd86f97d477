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

// Propagation of packets by the three evolution laws, with two engines:
//
//  * closed_form: complex Gaussian algebra (Gaussian gates only); the oracle.
//  * quadrature:  composite Simpson evaluation of the propagator integral on a
//                 source grid. The Stueckelberg kernel factorises into a space
//                 and a time Fresnel factor, so the double sum is evaluated as
//                 two nested one-dimensional passes (the same sum, reordered).
//
// Quadrature source grids must carry at least `samples_per_period` samples per
// period of the fastest kernel phase over the integration domain, i.e.
//   step <= 2 pi hbar tau / (samples_per_period * |m| * max|u - u'|),
// otherwise ResolutionError reports the required point count.

#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "timeslit/gaussian.hpp"
#include "timeslit/packets.hpp"
#include "timeslit/units.hpp"

namespace timeslit {

enum class Engine { closed_form, quadrature };
enum class Theory { schrodinger_control, floquet, stueckelberg };

std::string_view to_string(Engine e);
std::string_view to_string(Theory t);
Engine engine_from_string(std::string_view s);
Theory theory_from_string(std::string_view s);

struct ResolutionPolicy {
  double samples_per_period = 8.0;   // kernel and carrier phase, source grid
  double samples_per_width = 8.0;    // packet envelope, source grid
  double samples_per_sigma = 4.0;    // output envelope, observation grid
  double samples_per_fringe = 12.0;  // cross-term period, observation grid
  double range_sigmas = 8.0;         // observation half extent in output sigmas
  std::size_t max_points = 8192;     // per axis

  bool operator==(const ResolutionPolicy&) const = default;
};

struct PropagationOptions {
  Engine engine = Engine::closed_form;
  unsigned workers = 1;
  ResolutionPolicy policy;
  std::optional<Grid2D> observation;  // auto-sized when empty
  std::optional<Grid2D> source;       // auto-sized when empty
};

struct ResolutionDiagnostics {
  Grid2D source;
  double max_source_dx = 0.0;  // largest step that satisfies the rule
  double max_source_dt = 0.0;
  std::size_t required_source_nx = 0;
  std::size_t required_source_nt = 0;
};

struct PropagationResult {
  Field2D field;
  double norm_before = 0.0;
  double norm_after = 0.0;
  double norm_drift = 0.0;  // |after - before| / before
  Engine engine = Engine::closed_form;
  ResolutionDiagnostics resolution;
};

struct SpatialPropagationResult {
  Field1D field;
  double norm_before = 0.0;
  double norm_after = 0.0;
  double norm_drift = 0.0;
  Engine engine = Engine::closed_form;
  Axis source;
};

struct SpatialOptions {
  Engine engine = Engine::closed_form;
  ResolutionPolicy policy;
  std::optional<Axis> observation;
  std::optional<Axis> source;
};

/// Largest source step allowed by the kernel-phase rule for observation
/// points on `obs` and source points on `src`.
double max_kernel_step(const Axis& src, const Axis& obs, double tau, double axis_mass,
                       double hbar, double samples_per_period);

/// Throws ResolutionError when `src` is coarser than `max_step`.
void require_step(const Axis& src, double max_step, const char* axis_name);

/// psi_t(x) = int dx' G(x - x', t) psi_0(x'). t == 0 returns the input.
SpatialPropagationResult propagate_schrodinger(const GaussianSpatialPacket& packet,
                                               double t_elapsed, const ModelConstants& k = {},
                                               const SpatialOptions& options = {});

/// psi_s(x, t) = int dx' G(x - x', s) psi_0(x', t - s).
PropagationResult propagate_floquet(const SpacetimePacket& packet, double delta_s,
                                    const ModelConstants& k = {},
                                    const PropagationOptions& options = {});

/// psi_s(x, t) = int dx' dt' K(x - x', t - t'; s) psi_0(x', t').
PropagationResult propagate_stueckelberg(const SpacetimePacket& packet, double s_elapsed,
                                         const ModelConstants& k = {},
                                         const PropagationOptions& options = {});

// Quadrature steps on already-sampled fields (used for chaining steps).
Field1D schrodinger_step(const Field1D& source, double t, const Axis& observation,
                         const ModelConstants& k = {});
/// Output time axis is the source time axis translated by s.
Field2D floquet_step(const Field2D& source, double s, const Axis& observation_x,
                     const ModelConstants& k = {}, unsigned workers = 1);
Field2D stueckelberg_step(const Field2D& source, double s, const Grid2D& observation,
                          const ModelConstants& k = {}, unsigned workers = 1);

/// Auto-sized grids used when PropagationOptions leaves them empty.
Grid2D observation_grid_for(const GaussianState& evolved, const ResolutionPolicy& policy);
Grid2D source_grid_for(const SpacetimePacket& packet, double tau, Theory theory,
                       const Grid2D& observation, const ModelConstants& k,
                       const ResolutionPolicy& policy);

/// Flight parameter M L / p0 at which <x> advances by L.
double flight_parameter(double distance, double p0, const ModelConstants& k = {});

struct HamiltonDiagnostics {
  double slope_x = 0.0;
  double slope_t = 0.0;
  double predicted_slope_x = 0.0;  // p0 / M
  double predicted_slope_t = 0.0;  // E0 / (M c^2) for Stueckelberg, 1 otherwise
  std::vector<double> s_samples;
  std::vector<double> mean_x;
  std::vector<double> mean_t;
};

/// Least-squares slopes of <x>(s) and <t>(s) measured on propagated fields.
HamiltonDiagnostics hamilton_diagnostics(const SpacetimePacket& packet, Theory theory,
                                         const std::vector<double>& s_samples,
                                         const ModelConstants& k = {},
                                         const PropagationOptions& options = {});

}  // namespace timeslit
