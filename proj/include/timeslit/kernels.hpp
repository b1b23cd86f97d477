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

// Point evaluation of the free Schroedinger, Floquet and Stueckelberg
// propagators.
//
// All three are products of one-dimensional Fresnel factors
//
//   A(u, tau; m) = sqrt(m / (2 pi i hbar tau)) * exp(i m u^2 / (2 hbar tau)),
//
// with the principal square root. Spatial axes use m = mass; the Stueckelberg
// time axis uses m = -mass c^2 so that the exponent carries the invariant
// interval (dx^2 - c^2 dt^2). With this branch every factor integrates to one
// over its axis, which fixes the s -> 0+ identity limit.

#pragma once

#include <complex>
#include <span>
#include <vector>

#include "timeslit/packets.hpp"
#include "timeslit/units.hpp"

namespace timeslit {

/// Number of spatial axes, 1 to 3.
class SpatialDim {
 public:
  explicit SpatialDim(int d);
  int value() const { return d_; }

 private:
  int d_;
};

enum class KernelKind { schrodinger, floquet, stueckelberg };

/// Normalisation sqrt(m / (2 pi i hbar tau)) of one Fresnel factor.
cplx axis_prefactor(double tau, double axis_mass, double hbar);

/// One Fresnel factor A(u, tau; m). Throws SingularKernel for tau == 0.
cplx axis_kernel(double u, double tau, double axis_mass, double hbar);

/// (m / (2 pi i hbar t))^{d/2} exp(i m |dx|^2 / (2 hbar t)); d = dx.size().
cplx schrodinger_kernel(std::span<const double> dx, double t, const ModelConstants& k = {});
cplx schrodinger_kernel(double dx, double t, const ModelConstants& k = {});

/// Floquet propagator: delta(t' - t + s) times a Schroedinger spatial factor.
struct FloquetKernel {
  double time_shift = 0.0;  // source time is t - time_shift
  cplx spatial_part;

  double source_time(double t) const { return t - time_shift; }
};

FloquetKernel floquet_kernel(std::span<const double> dx, double s, const ModelConstants& k = {});
FloquetKernel floquet_kernel(double dx, double s, const ModelConstants& k = {});

/// N_d(s) exp(i M (|dx|^2 - c^2 dt^2) / (2 s hbar)) with one spatial Fresnel
/// normalisation per axis and one time-axis normalisation of mass -M c^2.
cplx stueckelberg_prefactor(SpatialDim d, double s, const ModelConstants& k = {});
cplx stueckelberg_kernel(std::span<const double> dx, double dt, double s,
                         const ModelConstants& k = {});
cplx stueckelberg_kernel(double dx, double dt, double s, const ModelConstants& k = {});

struct KernelSample {
  cplx value;
  double displacement_x = 0.0;
  double displacement_t = 0.0;
  double evolution_param = 0.0;
};

/// One-dimensional sample of the selected kernel. For Floquet the value is the
/// spatial coefficient of the delta constraint dt == s.
KernelSample sample_kernel(KernelKind kind, double dx, double dt, double param,
                           const ModelConstants& k = {});

struct IdentityLimitReport {
  std::vector<double> s_values;
  std::vector<double> deviations;  // relative L2 distance of K(s) f from f
  std::vector<double> predicted;   // same quantity from the propagated closed form
  std::vector<double> rates;       // convergence order between consecutive s values
};

/// Applies the kernel by quadrature to a unit Gaussian test packet of
/// standard deviation sigma at each s in s_values and measures the distance to
/// the input. For Stueckelberg both axes are propagated and the deviation is
/// the space-time one. Throws SingularKernel if any s is zero.
IdentityLimitReport kernel_identity_limit(KernelKind kind, double sigma,
                                          const std::vector<double>& s_values,
                                          const ModelConstants& k = {});

}  // namespace timeslit
