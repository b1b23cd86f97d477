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

// Closed-form complex Gaussian algebra. A free Fresnel factor of mass m maps
//
//   A exp(-a (u - c)^2 + i k (u - c))
//
// after parameter tau to
//
//   A (1 + i b)^(-1/2) exp(i hbar k^2 tau / 2m) exp(-a' (u - c')^2 + i k (u - c')),
//   b = 2 hbar a tau / m,  a' = a / (1 + i b),  c' = c + hbar k tau / m,
//
// obtained by completing the square in the convolution integral.

#pragma once

#include <complex>
#include <vector>

#include "timeslit/packets.hpp"
#include "timeslit/units.hpp"

namespace timeslit {

struct AxisGaussian {
  cplx amplitude = 1.0;
  cplx a = 0.5;  // Re(a) > 0
  double center = 0.0;
  double k = 0.0;

  cplx operator()(double u) const;
  /// Standard deviation of |f|^2.
  double intensity_sigma() const;
  /// d(phase)/du at u.
  double local_wavenumber(double u) const;
  /// Free evolution with a Fresnel factor of mass `axis_mass` for `tau`.
  AxisGaussian evolved(double tau, double axis_mass, double hbar) const;
};

struct SeparableGaussian {
  AxisGaussian x;
  AxisGaussian t;

  cplx operator()(double xv, double tv) const { return x(xv) * t(tv); }
};

/// Sum of separable Gaussian terms; one term per Gaussian gate.
struct GaussianState {
  std::vector<SeparableGaussian> terms;

  cplx operator()(double x, double t) const;
};

AxisGaussian spatial_gaussian(const GaussianSpatialPacket& p, const ModelConstants& k = {});

/// Exact closed form of a packet whose gates are all Gaussian; throws
/// DomainError otherwise.
GaussianState gaussian_state(const SpacetimePacket& packet, const ModelConstants& k = {});

/// Schroedinger spatial spreading for tau, plus exact translation t -> t + s.
GaussianState floquet_evolved(const GaussianState& state, double s, const ModelConstants& k = {});

/// Fresnel spreading on both axes: mass M in x and -M c^2 in t.
GaussianState stueckelberg_evolved(const GaussianState& state, double s,
                                   const ModelConstants& k = {});

}  // namespace timeslit
