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

#include "timeslit/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "timeslit/errors.hpp"

namespace timeslit {

cplx AxisGaussian::operator()(double u) const {
  const double v = u - center;
  return amplitude * std::exp(-a * (v * v) + cplx(0.0, k * v));
}

double AxisGaussian::intensity_sigma() const { return 0.5 / std::sqrt(a.real()); }

double AxisGaussian::local_wavenumber(double u) const { return k - 2.0 * a.imag() * (u - center); }

AxisGaussian AxisGaussian::evolved(double tau, double axis_mass, double hbar) const {
  if (tau == 0.0) return *this;
  const cplx one_plus_ib = 1.0 + cplx(0.0, 2.0 * hbar * tau / axis_mass) * a;
  AxisGaussian out = *this;
  out.a = a / one_plus_ib;
  out.center = center + hbar * k * tau / axis_mass;
  out.amplitude = amplitude / std::sqrt(one_plus_ib) *
                  std::polar(1.0, hbar * k * k * tau / (2.0 * axis_mass));
  return out;
}

cplx GaussianState::operator()(double x, double t) const {
  cplx sum = 0.0;
  for (const auto& term : terms) sum += term(x, t);
  return sum;
}

AxisGaussian spatial_gaussian(const GaussianSpatialPacket& p, const ModelConstants& k) {
  const double s2 = p.width_sigma_x * p.width_sigma_x;
  const double kx = p.mean_momentum_p0 / k.hbar;
  AxisGaussian g;
  g.amplitude = std::pow(2.0 * std::numbers::pi * s2, -0.25) *
                std::polar(1.0, kx * p.center_x + p.global_phase);
  g.a = 1.0 / (4.0 * s2);
  g.center = p.center_x;
  g.k = kx;
  return g;
}

GaussianState gaussian_state(const SpacetimePacket& packet, const ModelConstants& k) {
  packet.validate();
  if (!packet.all_gaussian()) {
    throw DomainError("closed-form algebra requires gaussian gate profiles");
  }
  const AxisGaussian sx = spatial_gaussian(packet.spatial, k);
  const double kt = -packet.mean_energy_E0 / k.hbar;
  GaussianState state;
  for (const auto& gate : packet.gates) {
    AxisGaussian gt;
    gt.amplitude = gate.amplitude * std::polar(1.0, kt * gate.center_t);
    gt.a = 1.0 / (2.0 * gate.width_delta_t * gate.width_delta_t);
    gt.center = gate.center_t;
    gt.k = kt;
    state.terms.push_back({sx, gt});
  }
  return state;
}

GaussianState floquet_evolved(const GaussianState& state, double s, const ModelConstants& k) {
  GaussianState out = state;
  for (auto& term : out.terms) {
    term.x = term.x.evolved(s, k.mass, k.hbar);
    term.t.center += s;  // f(t - s): amplitude and phase reference move together
  }
  return out;
}

GaussianState stueckelberg_evolved(const GaussianState& state, double s, const ModelConstants& k) {
  GaussianState out = state;
  for (auto& term : out.terms) {
    term.x = term.x.evolved(s, k.mass, k.hbar);
    term.t = term.t.evolved(s, -k.mass * k.c * k.c, k.hbar);
  }
  return out;
}

}  // namespace timeslit
