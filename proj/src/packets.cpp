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

#include "timeslit/packets.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "timeslit/errors.hpp"
#include "timeslit/parallel.hpp"

namespace timeslit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kMinStepsPerWidth = 4.0;

}  // namespace

std::size_t Axis::nearest(double u) const {
  const double r = std::round((u - min) / step());
  if (!(r > 0.0)) return 0;
  return std::min<std::size_t>(static_cast<std::size_t>(r), n - 1);
}

void Axis::validate(const char* name) const {
  if (n < 2) throw DomainError(std::string(name) + ": axis needs at least 2 points");
  if (!std::isfinite(min) || !std::isfinite(max) || !(max > min)) {
    throw DomainError(std::string(name) + ": axis needs finite max > min");
  }
}

Axis centered_axis(double center, double half_width, std::size_t n) {
  return Axis{center - half_width, center + half_width, n};
}

std::vector<double> simpson_weights(const Axis& axis) {
  const std::size_t n = axis.n;
  const double h = axis.step();
  std::vector<double> w(n, 0.0);
  const std::size_t intervals = n - 1;
  if (intervals == 1) {
    w[0] = w[1] = 0.5 * h;
    return w;
  }
  // Simpson 1/3 over an even number of leading intervals, 3/8 on the last three
  // when the total is odd.
  const std::size_t even = (intervals % 2 == 0) ? intervals : intervals - 3;
  for (std::size_t i = 0; i + 2 <= even; i += 2) {
    w[i] += h / 3.0;
    w[i + 1] += 4.0 * h / 3.0;
    w[i + 2] += h / 3.0;
  }
  if (even != intervals) {
    const std::size_t s = even;
    w[s] += 3.0 * h / 8.0;
    w[s + 1] += 9.0 * h / 8.0;
    w[s + 2] += 9.0 * h / 8.0;
    w[s + 3] += 3.0 * h / 8.0;
  }
  return w;
}

void Grid2D::validate() const {
  x.validate("grid.x");
  t.validate("grid.t");
}

void GaussianSpatialPacket::validate() const {
  if (!(width_sigma_x > 0.0) || !std::isfinite(width_sigma_x)) {
    throw DomainError("spatial packet width must be > 0");
  }
  if (!std::isfinite(center_x) || !std::isfinite(mean_momentum_p0) ||
      !std::isfinite(global_phase)) {
    throw DomainError("spatial packet parameters must be finite");
  }
}

cplx GaussianSpatialPacket::evaluate(double x, const ModelConstants& k) const {
  const double s2 = width_sigma_x * width_sigma_x;
  const double norm = std::pow(2.0 * kPi * s2, -0.25);
  const double u = x - center_x;
  const double env = norm * std::exp(-u * u / (4.0 * s2));
  return env * std::polar(1.0, mean_momentum_p0 * x / k.hbar + global_phase);
}

void TimeGate::validate() const {
  if (!(width_delta_t > 0.0) || !std::isfinite(width_delta_t)) {
    throw DomainError("gate width must be > 0");
  }
  if (!std::isfinite(center_t)) throw DomainError("gate center must be finite");
}

double TimeGate::envelope(double t) const {
  const double u = t - center_t;
  if (profile == GateProfile::gaussian) {
    return std::exp(-u * u / (2.0 * width_delta_t * width_delta_t));
  }
  return std::abs(u) <= 0.5 * width_delta_t ? 1.0 : 0.0;
}

double gate_overlap(const TimeGate& a, const TimeGate& b) {
  using P = GateProfile;
  if (a.profile == P::gaussian && b.profile == P::gaussian) {
    const double A2 = a.width_delta_t * a.width_delta_t;
    const double B2 = b.width_delta_t * b.width_delta_t;
    const double d = a.center_t - b.center_t;
    return std::sqrt(2.0 * kPi * A2 * B2 / (A2 + B2)) * std::exp(-d * d / (2.0 * (A2 + B2)));
  }
  if (a.profile == P::rectangular && b.profile == P::rectangular) {
    const double lo = std::max(a.center_t - 0.5 * a.width_delta_t, b.center_t - 0.5 * b.width_delta_t);
    const double hi = std::min(a.center_t + 0.5 * a.width_delta_t, b.center_t + 0.5 * b.width_delta_t);
    return std::max(0.0, hi - lo);
  }
  const TimeGate& g = a.profile == P::gaussian ? a : b;
  const TimeGate& r = a.profile == P::gaussian ? b : a;
  const double s = std::sqrt(2.0) * g.width_delta_t;
  const double lo = r.center_t - 0.5 * r.width_delta_t - g.center_t;
  const double hi = r.center_t + 0.5 * r.width_delta_t - g.center_t;
  return g.width_delta_t * std::sqrt(kPi / 2.0) * (std::erf(hi / s) - std::erf(lo / s));
}

void SpacetimePacket::validate() const {
  spatial.validate();
  if (gates.empty()) throw DomainError("packet needs at least one gate");
  for (const auto& g : gates) g.validate();
  if (!std::isfinite(mean_energy_E0)) throw DomainError("mean energy must be finite");
}

bool SpacetimePacket::all_gaussian() const {
  return std::all_of(gates.begin(), gates.end(),
                     [](const TimeGate& g) { return g.profile == GateProfile::gaussian; });
}

double SpacetimePacket::closed_form_norm2() const {
  // The spatial factor is unit-normalised and the carrier cancels in |psi|^2.
  cplx sum = 0.0;
  for (const auto& a : gates) {
    for (const auto& b : gates) sum += std::conj(a.amplitude) * b.amplitude * gate_overlap(a, b);
  }
  return sum.real();
}

SpacetimePacket SpacetimePacket::normalized() const {
  const double n2 = closed_form_norm2();
  if (!(n2 > 0.0)) throw DomainError("cannot normalise a packet with zero norm");
  SpacetimePacket out = *this;
  const double f = 1.0 / std::sqrt(n2);
  for (auto& g : out.gates) g.amplitude *= f;
  return out;
}

SpacetimePacket SpacetimePacket::single_gate(std::size_t k) const {
  SpacetimePacket out = *this;
  out.gates = {gates.at(k)};
  return out;
}

cplx evaluate_packet(const SpacetimePacket& packet, double x, double t, const ModelConstants& k) {
  cplx gates = 0.0;
  for (const auto& g : packet.gates) gates += g.amplitude * g.envelope(t);
  return packet.spatial.evaluate(x, k) * gates * std::polar(1.0, -packet.mean_energy_E0 * t / k.hbar);
}

Field2D sample_packet(const SpacetimePacket& packet, const Grid2D& grid, const ModelConstants& k,
                      unsigned workers) {
  grid.validate();
  Field2D f(grid);
  std::vector<cplx> spatial(grid.x.n);
  for (std::size_t i = 0; i < grid.x.n; ++i) spatial[i] = packet.spatial.evaluate(grid.x.at(i), k);
  parallel_for(grid.t.n, workers, [&](std::size_t j) {
    const double t = grid.t.at(j);
    cplx temporal = 0.0;
    for (const auto& g : packet.gates) temporal += g.amplitude * g.envelope(t);
    temporal *= std::polar(1.0, -packet.mean_energy_E0 * t / k.hbar);
    for (std::size_t i = 0; i < grid.x.n; ++i) f.at(i, j) = spatial[i] * temporal;
  });
  return f;
}

Field1D sample_spatial(const GaussianSpatialPacket& packet, const Axis& axis,
                       const ModelConstants& k) {
  axis.validate("axis");
  Field1D f{axis, std::vector<cplx>(axis.n)};
  for (std::size_t i = 0; i < axis.n; ++i) f.values[i] = packet.evaluate(axis.at(i), k);
  return f;
}

double norm2(const Field2D& field) {
  const auto wx = simpson_weights(field.grid.x);
  const auto wt = simpson_weights(field.grid.t);
  double total = 0.0;
  for (std::size_t j = 0; j < field.grid.t.n; ++j) {
    double row = 0.0;
    for (std::size_t i = 0; i < field.grid.x.n; ++i) row += wx[i] * std::norm(field.at(i, j));
    total += wt[j] * row;
  }
  return total;
}

double norm2(const Field1D& field) {
  const auto w = simpson_weights(field.x);
  double total = 0.0;
  for (std::size_t i = 0; i < field.x.n; ++i) total += w[i] * std::norm(field.values[i]);
  return total;
}

void check_packet_resolution(const SpacetimePacket& packet, const Grid2D& grid) {
  const double dx = grid.x.step();
  const double dt = grid.t.step();
  if (packet.spatial.width_sigma_x < kMinStepsPerWidth * dx) {
    const auto need = static_cast<std::size_t>(
        std::ceil(kMinStepsPerWidth * (grid.x.max - grid.x.min) / packet.spatial.width_sigma_x)) + 1;
    throw ResolutionError("spatial width " + std::to_string(packet.spatial.width_sigma_x) +
                          " spans fewer than 4 grid steps; need n_x >= " + std::to_string(need));
  }
  for (const auto& g : packet.gates) {
    if (g.width_delta_t < kMinStepsPerWidth * dt) {
      const auto need = static_cast<std::size_t>(
          std::ceil(kMinStepsPerWidth * (grid.t.max - grid.t.min) / g.width_delta_t)) + 1;
      throw ResolutionError("gate width " + std::to_string(g.width_delta_t) +
                            " spans fewer than 4 grid steps; need n_t >= " + std::to_string(need));
    }
  }
}

double norm2(const SpacetimePacket& packet, const Grid2D& grid, const ModelConstants& k) {
  packet.validate();
  grid.validate();
  check_packet_resolution(packet, grid);
  return norm2(sample_packet(packet, grid, k));
}

Moments expectations(const Field2D& field, const ModelConstants& k) {
  const Grid2D& g = field.grid;
  const auto wx = simpson_weights(g.x);
  const auto wt = simpson_weights(g.t);
  double n0 = 0.0, sx = 0.0, st = 0.0;
  cplx lag_x = 0.0, lag_t = 0.0;
  for (std::size_t j = 0; j < g.t.n; ++j) {
    const double t = g.t.at(j);
    for (std::size_t i = 0; i < g.x.n; ++i) {
      const double p = wx[i] * wt[j] * std::norm(field.at(i, j));
      n0 += p;
      sx += p * g.x.at(i);
      st += p * t;
      if (i + 1 < g.x.n) lag_x += std::conj(field.at(i, j)) * field.at(i + 1, j);
      if (j + 1 < g.t.n) lag_t += std::conj(field.at(i, j)) * field.at(i, j + 1);
    }
  }
  if (!(n0 > 0.0)) throw DomainError("expectations: field has zero norm");
  Moments m;
  m.mean_x = sx / n0;
  m.mean_t = st / n0;
  // Second pass about the means.
  double vxx = 0.0, vtt = 0.0;
  for (std::size_t j = 0; j < g.t.n; ++j) {
    const double dt = g.t.at(j) - m.mean_t;
    for (std::size_t i = 0; i < g.x.n; ++i) {
      const double dx = g.x.at(i) - m.mean_x;
      const double p = wx[i] * wt[j] * std::norm(field.at(i, j));
      vxx += p * dx * dx;
      vtt += p * dt * dt;
    }
  }
  m.sigma_x = std::sqrt(vxx / n0);
  m.sigma_t = std::sqrt(vtt / n0);
  m.mean_p = k.hbar * std::arg(lag_x) / g.x.step();
  m.mean_E = -k.hbar * std::arg(lag_t) / g.t.step();
  return m;
}

Moments expectations(const SpacetimePacket& packet, const Grid2D& grid, const ModelConstants& k) {
  packet.validate();
  grid.validate();
  check_packet_resolution(packet, grid);
  return expectations(sample_packet(packet, grid, k), k);
}

}  // namespace timeslit
