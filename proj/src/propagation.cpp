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

#include "timeslit/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "timeslit/errors.hpp"
#include "timeslit/kernels.hpp"
#include "timeslit/parallel.hpp"

namespace timeslit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// Source envelopes are truncated where the amplitude is below ~1e-13.
constexpr double kSpatialReachSigmas = 11.0;
constexpr double kGateReachWidths = 8.0;

std::size_t odd_count(double range, double max_step, std::size_t cap, const char* what) {
  double n = std::ceil(range / max_step) + 1.0;
  if (!std::isfinite(n) || n < 3.0) n = 3.0;
  auto count = static_cast<std::size_t>(n);
  if (count % 2 == 0) ++count;
  if (count > cap) {
    throw ResolutionError(std::string(what) + ": needs " + std::to_string(count) +
                          " points, above the cap of " + std::to_string(cap));
  }
  return count;
}

double carrier_step(double wavenumber, double samples_per_period) {
  const double kk = std::abs(wavenumber);
  return kk > 0.0 ? 2.0 * kPi / (samples_per_period * kk) : kInf;
}

// Rectangular gates are sized as Gaussians of half their duration; only the
// grid extent depends on this.
GaussianState sizing_state(const SpacetimePacket& packet, const ModelConstants& k) {
  SpacetimePacket g = packet;
  for (auto& gate : g.gates) {
    if (gate.profile == GateProfile::rectangular) {
      gate.profile = GateProfile::gaussian;
      gate.width_delta_t = 0.5 * gate.width_delta_t;
    }
  }
  return gaussian_state(g, k);
}

Axis observation_axis(const std::vector<AxisGaussian>& terms, const ResolutionPolicy& policy,
                      const char* what) {
  double lo = kInf, hi = -kInf, step = kInf;
  for (const auto& g : terms) {
    const double sig = g.intensity_sigma();
    lo = std::min(lo, g.center - policy.range_sigmas * sig);
    hi = std::max(hi, g.center + policy.range_sigmas * sig);
    step = std::min(step, sig / policy.samples_per_sigma);
  }
  // Cross terms oscillate at the difference of the local wavenumbers, which is
  // linear in u, so its largest magnitude sits at an end of the range.
  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      const double w = std::max(
          std::abs(terms[a].local_wavenumber(lo) - terms[b].local_wavenumber(lo)),
          std::abs(terms[a].local_wavenumber(hi) - terms[b].local_wavenumber(hi)));
      if (w > 0.0) step = std::min(step, 2.0 * kPi / (policy.samples_per_fringe * w));
    }
  }
  const double mid = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  return centered_axis(mid, half, odd_count(hi - lo, step, policy.max_points, what));
}

struct Sampled {
  std::vector<std::vector<cplx>> x;  // [term][i]
  std::vector<std::vector<cplx>> t;  // [term][m]
};

Field2D evaluate_state(const GaussianState& state, const Grid2D& grid, unsigned workers) {
  Sampled s;
  for (const auto& term : state.terms) {
    std::vector<cplx> xs(grid.x.n), ts(grid.t.n);
    for (std::size_t i = 0; i < grid.x.n; ++i) xs[i] = term.x(grid.x.at(i));
    for (std::size_t m = 0; m < grid.t.n; ++m) ts[m] = term.t(grid.t.at(m));
    s.x.push_back(std::move(xs));
    s.t.push_back(std::move(ts));
  }
  Field2D f(grid);
  parallel_for(grid.t.n, workers, [&](std::size_t m) {
    for (std::size_t i = 0; i < grid.x.n; ++i) {
      cplx v = 0.0;
      for (std::size_t q = 0; q < s.x.size(); ++q) v += s.x[q][i] * s.t[q][m];
      f.at(i, m) = v;
    }
  });
  return f;
}

// K[i][j] = w_j A(obs_i - src_j, tau; m)
std::vector<cplx> weighted_kernel_matrix(const Axis& obs, const Axis& src, double tau,
                                         double axis_mass, double hbar) {
  const auto w = simpson_weights(src);
  const cplx pre = axis_prefactor(tau, axis_mass, hbar);
  const double scale = axis_mass / (2.0 * hbar * tau);
  std::vector<cplx> k(obs.n * src.n);
  for (std::size_t i = 0; i < obs.n; ++i) {
    const double u = obs.at(i);
    for (std::size_t j = 0; j < src.n; ++j) {
      const double d = u - src.at(j);
      k[i * src.n + j] = w[j] * pre * std::polar(1.0, scale * d * d);
    }
  }
  return k;
}

double rel_drift(double before, double after) { return std::abs(after - before) / before; }

Axis packet_source_x(const GaussianSpatialPacket& p, double max_step, const ResolutionPolicy& policy) {
  const double reach = kSpatialReachSigmas * p.width_sigma_x;
  return centered_axis(p.center_x, reach, odd_count(2.0 * reach, max_step, policy.max_points, "source x"));
}

void check_source_x(const Axis& src, const Axis& obs, double tau, double p0,
                    const ModelConstants& k, const ResolutionPolicy& policy,
                    ResolutionDiagnostics& diag) {
  const double kernel = max_kernel_step(src, obs, tau, k.mass, k.hbar, policy.samples_per_period);
  diag.max_source_dx = std::min(kernel, carrier_step(p0 / k.hbar, policy.samples_per_period));
  diag.required_source_nx =
      static_cast<std::size_t>(std::ceil((src.max - src.min) / diag.max_source_dx)) + 1;
  require_step(src, diag.max_source_dx, "source x");
}

}  // namespace

std::string_view to_string(Engine e) {
  return e == Engine::quadrature ? "quadrature" : "closed_form";
}

std::string_view to_string(Theory t) {
  switch (t) {
    case Theory::schrodinger_control: return "schrodinger_control";
    case Theory::floquet: return "floquet";
    case Theory::stueckelberg: return "stueckelberg";
  }
  return "?";
}

Engine engine_from_string(std::string_view s) {
  if (s == "closed_form") return Engine::closed_form;
  if (s == "quadrature") return Engine::quadrature;
  throw DomainError("unknown engine '" + std::string(s) + "'");
}

Theory theory_from_string(std::string_view s) {
  if (s == "schrodinger_control") return Theory::schrodinger_control;
  if (s == "floquet") return Theory::floquet;
  if (s == "stueckelberg") return Theory::stueckelberg;
  throw DomainError("unknown theory '" + std::string(s) + "'");
}

double max_kernel_step(const Axis& src, const Axis& obs, double tau, double axis_mass,
                       double hbar, double samples_per_period) {
  const double reach = std::max(std::abs(obs.max - src.min), std::abs(src.max - obs.min));
  const double rate = std::abs(axis_mass) * reach / (hbar * std::abs(tau));
  return rate > 0.0 ? 2.0 * kPi / (samples_per_period * rate) : kInf;
}

void require_step(const Axis& src, double max_step, const char* axis_name) {
  if (src.step() > max_step * (1.0 + 1e-12)) {
    const auto need = static_cast<std::size_t>(std::ceil((src.max - src.min) / max_step)) + 1;
    throw ResolutionError(std::string(axis_name) + ": step " + std::to_string(src.step()) +
                          " exceeds " + std::to_string(max_step) + "; need n >= " +
                          std::to_string(need));
  }
}

Grid2D observation_grid_for(const GaussianState& evolved, const ResolutionPolicy& policy) {
  std::vector<AxisGaussian> xs, ts;
  for (const auto& term : evolved.terms) {
    xs.push_back(term.x);
    ts.push_back(term.t);
  }
  // All terms share one spatial factor; only distinct time terms interfere.
  return Grid2D{observation_axis({xs.front()}, policy, "observation x"),
                observation_axis(ts, policy, "observation t")};
}

Grid2D source_grid_for(const SpacetimePacket& packet, double tau, Theory theory,
                       const Grid2D& observation, const ModelConstants& k,
                       const ResolutionPolicy& policy) {
  const auto& sp = packet.spatial;
  // The kernel rule depends on the source extent, which is fixed first.
  const double reach_x = kSpatialReachSigmas * sp.width_sigma_x;
  const Axis extent_x = centered_axis(sp.center_x, reach_x, 3);
  double step_x = std::min(sp.width_sigma_x / policy.samples_per_width,
                           carrier_step(sp.mean_momentum_p0 / k.hbar, policy.samples_per_period));
  if (theory != Theory::schrodinger_control || tau != 0.0) {
    if (tau != 0.0) {
      step_x = std::min(step_x, max_kernel_step(extent_x, observation.x, tau, k.mass, k.hbar,
                                                policy.samples_per_period));
    }
  }
  const Axis x = packet_source_x(sp, step_x, policy);

  double lo = kInf, hi = -kInf, step_t = kInf;
  for (const auto& g : packet.gates) {
    const double reach = g.profile == GateProfile::gaussian ? kGateReachWidths * g.width_delta_t
                                                            : 0.6 * g.width_delta_t;
    lo = std::min(lo, g.center_t - reach);
    hi = std::max(hi, g.center_t + reach);
    step_t = std::min(step_t, g.width_delta_t / policy.samples_per_width);
  }
  step_t = std::min(step_t, carrier_step(packet.mean_energy_E0 / k.hbar, policy.samples_per_period));
  if (theory == Theory::stueckelberg && tau != 0.0) {
    const Axis extent_t{lo, hi, 3};
    step_t = std::min(step_t, max_kernel_step(extent_t, observation.t, tau, -k.mass * k.c * k.c,
                                              k.hbar, policy.samples_per_period));
  }
  const Axis t = centered_axis(0.5 * (lo + hi), 0.5 * (hi - lo),
                               odd_count(hi - lo, step_t, policy.max_points, "source t"));
  return Grid2D{x, t};
}

double flight_parameter(double distance, double p0, const ModelConstants& k) {
  if (!(p0 > 0.0)) throw DomainError("flight parameter needs p0 > 0");
  if (!(distance > 0.0)) throw DomainError("flight parameter needs a positive distance");
  return k.mass * distance / p0;
}

Field1D schrodinger_step(const Field1D& source, double t, const Axis& observation,
                         const ModelConstants& k) {
  const auto K = weighted_kernel_matrix(observation, source.x, t, k.mass, k.hbar);
  Field1D out{observation, std::vector<cplx>(observation.n)};
  for (std::size_t i = 0; i < observation.n; ++i) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < source.x.n; ++j) acc += K[i * source.x.n + j] * source.values[j];
    out.values[i] = acc;
  }
  return out;
}

Field2D floquet_step(const Field2D& source, double s, const Axis& observation_x,
                     const ModelConstants& k, unsigned workers) {
  const Axis& sx = source.grid.x;
  const auto K = weighted_kernel_matrix(observation_x, sx, s, k.mass, k.hbar);
  Field2D out(Grid2D{observation_x, source.grid.t.translated(s)});
  parallel_for(source.grid.t.n, workers, [&](std::size_t m) {
    for (std::size_t i = 0; i < observation_x.n; ++i) {
      cplx acc = 0.0;
      for (std::size_t j = 0; j < sx.n; ++j) acc += K[i * sx.n + j] * source.at(j, m);
      out.at(i, m) = acc;
    }
  });
  return out;
}

Field2D stueckelberg_step(const Field2D& source, double s, const Grid2D& observation,
                          const ModelConstants& k, unsigned workers) {
  const Grid2D& src = source.grid;
  const auto Kt = weighted_kernel_matrix(observation.t, src.t, s, -k.mass * k.c * k.c, k.hbar);
  const auto Kx = weighted_kernel_matrix(observation.x, src.x, s, k.mass, k.hbar);
  // Pass 1: A[m][j] = sum_l Kt[m][l] psi(j, l)
  std::vector<cplx> A(observation.t.n * src.x.n);
  parallel_for(observation.t.n, workers, [&](std::size_t m) {
    const cplx* kt = &Kt[m * src.t.n];
    for (std::size_t j = 0; j < src.x.n; ++j) {
      cplx acc = 0.0;
      for (std::size_t l = 0; l < src.t.n; ++l) acc += kt[l] * source.at(j, l);
      A[m * src.x.n + j] = acc;
    }
  });
  // Pass 2: out(i, m) = sum_j Kx[i][j] A[m][j]
  Field2D out(observation);
  parallel_for(observation.t.n, workers, [&](std::size_t m) {
    const cplx* a = &A[m * src.x.n];
    for (std::size_t i = 0; i < observation.x.n; ++i) {
      const cplx* kx = &Kx[i * src.x.n];
      cplx acc = 0.0;
      for (std::size_t j = 0; j < src.x.n; ++j) acc += kx[j] * a[j];
      out.at(i, m) = acc;
    }
  });
  return out;
}

SpatialPropagationResult propagate_schrodinger(const GaussianSpatialPacket& packet,
                                               double t_elapsed, const ModelConstants& k,
                                               const SpatialOptions& options) {
  packet.validate();
  if (!(t_elapsed >= 0.0) || !std::isfinite(t_elapsed)) {
    throw DomainError("propagate_schrodinger: elapsed time must be >= 0");
  }
  const ResolutionPolicy& policy = options.policy;
  const AxisGaussian evolved = spatial_gaussian(packet, k).evolved(t_elapsed, k.mass, k.hbar);
  const Axis obs = options.observation ? *options.observation
                                       : observation_axis({evolved}, policy, "observation x");
  obs.validate("observation x");

  double step = std::min(packet.width_sigma_x / policy.samples_per_width,
                         carrier_step(packet.mean_momentum_p0 / k.hbar, policy.samples_per_period));
  const double reach = kSpatialReachSigmas * packet.width_sigma_x;
  if (t_elapsed > 0.0) {
    step = std::min(step, max_kernel_step(centered_axis(packet.center_x, reach, 3), obs, t_elapsed,
                                          k.mass, k.hbar, policy.samples_per_period));
  }
  const Axis src = options.source ? *options.source : packet_source_x(packet, step, policy);
  src.validate("source x");

  SpatialPropagationResult r;
  r.engine = options.engine;
  r.source = src;
  const Field1D input = sample_spatial(packet, src, k);
  r.norm_before = norm2(input);

  if (t_elapsed == 0.0) {
    r.field = sample_spatial(packet, obs, k);
  } else if (options.engine == Engine::closed_form) {
    r.field = Field1D{obs, std::vector<cplx>(obs.n)};
    for (std::size_t i = 0; i < obs.n; ++i) r.field.values[i] = evolved(obs.at(i));
  } else {
    require_step(src, step, "source x");
    r.field = schrodinger_step(input, t_elapsed, obs, k);
  }
  r.norm_after = norm2(r.field);
  r.norm_drift = rel_drift(r.norm_before, r.norm_after);
  return r;
}

namespace {

struct Prepared {
  Grid2D observation;
  Grid2D source;
};

Prepared prepare(const SpacetimePacket& packet, const GaussianState& evolved_sizing, double tau,
                 Theory theory, const ModelConstants& k, const PropagationOptions& options) {
  Prepared p;
  p.observation = options.observation ? *options.observation
                                      : observation_grid_for(evolved_sizing, options.policy);
  p.observation.validate();
  p.source = options.source
                 ? *options.source
                 : source_grid_for(packet, tau, theory, p.observation, k, options.policy);
  p.source.validate();
  check_packet_resolution(packet, p.source);
  return p;
}

}  // namespace

PropagationResult propagate_floquet(const SpacetimePacket& packet, double delta_s,
                                    const ModelConstants& k, const PropagationOptions& options) {
  packet.validate();
  if (!(delta_s > 0.0) || !std::isfinite(delta_s)) {
    throw DomainError("propagate_floquet: delta_s must be > 0");
  }
  if (options.engine == Engine::closed_form && !packet.all_gaussian()) {
    throw DomainError("closed_form engine requires gaussian gates; use quadrature");
  }
  const GaussianState sizing = floquet_evolved(sizing_state(packet, k), delta_s, k);
  const Prepared prep = prepare(packet, sizing, delta_s, Theory::floquet, k, options);

  PropagationResult r;
  r.engine = options.engine;
  r.resolution.source = prep.source;
  const Axis extent_x = prep.source.x;
  const double kernel = max_kernel_step(extent_x, prep.observation.x, delta_s, k.mass, k.hbar,
                                        options.policy.samples_per_period);
  r.resolution.max_source_dx =
      std::min(kernel, carrier_step(packet.spatial.mean_momentum_p0 / k.hbar,
                                    options.policy.samples_per_period));
  r.resolution.required_source_nx = static_cast<std::size_t>(
      std::ceil((extent_x.max - extent_x.min) / r.resolution.max_source_dx)) + 1;
  r.resolution.max_source_dt = kInf;  // the time shift is exact
  r.resolution.required_source_nt = prep.source.t.n;
  r.norm_before = norm2(sample_packet(packet, prep.source, k, options.workers));

  if (options.engine == Engine::closed_form) {
    r.field = evaluate_state(floquet_evolved(gaussian_state(packet, k), delta_s, k),
                             prep.observation, options.workers);
  } else {
    require_step(prep.source.x, r.resolution.max_source_dx, "source x");
    // Sample the source exactly at t - s for every observation time.
    const Grid2D shifted{prep.source.x, prep.observation.t.translated(-delta_s)};
    const Field2D src = sample_packet(packet, shifted, k, options.workers);
    r.field = floquet_step(src, delta_s, prep.observation.x, k, options.workers);
  }
  r.norm_after = norm2(r.field);
  r.norm_drift = rel_drift(r.norm_before, r.norm_after);
  return r;
}

PropagationResult propagate_stueckelberg(const SpacetimePacket& packet, double s_elapsed,
                                         const ModelConstants& k,
                                         const PropagationOptions& options) {
  packet.validate();
  if (!(s_elapsed > 0.0) || !std::isfinite(s_elapsed)) {
    throw DomainError("propagate_stueckelberg: s_elapsed must be > 0");
  }
  if (options.engine == Engine::closed_form && !packet.all_gaussian()) {
    throw DomainError("closed_form engine requires gaussian gates; use quadrature");
  }
  const GaussianState sizing = stueckelberg_evolved(sizing_state(packet, k), s_elapsed, k);
  const Prepared prep = prepare(packet, sizing, s_elapsed, Theory::stueckelberg, k, options);

  PropagationResult r;
  r.engine = options.engine;
  auto& diag = r.resolution;
  diag.source = prep.source;
  check_source_x(prep.source.x, prep.observation.x, s_elapsed, packet.spatial.mean_momentum_p0, k,
                 options.policy, diag);
  const double time_mass = -k.mass * k.c * k.c;
  diag.max_source_dt =
      std::min(max_kernel_step(prep.source.t, prep.observation.t, s_elapsed, time_mass, k.hbar,
                               options.policy.samples_per_period),
               carrier_step(packet.mean_energy_E0 / k.hbar, options.policy.samples_per_period));
  diag.required_source_nt = static_cast<std::size_t>(
      std::ceil((prep.source.t.max - prep.source.t.min) / diag.max_source_dt)) + 1;

  const Field2D input = sample_packet(packet, prep.source, k, options.workers);
  r.norm_before = norm2(input);
  if (options.engine == Engine::closed_form) {
    r.field = evaluate_state(stueckelberg_evolved(gaussian_state(packet, k), s_elapsed, k),
                             prep.observation, options.workers);
  } else {
    require_step(prep.source.t, diag.max_source_dt, "source t");
    r.field = stueckelberg_step(input, s_elapsed, prep.observation, k, options.workers);
  }
  r.norm_after = norm2(r.field);
  r.norm_drift = rel_drift(r.norm_before, r.norm_after);
  return r;
}

namespace {

double lsq_slope(const std::vector<double>& s, const std::vector<double>& y) {
  const double n = static_cast<double>(s.size());
  double ms = 0.0, my = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    ms += s[i];
    my += y[i];
  }
  ms /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sxy += (s[i] - ms) * (y[i] - my);
    sxx += (s[i] - ms) * (s[i] - ms);
  }
  return sxy / sxx;
}

double mean_x_1d(const Field1D& f) {
  const auto w = simpson_weights(f.x);
  double n0 = 0.0, n1 = 0.0;
  for (std::size_t i = 0; i < f.x.n; ++i) {
    const double p = w[i] * std::norm(f.values[i]);
    n0 += p;
    n1 += p * f.x.at(i);
  }
  if (!(n0 > 0.0)) throw DomainError("hamilton_diagnostics: zero norm");
  return n1 / n0;
}

}  // namespace

HamiltonDiagnostics hamilton_diagnostics(const SpacetimePacket& packet, Theory theory,
                                         const std::vector<double>& s_samples,
                                         const ModelConstants& k,
                                         const PropagationOptions& options) {
  packet.validate();
  if (s_samples.size() < 3) throw DomainError("hamilton_diagnostics: need at least 3 samples");
  const auto [lo, hi] = std::minmax_element(s_samples.begin(), s_samples.end());
  if (!(*hi > *lo)) throw DomainError("hamilton_diagnostics: samples are degenerate");

  HamiltonDiagnostics d;
  d.s_samples = s_samples;
  d.predicted_slope_x = packet.spatial.mean_momentum_p0 / k.mass;
  d.predicted_slope_t =
      theory == Theory::stueckelberg ? packet.mean_energy_E0 / (k.mass * k.c * k.c) : 1.0;
  for (double s : s_samples) {
    if (theory == Theory::schrodinger_control) {
      SpatialOptions so;
      so.engine = options.engine;
      so.policy = options.policy;
      const auto r = propagate_schrodinger(packet.spatial, s, k, so);
      d.mean_x.push_back(mean_x_1d(r.field));
      d.mean_t.push_back(s);
      continue;
    }
    PropagationOptions o = options;
    o.observation.reset();
    o.source.reset();
    const auto r = theory == Theory::floquet ? propagate_floquet(packet, s, k, o)
                                             : propagate_stueckelberg(packet, s, k, o);
    const Moments m = expectations(r.field, k);
    d.mean_x.push_back(m.mean_x);
    d.mean_t.push_back(m.mean_t);
  }
  d.slope_x = lsq_slope(d.s_samples, d.mean_x);
  d.slope_t = lsq_slope(d.s_samples, d.mean_t);
  if (!std::isfinite(d.slope_x) || !std::isfinite(d.slope_t)) {
    throw DomainError("hamilton_diagnostics: non-finite slope");
  }
  return d;
}

}  // namespace timeslit
