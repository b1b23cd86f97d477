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

#include "timeslit/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "timeslit/gaussian.hpp"
#include "timeslit/parallel.hpp"

namespace timeslit {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWindowSigmas = 1.5;
// A maximum counts as a fringe only where the interference term exceeds this
// fraction of the envelope peak.
constexpr double kConstructiveFloor = 1e-10;

std::vector<double> axis_points(const Axis& a) {
  std::vector<double> out(a.n);
  for (std::size_t i = 0; i < a.n; ++i) out[i] = a.at(i);
  return out;
}

// Arrival-time trace of the mixed-state control: each pulse spreads under the
// Schroedinger law from its own emission time and the intensities add.
TwoGateRun run_control(const TwoGateConfig& cfg) {
  const ModelConstants& k = cfg.constants;
  const SpacetimePacket packet = cfg.packet();
  const double s_star = cfg.flight_s();
  const double L = cfg.x0 + cfg.flight_distance;

  SpatialOptions so;
  so.engine = cfg.engine;
  so.policy = cfg.policy;
  const auto at_flight = propagate_schrodinger(packet.spatial, s_star, k, so);

  // The arrival spread is the spatial width at s* over the group velocity.
  const AxisGaussian evolved = spatial_gaussian(packet.spatial, k).evolved(s_star, k.mass, k.hbar);
  const double spread = evolved.intensity_sigma() * k.mass / cfg.p0;
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& g : packet.gates) {
    lo = std::min(lo, g.center_t);
    hi = std::max(hi, g.center_t);
  }
  Axis times;
  if (cfg.observation) {
    times = cfg.observation->t;
  } else {
    const double half = 0.5 * (hi - lo) + cfg.policy.range_sigmas * spread;
    auto n = static_cast<std::size_t>(std::ceil(2.0 * half / (spread / cfg.policy.samples_per_sigma))) + 1;
    if (n % 2 == 0) ++n;
    if (n > cfg.policy.max_points) {
      throw ResolutionError("control trace needs " + std::to_string(n) + " points");
    }
    times = centered_axis(0.5 * (lo + hi) + s_star, half, n);
  }
  times.validate("observation t");

  std::vector<double> weights;
  for (const auto& g : packet.gates) weights.push_back(std::norm(g.amplitude) * gate_overlap(g, g));

  std::vector<double> intensity(times.n, 0.0);
  const Axis probe = centered_axis(L, 1e-3 * cfg.sigma_x, 3);
  parallel_for(times.n, cfg.workers, [&](std::size_t m) {
    double acc = 0.0;
    for (std::size_t q = 0; q < packet.gates.size(); ++q) {
      const double tau = times.at(m) - packet.gates[q].center_t;
      if (tau <= 0.0) continue;
      cplx amp;
      if (cfg.engine == Engine::closed_form) {
        amp = spatial_gaussian(packet.spatial, k).evolved(tau, k.mass, k.hbar)(L);
      } else {
        SpatialOptions po = so;
        po.observation = probe;
        amp = propagate_schrodinger(packet.spatial, tau, k, po).field.values[1];
      }
      acc += weights[q] * std::norm(amp);
    }
    intensity[m] = acc;
  });

  TwoGateRun run;
  run.s_star = s_star;
  run.norm_drift = at_flight.norm_drift;
  run.observation = Grid2D{at_flight.field.x, times};
  run.resolution.source = Grid2D{at_flight.source, times};
  run.trace.times = axis_points(times);
  run.trace.incoherent = intensity;
  run.trace.intensity = std::move(intensity);
  run.trace.detector_x = L;
  run.trace.theory = Theory::schrodinger_control;
  run.trace.predicted_spacing = cfg.predicted_spacing();
  return run;
}

double trapezoid_moment(const std::vector<double>& t, const std::vector<double>& y,
                        double shift, int power) {
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < t.size(); ++i) {
    const double a = y[i] * std::pow(t[i] - shift, power);
    const double b = y[i + 1] * std::pow(t[i + 1] - shift, power);
    acc += 0.5 * (a + b) * (t[i + 1] - t[i]);
  }
  return acc;
}

std::pair<std::size_t, std::size_t> window_indices(const IntensityTrace& trace) {
  const auto [lo, hi] = central_window(trace);
  const auto& t = trace.times;
  const auto first = static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), lo) - t.begin());
  const auto last = static_cast<std::size_t>(std::upper_bound(t.begin(), t.end(), hi) - t.begin());
  return {first, last};  // [first, last)
}

}  // namespace

void IntensityTrace::validate() const {
  if (times.empty()) throw DomainError("trace: empty");
  if (times.size() != intensity.size()) throw DomainError("trace: times/intensity size mismatch");
  if (incoherent && incoherent->size() != times.size()) {
    throw DomainError("trace: incoherent reference size mismatch");
  }
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!std::isfinite(times[i]) || !std::isfinite(intensity[i])) {
      throw DomainError("trace: non-finite sample at index " + std::to_string(i));
    }
    if (intensity[i] < 0.0 || (incoherent && (*incoherent)[i] < 0.0)) {
      throw DomainError("trace: negative intensity at index " + std::to_string(i));
    }
    if (i > 0 && !(times[i] > times[i - 1])) {
      throw DomainError("trace: times not strictly increasing at index " + std::to_string(i));
    }
  }
}

void TwoGateConfig::validate() const {
  if (!(constants.hbar > 0.0 && constants.mass > 0.0 && constants.c > 0.0)) {
    throw DomainError("constants: hbar, mass and c must be > 0");
  }
  if (!(p0 > 0.0)) throw DomainError("p0 must be > 0");
  if (!(sigma_x > 0.0)) throw DomainError("sigma_x must be > 0");
  if (!(flight_distance > 0.0)) throw DomainError("flight_distance must be > 0");
  if (!(gate_width > 0.0)) throw DomainError("gate_width must be > 0");
  if (!(gate_spacing > 0.0)) throw DomainError("gate_spacing must be > 0");
  if (energy && !(*energy > 0.0)) throw DomainError("energy must be > 0");
  if (s_override && !(*s_override > 0.0)) throw DomainError("s_override must be > 0");
  if (workers == 0) throw DomainError("workers must be >= 1");
}

double TwoGateConfig::mean_energy() const {
  if (energy) return *energy;
  const double mc2 = constants.mass * constants.c * constants.c;
  return mc2 + p0 * p0 / (2.0 * constants.mass);
}

double TwoGateConfig::flight_s() const {
  return s_override ? *s_override : flight_parameter(flight_distance, p0, constants);
}

SpacetimePacket TwoGateConfig::packet() const {
  validate();
  SpacetimePacket p;
  p.spatial = GaussianSpatialPacket{x0, sigma_x, p0, 0.0};
  p.mean_energy_E0 = mean_energy();
  p.gates = {TimeGate{-0.5 * gate_spacing, gate_width, profile, 1.0},
             TimeGate{0.5 * gate_spacing, gate_width, profile, 1.0}};
  return p.normalized();
}

double TwoGateConfig::predicted_spacing() const {
  return 2.0 * kPi * constants.hbar * flight_s() /
         (constants.mass * constants.c * constants.c * gate_spacing);
}

namespace {

// A large drift usually means a user-supplied observation grid cuts the packet.
void note_drift(TwoGateRun& run) {
  if (run.norm_drift > 1e-6) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", run.norm_drift);
    run.warnings.push_back(std::string("NormWarning: norm drift ") + buf +
                           " exceeds 1e-6; the observation grid may truncate the packet");
  }
}

}  // namespace

bool gates_overlap(const TwoGateConfig& config) {
  const double limit =
      config.profile == GateProfile::gaussian ? 6.0 * config.gate_width : config.gate_width;
  return config.gate_spacing < limit;
}

TwoGateRun run_two_gate(Theory theory, const TwoGateConfig& config) {
  config.validate();
  std::vector<std::string> warnings;
  if (gates_overlap(config)) {
    warnings.push_back("OverlapWarning: gate spacing " + std::to_string(config.gate_spacing) +
                       " is below the non-overlap limit for width " +
                       std::to_string(config.gate_width));
  }
  if (theory == Theory::schrodinger_control) {
    TwoGateRun run = run_control(config);
    run.warnings = std::move(warnings);
    note_drift(run);
    return run;
  }

  const ModelConstants& k = config.constants;
  const SpacetimePacket packet = config.packet();
  const double s = config.flight_s();
  PropagationOptions o;
  o.engine = config.engine;
  o.workers = config.workers;
  o.policy = config.policy;
  o.observation = config.observation;
  o.source = config.source;
  auto propagate = [&](const SpacetimePacket& p, const PropagationOptions& opts) {
    return theory == Theory::floquet ? propagate_floquet(p, s, k, opts)
                                     : propagate_stueckelberg(p, s, k, opts);
  };
  PropagationResult full = propagate(packet, o);

  // Single-gate fields on the same grids; the interference term is formed
  // explicitly so that it carries no cancellation error.
  o.observation = full.field.grid;
  o.source = full.resolution.source;
  const Field2D& grid_field = full.field;
  const double L = config.x0 + config.flight_distance;
  const std::size_t ix = grid_field.grid.x.nearest(L);
  std::vector<std::vector<cplx>> rows;
  for (std::size_t q = 0; q < packet.gates.size(); ++q) {
    const Field2D f = propagate(packet.single_gate(q), o).field;
    std::vector<cplx> row(f.grid.t.n);
    for (std::size_t m = 0; m < f.grid.t.n; ++m) row[m] = f.at(ix, m);
    rows.push_back(std::move(row));
  }
  const std::size_t nt = grid_field.grid.t.n;
  std::vector<double> incoherent(nt, 0.0), intensity(nt, 0.0);
  for (std::size_t m = 0; m < nt; ++m) {
    double inc = 0.0, cross = 0.0;
    for (std::size_t a = 0; a < rows.size(); ++a) {
      inc += std::norm(rows[a][m]);
      for (std::size_t b = a + 1; b < rows.size(); ++b) {
        cross += 2.0 * std::real(rows[a][m] * std::conj(rows[b][m]));
      }
    }
    incoherent[m] = inc;
    intensity[m] = std::max(0.0, inc + cross);
  }

  TwoGateRun run;
  run.s_star = s;
  run.norm_drift = full.norm_drift;
  run.warnings = std::move(warnings);
  run.observation = grid_field.grid;
  run.resolution = full.resolution;
  run.trace.times = axis_points(grid_field.grid.t);
  run.trace.intensity = std::move(intensity);
  run.trace.incoherent = std::move(incoherent);
  run.trace.detector_x = grid_field.grid.x.at(ix);
  run.trace.theory = theory;
  run.trace.predicted_spacing = config.predicted_spacing();
  run.field = std::move(full.field);
  note_drift(run);
  return run;
}

std::pair<double, double> central_window(const IntensityTrace& trace) {
  trace.validate();
  const auto& env = trace.incoherent ? *trace.incoherent : trace.intensity;
  const auto& t = trace.times;
  if (t.size() < 2) return {t.front(), t.front()};
  const double m0 = trapezoid_moment(t, env, 0.0, 0);
  if (!(m0 > 0.0)) return {t.front(), t.back()};
  const double mean = trapezoid_moment(t, env, 0.0, 1) / m0;
  const double var = trapezoid_moment(t, env, mean, 2) / m0;
  const double half = kWindowSigmas * std::sqrt(std::max(var, 0.0));
  return {mean - half, mean + half};
}

double measure_visibility(const IntensityTrace& trace) {
  const auto [first, last] = window_indices(trace);
  if (first >= last) return 0.0;
  const auto& I = trace.intensity;
  if (trace.incoherent) {
    const auto& ref = *trace.incoherent;
    double num = 0.0, den = 0.0;
    for (std::size_t i = first; i < last; ++i) {
      num = std::max(num, std::abs(I[i] - ref[i]));
      den = std::max(den, ref[i]);
    }
    return den > 0.0 ? std::min(1.0, num / den) : 0.0;
  }
  const auto [mn, mx] = std::minmax_element(I.begin() + static_cast<std::ptrdiff_t>(first),
                                            I.begin() + static_cast<std::ptrdiff_t>(last));
  return *mx + *mn > 0.0 ? (*mx - *mn) / (*mx + *mn) : 0.0;
}

FringeReport extract_fringes(const IntensityTrace& trace, double threshold_fraction) {
  trace.validate();
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw DomainError("threshold_fraction must lie in (0, 1)");
  }
  FringeReport r;
  std::tie(r.window_min, r.window_max) = central_window(trace);
  const auto [first, last] = window_indices(trace);
  const auto& I = trace.intensity;
  const auto& t = trace.times;
  const std::size_t n = I.size();

  double peak = 0.0, floor_ref = 0.0, mn = std::numeric_limits<double>::infinity();
  for (std::size_t i = first; i < last; ++i) {
    peak = std::max(peak, I[i]);
    mn = std::min(mn, I[i]);
    if (trace.incoherent) floor_ref = std::max(floor_ref, (*trace.incoherent)[i]);
  }
  r.visibility = measure_visibility(trace);
  r.modulation_depth = (first < last && peak + mn > 0.0) ? (peak - mn) / (peak + mn) : 0.0;
  r.spacing_T_predicted = trace.predicted_spacing;

  const double threshold = threshold_fraction * peak;
  for (std::size_t i = std::max<std::size_t>(first, 1); i < last && i + 1 < n; ++i) {
    if (!(I[i] > I[i - 1]) || !(I[i] > threshold)) continue;
    std::size_t j = i + 1;
    while (j < n && I[j] == I[i]) ++j;  // plateau: keep the leftmost sample
    if (j == n || !(I[j] < I[i])) continue;
    if (trace.incoherent && !(I[i] - (*trace.incoherent)[i] > kConstructiveFloor * floor_ref)) {
      continue;
    }
    const double y0 = I[i - 1], y1 = I[i], y2 = I[i + 1];
    const double curv = y0 - 2.0 * y1 + y2;
    double delta = curv < 0.0 ? 0.5 * (y0 - y2) / curv : 0.0;
    delta = std::clamp(delta, -0.5, 0.5);
    const double step = delta >= 0.0 ? t[i + 1] - t[i] : t[i] - t[i - 1];
    r.peak_times.push_back(t[i] + delta * step);
    r.peak_intensities.push_back(y1 - 0.25 * (y0 - y2) * delta);
  }
  if (r.peak_times.size() < 2) {
    throw NoFringes("found " + std::to_string(r.peak_times.size()) +
                    " fringe peak(s) in the central window, need at least 2");
  }
  std::vector<double> gaps;
  for (std::size_t q = 1; q < r.peak_times.size(); ++q) {
    gaps.push_back(r.peak_times[q] - r.peak_times[q - 1]);
  }
  std::sort(gaps.begin(), gaps.end());
  const std::size_t h = gaps.size() / 2;
  r.spacing_T = gaps.size() % 2 ? gaps[h] : 0.5 * (gaps[h - 1] + gaps[h]);
  if (r.spacing_T_predicted) {
    r.relative_error = std::abs(r.spacing_T - *r.spacing_T_predicted) / *r.spacing_T_predicted;
  }
  return r;
}

std::string_view to_string(ScanParameter p) {
  return p == ScanParameter::gate_spacing ? "gate_spacing" : "flight_distance";
}

ScanParameter scan_parameter_from_string(std::string_view s) {
  if (s == "gate_spacing" || s == "epsilon") return ScanParameter::gate_spacing;
  if (s == "flight_distance" || s == "L") return ScanParameter::flight_distance;
  throw ConfigError("unknown scan parameter '" + std::string(s) +
                    "' (expected gate_spacing or flight_distance)");
}

double ScanRow::epsilon_T() const {
  return fringes ? gate_spacing * fringes->spacing_T : std::numeric_limits<double>::quiet_NaN();
}

std::vector<ScanRow> parameter_scan(Theory theory, const TwoGateConfig& base,
                                    ScanParameter parameter, const std::vector<double>& values,
                                    double threshold_fraction) {
  if (values.empty()) throw DomainError("scan: no values");
  std::vector<ScanRow> rows(values.size());
  parallel_for(values.size(), base.workers, [&](std::size_t q) {
    ScanRow& row = rows[q];
    TwoGateConfig cfg = base;
    cfg.workers = 1;
    // Grids are re-derived per point unless they were pinned explicitly.
    if (parameter == ScanParameter::gate_spacing) {
      cfg.gate_spacing = values[q];
    } else {
      cfg.flight_distance = values[q];
    }
    row.value = values[q];
    row.gate_spacing = cfg.gate_spacing;
    row.flight_distance = cfg.flight_distance;
    try {
      row.predicted_spacing = cfg.predicted_spacing();
      const TwoGateRun run = run_two_gate(theory, cfg);
      row.norm_drift = run.norm_drift;
      row.warnings = run.warnings;
      row.visibility = measure_visibility(run.trace);
      row.fringes = extract_fringes(run.trace, threshold_fraction);
    } catch (const Error& e) {
      row.error = e.error_class();
      row.error_name = e.class_name();
      row.error_message = e.what();
    }
  });
  return rows;
}

std::vector<ScanRow> visibility_scan(Theory theory, const TwoGateConfig& base,
                                     const std::vector<double>& epsilon_values,
                                     double threshold_fraction) {
  if (epsilon_values.size() < 2) throw DomainError("visibility_scan needs at least 2 values");
  return parameter_scan(theory, base, ScanParameter::gate_spacing, epsilon_values,
                        threshold_fraction);
}

}  // namespace timeslit
