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

#include "timeslit/kernels.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "timeslit/errors.hpp"
#include "timeslit/gaussian.hpp"

namespace timeslit {

namespace {

constexpr double kPi = std::numbers::pi;

double squared(std::span<const double> dx) {
  double s = 0.0;
  for (double v : dx) s += v * v;
  return s;
}

void require_nonzero(double tau, const char* who) {
  if (tau == 0.0) {
    throw SingularKernel(std::string(who) +
                         ": evolution parameter is zero (identity is handled by the caller)");
  }
}

// Relative L2 distance between two fields sampled on the same axis.
struct AxisOverlaps {
  double out2 = 0.0;  // <X, X>
  double in2 = 0.0;   // <f, f>
  cplx cross;         // <f, X>
};

AxisOverlaps overlaps(const std::vector<cplx>& out, const std::vector<cplx>& in,
                      const std::vector<double>& w) {
  AxisOverlaps o;
  for (std::size_t i = 0; i < w.size(); ++i) {
    o.out2 += w[i] * std::norm(out[i]);
    o.in2 += w[i] * std::norm(in[i]);
    o.cross += w[i] * std::conj(in[i]) * out[i];
  }
  return o;
}

// Quadrature of the Fresnel factor applied to a unit Gaussian of intensity
// standard deviation sigma, observed on `obs`.
std::vector<cplx> fresnel_quadrature(double sigma, double tau, double mass, double hbar,
                                     const Axis& obs) {
  const double reach = 11.0 * sigma;
  const double max_disp = reach + std::max(std::abs(obs.min), std::abs(obs.max));
  const double max_rate = std::abs(mass) * max_disp / (hbar * std::abs(tau));
  const double step = std::min(2.0 * kPi / (8.0 * max_rate), sigma / 4.0);
  auto n = static_cast<std::size_t>(std::ceil(2.0 * reach / step)) + 1;
  if (n % 2 == 0) ++n;
  const Axis src{-reach, reach, n};
  const auto w = simpson_weights(src);
  GaussianSpatialPacket test{0.0, sigma, 0.0, 0.0};
  std::vector<cplx> f(n);
  for (std::size_t j = 0; j < n; ++j) f[j] = w[j] * test.evaluate(src.at(j), {hbar, 1.0, 1.0});
  std::vector<cplx> out(obs.n);
  const cplx pre = axis_prefactor(tau, mass, hbar);
  const double phase_scale = mass / (2.0 * hbar * tau);
  for (std::size_t i = 0; i < obs.n; ++i) {
    const double u = obs.at(i);
    // exp(i a d_j^2) on a uniform grid by recurrence: consecutive ratios
    // change by the constant factor exp(2 i a h^2). Re-seeded periodically.
    const double h = src.step();
    const cplx q = std::polar(1.0, 2.0 * phase_scale * h * h);
    cplx acc = 0.0, e, r;
    for (std::size_t j = 0; j < n; ++j) {
      if (j % 512 == 0) {
        const double d = u - src.at(j);
        e = std::polar(1.0, phase_scale * d * d);
        r = std::polar(1.0, phase_scale * (h * h - 2.0 * d * h));
      }
      acc += f[j] * e;
      e *= r;
      r *= q;
    }
    out[i] = pre * acc;
  }
  return out;
}

}  // namespace

SpatialDim::SpatialDim(int d) : d_(d) {
  if (d < 1 || d > 3) throw DomainError("spatial dimension must be 1, 2 or 3");
}

cplx axis_prefactor(double tau, double axis_mass, double hbar) {
  require_nonzero(tau, "axis_prefactor");
  return std::sqrt(axis_mass / (cplx(0.0, 2.0 * kPi * hbar * tau)));
}

cplx axis_kernel(double u, double tau, double axis_mass, double hbar) {
  return axis_prefactor(tau, axis_mass, hbar) *
         std::polar(1.0, axis_mass * u * u / (2.0 * hbar * tau));
}

cplx schrodinger_kernel(std::span<const double> dx, double t, const ModelConstants& k) {
  const SpatialDim d(static_cast<int>(dx.size()));
  require_nonzero(t, "schrodinger_kernel");
  const cplx one = axis_prefactor(t, k.mass, k.hbar);
  cplx pre = one;
  for (int i = 1; i < d.value(); ++i) pre *= one;
  return pre * std::polar(1.0, k.mass * squared(dx) / (2.0 * k.hbar * t));
}

cplx schrodinger_kernel(double dx, double t, const ModelConstants& k) {
  return schrodinger_kernel(std::span<const double>(&dx, 1), t, k);
}

FloquetKernel floquet_kernel(std::span<const double> dx, double s, const ModelConstants& k) {
  require_nonzero(s, "floquet_kernel");
  return FloquetKernel{s, schrodinger_kernel(dx, s, k)};
}

FloquetKernel floquet_kernel(double dx, double s, const ModelConstants& k) {
  return floquet_kernel(std::span<const double>(&dx, 1), s, k);
}

cplx stueckelberg_prefactor(SpatialDim d, double s, const ModelConstants& k) {
  require_nonzero(s, "stueckelberg_kernel");
  const cplx space = axis_prefactor(s, k.mass, k.hbar);
  cplx pre = axis_prefactor(s, -k.mass * k.c * k.c, k.hbar);
  for (int i = 0; i < d.value(); ++i) pre *= space;
  return pre;
}

cplx stueckelberg_kernel(std::span<const double> dx, double dt, double s, const ModelConstants& k) {
  const SpatialDim d(static_cast<int>(dx.size()));
  const cplx pre = stueckelberg_prefactor(d, s, k);
  const double interval = squared(dx) - k.c * k.c * dt * dt;
  return pre * std::polar(1.0, k.mass * interval / (2.0 * s * k.hbar));
}

cplx stueckelberg_kernel(double dx, double dt, double s, const ModelConstants& k) {
  return stueckelberg_kernel(std::span<const double>(&dx, 1), dt, s, k);
}

KernelSample sample_kernel(KernelKind kind, double dx, double dt, double param,
                           const ModelConstants& k) {
  KernelSample out{0.0, dx, dt, param};
  switch (kind) {
    case KernelKind::schrodinger: out.value = schrodinger_kernel(dx, param, k); break;
    case KernelKind::floquet: out.value = floquet_kernel(dx, param, k).spatial_part; break;
    case KernelKind::stueckelberg: out.value = stueckelberg_kernel(dx, dt, param, k); break;
  }
  return out;
}

IdentityLimitReport kernel_identity_limit(KernelKind kind, double sigma,
                                          const std::vector<double>& s_values,
                                          const ModelConstants& k) {
  if (!(sigma > 0.0)) throw DomainError("identity limit: sigma must be > 0");
  for (double s : s_values) require_nonzero(s, "kernel_identity_limit");

  const Axis obs{-6.0 * sigma, 6.0 * sigma, 121};
  const auto w = simpson_weights(obs);
  const GaussianSpatialPacket test{0.0, sigma, 0.0, 0.0};
  const AxisGaussian closed = spatial_gaussian(test, k);
  std::vector<cplx> input(obs.n);
  for (std::size_t i = 0; i < obs.n; ++i) input[i] = closed(obs.at(i));

  // For a product f(x) f(t) mapped to X(x) T(t) the space-time distance
  // factorises into one-dimensional overlaps.
  auto deviation = [&](const std::vector<cplx>& xs, const std::vector<cplx>* ts) {
    const AxisOverlaps ox = overlaps(xs, input, w);
    if (ts == nullptr) {
      return std::sqrt(std::max(0.0, ox.out2 - 2.0 * ox.cross.real() + ox.in2) / ox.in2);
    }
    const AxisOverlaps ot = overlaps(*ts, input, w);
    const double d2 = ox.out2 * ot.out2 - 2.0 * (ox.cross * ot.cross).real() + ox.in2 * ot.in2;
    return std::sqrt(std::max(0.0, d2) / (ox.in2 * ot.in2));
  };

  IdentityLimitReport report;
  const double time_mass = -k.mass * k.c * k.c;
  for (double s : s_values) {
    const auto xs = fresnel_quadrature(sigma, s, k.mass, k.hbar, obs);
    std::vector<cplx> xs_cf(obs.n), ts_cf(obs.n);
    const AxisGaussian ex = closed.evolved(s, k.mass, k.hbar);
    const AxisGaussian et = closed.evolved(s, time_mass, k.hbar);
    for (std::size_t i = 0; i < obs.n; ++i) {
      xs_cf[i] = ex(obs.at(i));
      ts_cf[i] = et(obs.at(i));
    }
    report.s_values.push_back(s);
    if (kind == KernelKind::stueckelberg) {
      const auto ts = fresnel_quadrature(sigma, s, time_mass, k.hbar, obs);
      report.deviations.push_back(deviation(xs, &ts));
      report.predicted.push_back(deviation(xs_cf, &ts_cf));
    } else {
      report.deviations.push_back(deviation(xs, nullptr));
      report.predicted.push_back(deviation(xs_cf, nullptr));
    }
  }
  for (std::size_t i = 0; i + 1 < report.deviations.size(); ++i) {
    report.rates.push_back(std::log(report.deviations[i] / report.deviations[i + 1]) /
                           std::log(std::abs(report.s_values[i] / report.s_values[i + 1])));
  }
  return report;
}

}  // namespace timeslit
