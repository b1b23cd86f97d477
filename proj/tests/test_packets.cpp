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

#include <doctest.h>

#include <cmath>
#include <numbers>

#include "timeslit/errors.hpp"
#include "timeslit/packets.hpp"

using namespace timeslit;

namespace {

SpacetimePacket one_gate(double center_t = 0.0, double width = 0.5) {
  SpacetimePacket p;
  p.spatial = GaussianSpatialPacket{1.0, 1.5, 0.7, 0.3};
  p.gates = {TimeGate{center_t, width}};
  p.mean_energy_E0 = 1.245;
  return p;
}

Grid2D grid_for(double xc, double sx, double t0, double t1, std::size_t nx = 301,
                std::size_t nt = 401) {
  return Grid2D{centered_axis(xc, 11.0 * sx, nx), Axis{t0, t1, nt}};
}

// Simpson quadrature of a 1D function, used as an independent check.
template <class F>
double integrate(F f, double a, double b, std::size_t n = 20001) {
  const Axis ax{a, b, n};
  const auto w = simpson_weights(ax);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += w[i] * f(ax.at(i));
  return s;
}

}  // namespace

TEST_CASE("axis helpers") {
  const Axis a{-1.0, 1.0, 5};
  CHECK(a.step() == 0.5);
  CHECK(a.at(4) == 1.0);
  CHECK(a.nearest(0.24) == 2);
  CHECK(a.nearest(0.26) == 3);
  CHECK(a.nearest(-9.0) == 0);
  CHECK(a.nearest(9.0) == 4);
  CHECK(a.translated(2.0).min == 1.0);
  CHECK_THROWS_AS(Axis({0.0, 1.0, 1}).validate("x"), DomainError);
  CHECK_THROWS_AS(Axis({1.0, 1.0, 5}).validate("x"), DomainError);
}

TEST_CASE("simpson weights integrate cubics exactly for odd and even counts") {
  for (std::size_t n : {3u, 4u, 5u, 8u, 11u, 64u}) {
    const Axis a{-0.7, 1.9, n};
    const auto w = simpson_weights(a);
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = a.at(i);
      s += w[i] * (1.0 - 2.0 * x + 3.0 * x * x - 4.0 * x * x * x);
    }
    auto F = [](double x) { return x - x * x + x * x * x - x * x * x * x; };
    CHECK(s == doctest::Approx(F(1.9) - F(-0.7)).epsilon(1e-12));
  }
}

TEST_CASE("spatial packet is unit normalised with the sigma convention") {
  const GaussianSpatialPacket g{0.5, 1.3, 2.0, 0.0};
  const double n = integrate([&](double x) { return std::norm(g.evaluate(x)); }, -20.0, 21.0);
  CHECK(n == doctest::Approx(1.0).epsilon(1e-9));
  const double var =
      integrate([&](double x) { return (x - 0.5) * (x - 0.5) * std::norm(g.evaluate(x)); }, -20.0, 21.0);
  CHECK(std::sqrt(var) == doctest::Approx(1.3).epsilon(1e-9));
  CHECK_THROWS_AS((GaussianSpatialPacket{0.0, 0.0, 0.0, 0.0}.validate()), DomainError);
}

TEST_CASE("gate envelopes and overlaps") {
  const TimeGate g{0.0, 0.5};
  CHECK(g.envelope(0.0) == 1.0);
  CHECK(g.envelope(0.5) == doctest::Approx(std::exp(-0.5)));
  const TimeGate r{0.0, 2.0, GateProfile::rectangular};
  CHECK(r.envelope(0.99) == 1.0);
  CHECK(r.envelope(1.01) == 0.0);
  CHECK_THROWS_AS((TimeGate{0.0, -1.0}.validate()), DomainError);

  const TimeGate pairs[][2] = {
      {{0.0, 0.5}, {0.3, 0.8}},
      {{0.0, 2.0, GateProfile::rectangular}, {0.7, 1.0, GateProfile::rectangular}},
      {{0.0, 0.6}, {0.4, 1.5, GateProfile::rectangular}},
      {{0.2, 1.5, GateProfile::rectangular}, {-0.1, 0.4}},
  };
  for (const auto& p : pairs) {
    const double q = integrate([&](double t) { return p[0].envelope(t) * p[1].envelope(t); }, -8.0,
                               8.0, 400001);
    CHECK(gate_overlap(p[0], p[1]) == doctest::Approx(q).epsilon(1e-4));
  }
  // Intensity standard deviation of a Gaussian gate is width / sqrt(2).
  const double n = integrate([&](double t) { return g.envelope(t) * g.envelope(t); }, -8.0, 8.0);
  const double v = integrate([&](double t) { return t * t * g.envelope(t) * g.envelope(t); }, -8.0, 8.0);
  CHECK(std::sqrt(v / n) == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("evaluate_packet") {
  const SpacetimePacket p = one_gate(2.0);
  const Grid2D grid = grid_for(1.0, 1.5, 0.0, 4.0);
  const Field2D f = sample_packet(p, grid);
  double peak = 0.0;
  for (const auto& v : f.values) peak = std::max(peak, std::abs(v));
  CHECK(std::abs(evaluate_packet(p, 1.0, 2.0)) == doctest::Approx(peak).epsilon(1e-12));
  CHECK(std::abs(evaluate_packet(p, 1.0, 2.0)) >= peak);

  SpacetimePacket twin = p;
  twin.gates.push_back(p.gates[0]);
  for (double x : {-3.0, 0.2, 4.4}) {
    for (double t : {1.0, 2.1, 3.3}) {
      CHECK(evaluate_packet(twin, x, t) == 2.0 * evaluate_packet(p, x, t));
    }
  }

  // Second gate ten widths away changes the first centre by exp(-50).
  SpacetimePacket far = p;
  far.gates.push_back(TimeGate{2.0 + 10.0 * 0.5, 0.5});
  const double a = std::abs(evaluate_packet(p, 1.0, 2.0));
  const double b = std::abs(evaluate_packet(far, 1.0, 2.0));
  CHECK(std::abs(b - a) / a <= std::exp(-50.0) * 1.0001);
  CHECK(std::abs(b - a) / a < 1e-9);
}

TEST_CASE("carrier convention") {
  const SpacetimePacket p = one_gate();
  const cplx a = evaluate_packet(p, 1.0, 0.0);
  const cplx b = evaluate_packet(p, 1.0, 1e-3);
  // exp(-i E0 t / hbar): the phase decreases with t at rate E0.
  CHECK(std::arg(b / a) == doctest::Approx(-p.mean_energy_E0 * 1e-3).epsilon(1e-6));
  const cplx c = evaluate_packet(p, 1.0 + 1e-3, 0.0);
  CHECK(std::arg(c / a) == doctest::Approx(0.7 * 1e-3).epsilon(1e-6));
}

TEST_CASE("norm2 examples") {
  const SpacetimePacket p = one_gate(2.0).normalized();
  const Grid2D grid = grid_for(1.0, 1.5, -2.0, 6.0);
  CHECK(p.closed_form_norm2() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(norm2(p, grid) == doctest::Approx(1.0).epsilon(1e-6));

  SpacetimePacket two = one_gate(-2.0);
  two.gates.push_back(TimeGate{2.0, 0.5});
  two = two.normalized();
  CHECK(two.single_gate(0).closed_form_norm2() == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(norm2(two, grid_for(1.0, 1.5, -6.0, 6.0, 301, 601)) == doctest::Approx(1.0).epsilon(1e-6));

  SpacetimePacket doubled = p;
  doubled.gates[0].amplitude *= 2.0;
  CHECK(norm2(doubled, grid) == doctest::Approx(4.0 * norm2(p, grid)).epsilon(1e-12));

  CHECK_THROWS_AS(norm2(p, grid_for(1.0, 1.5, -2.0, 6.0, 301, 40)), ResolutionError);
  CHECK_THROWS_AS(norm2(p, grid_for(1.0, 1.5, -2.0, 6.0, 20, 401)), ResolutionError);
  try {
    norm2(p, grid_for(1.0, 1.5, -2.0, 6.0, 301, 40));
  } catch (const ResolutionError& e) {
    CHECK(std::string(e.what()).find("n_t >=") != std::string::npos);
  }
}

TEST_CASE("rectangular gate norm") {
  SpacetimePacket p = one_gate();
  p.gates = {TimeGate{0.0, 2.0, GateProfile::rectangular}};
  p = p.normalized();
  // An exactly aligned window: the edges fall on grid points.
  const Grid2D grid{centered_axis(1.0, 16.5, 301), Axis{-1.0, 1.0, 201}};
  CHECK(norm2(p, grid) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("expectations") {
  const SpacetimePacket p = one_gate(1.5).normalized();
  const Grid2D grid = grid_for(1.0, 1.5, -2.0, 5.0);
  const Moments m = expectations(p, grid);
  CHECK(std::abs(m.mean_x - 1.0) < grid.x.step());
  CHECK(std::abs(m.mean_t - 1.5) < grid.t.step());
  CHECK(m.sigma_t == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-2));
  CHECK(m.sigma_t == doctest::Approx(0.5 / std::sqrt(2.0)).epsilon(1e-3));
  CHECK(m.sigma_x == doctest::Approx(1.5).epsilon(1e-3));
  CHECK(m.mean_p == doctest::Approx(0.7).epsilon(1e-9));
  CHECK(m.mean_E == doctest::Approx(1.245).epsilon(1e-9));

  SpacetimePacket two = one_gate(-1.0);
  two.gates.push_back(TimeGate{3.0, 0.5});
  const Moments m2 = expectations(two, grid_for(1.0, 1.5, -5.0, 7.0, 301, 601));
  CHECK(std::abs(m2.mean_t - 1.0) < 0.02);

  Field2D zero(grid);
  CHECK_THROWS_AS(expectations(zero), DomainError);
}

TEST_CASE("packet validation") {
  SpacetimePacket p = one_gate();
  p.gates.clear();
  CHECK_THROWS_AS(p.validate(), DomainError);
  SpacetimePacket q = one_gate();
  q.gates[0].amplitude = 0.0;
  CHECK_THROWS_AS(q.normalized(), DomainError);
}
