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

// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "timeslit/commands.hpp"
#include "timeslit/estimates.hpp"
#include "timeslit/experiments.hpp"
#include "timeslit/gaussian.hpp"
#include "timeslit/propagation.hpp"
#include "timeslit/scenario.hpp"
#include "timeslit/units.hpp"

using namespace timeslit;
namespace fs = std::filesystem;

constexpr double kPi = std::numbers::pi;

namespace {

struct Check {
  bool ok = true;
  std::vector<std::string> notes;

  void require(bool cond, const std::string& what) {
    if (!cond) ok = false;
    notes.push_back(std::string(cond ? "" : "!") + what);
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

int failures = 0;

void criterion(int n, const std::string& title, const std::function<void(Check&)>& body) {
  Check c;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(c);
  } catch (const std::exception& e) {
    c.require(false, std::string("exception: ") + e.what());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!c.ok) ++failures;
  std::printf("[%s] criterion %d: %s (%.2f s)\n", c.ok ? "PASS" : "FAIL", n, title.c_str(), secs);
  for (const auto& note : c.notes) std::printf("    %s\n", note.c_str());
  std::fflush(stdout);
}

double within(double value, double target) { return std::abs(value / target - 1.0); }

PhysicalSetup lab_setup() {
  PhysicalSetup s;
  s.wavelength_nm = 850.0;
  s.photon_count = 300;
  s.flight_distance_m = 0.01;
  return s;
}

double rel_l2(const std::vector<cplx>& a, const std::vector<cplx>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += std::norm(a[i] - b[i]);
    den += std::norm(b[i]);
  }
  return std::sqrt(num / den);
}

double rel_l2(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num += (a[i] - b[i]) * (a[i] - b[i]);
    den += b[i] * b[i];
  }
  return std::sqrt(num / den);
}

std::vector<double> time_marginal(const Field2D& f) {
  const auto w = simpson_weights(f.grid.x);
  std::vector<double> out(f.grid.t.n, 0.0);
  for (std::size_t m = 0; m < f.grid.t.n; ++m) {
    for (std::size_t i = 0; i < f.grid.x.n; ++i) out[m] += w[i] * std::norm(f.at(i, m));
  }
  return out;
}

std::vector<cplx> sample_state(const GaussianState& g, const Grid2D& grid) {
  std::vector<cplx> v;
  v.reserve(grid.size());
  for (std::size_t m = 0; m < grid.t.n; ++m) {
    for (std::size_t i = 0; i < grid.x.n; ++i) v.push_back(g(grid.x.at(i), grid.t.at(m)));
  }
  return v;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

int main() {
  const TwoGateConfig desk;

  criterion(1, "diffraction product at lab scale", [](Check& c) {
    const PhysicalSetup setup = lab_setup();
    const double cp = compare_estimates(setup).cp_ev;
    const EstimateReport r = stueckelberg_report(setup, cp);
    c.require(within(r.epsilon_T_product, 6.9e-30) <= 0.10,
              "epsilon*T = " + fmt("%.4e", r.epsilon_T_product) + " s^2 vs 6.9e-30 (10%): off by " +
                  fmt("%.2f%%", 100 * within(r.epsilon_T_product, 6.9e-30)));
    c.require(within(r.equal_spacing_T, 2.6e-15) <= 0.10,
              "T = " + fmt("%.4e", r.equal_spacing_T) + " s vs 2.6e-15 (10%): off by " +
                  fmt("%.2f%%", 100 * within(r.equal_spacing_T, 2.6e-15)));
    c.require(cp > 2.0e4 && cp < 2.2e4, "cp = " + fmt("%.1f", cp) + " eV");
  });

  criterion(2, "crude non-relativistic estimate", [](Check& c) {
    const EstimateComparison cmp = compare_estimates(lab_setup());
    const double v = cmp.crude.epsilon_T_product;
    const double factor = std::max(v / 9e-28, 9e-28 / v);
    c.require(factor <= 3.0, "crude epsilon*T = " + fmt("%.4e", v) + " s^2 vs 9e-28 (factor 3): factor " +
                                 fmt("%.3f", factor));
    c.require(std::abs(v / 1.9e-27 - 1.0) < 0.01,
              "direct arithmetic value " + fmt("%.4e", v) + " s^2, T = " +
                  fmt("%.3e", cmp.crude.equal_spacing_T) + " s");
    c.require(true, "crude / relativistic ratio " + fmt("%.2f", cmp.ratio));
  });

  criterion(3, "theory discriminator at desk scale", [&](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const TwoGateRun st = run_two_gate(Theory::stueckelberg, desk);
    const TwoGateRun fl = run_two_gate(Theory::floquet, desk);
    const TwoGateRun ctl = run_two_gate(Theory::schrodinger_control, desk);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const double vs = measure_visibility(st.trace), vf = measure_visibility(fl.trace),
                 vc = measure_visibility(ctl.trace);
    c.require(!gates_overlap(desk), "gate spacing " + fmt("%g", desk.gate_spacing) + " >= 6 widths of " +
                                        fmt("%g", desk.gate_width));
    c.require(vs >= 0.5, "stueckelberg V = " + fmt("%.6f", vs) + " (>= 0.5)");
    c.require(vf <= 1e-10, "floquet V = " + fmt("%.3e", vf) + " (<= 1e-10)");
    c.require(vc == 0.0, "control V = " + fmt("%g", vc) + " (== 0)");
    for (const TwoGateRun* r : {&st, &fl, &ctl}) {
      c.require(r->observation.x.n <= 2048 && r->observation.t.n <= 2048 &&
                    r->resolution.source.x.n <= 2048 && r->resolution.source.t.n <= 2048,
                "grid obs " + std::to_string(r->observation.x.n) + "x" +
                    std::to_string(r->observation.t.n) + ", source " +
                    std::to_string(r->resolution.source.x.n) + "x" +
                    std::to_string(r->resolution.source.t.n) + " (<= 2048x2048)");
    }
    c.require(secs <= 120.0, "runtime " + fmt("%.2f", secs) + " s (<= 120 s)");
  });

  criterion(4, "fringe spacing law from simulation", [&](Check& c) {
    const auto t0 = std::chrono::steady_clock::now();
    const double eps0 = desk.gate_spacing, L0 = desk.flight_distance;
    const auto eps_rows = visibility_scan(Theory::stueckelberg, desk, {eps0, 2 * eps0, 4 * eps0});
    const auto L_rows = parameter_scan(Theory::stueckelberg, desk, ScanParameter::flight_distance,
                                       {L0, 2 * L0, 4 * L0});
    std::vector<double> products;
    auto check_rows = [&](const std::vector<ScanRow>& rows, const char* name, bool collect) {
      for (const auto& row : rows) {
        const double law = 2.0 * kPi * row.flight_distance / desk.p0;
        const double eT = row.epsilon_T();
        c.require(std::isfinite(eT) && within(eT, law) <= 0.10,
                  std::string(name) + " = " + fmt("%g", row.value) + ": epsilon*T = " + fmt("%.3f", eT) +
                      " vs 2 pi L/p0 = " + fmt("%.3f", law) + " (10%): off by " +
                      fmt("%.2f%%", 100 * within(eT, law)));
        if (collect) products.push_back(eT);
      }
    };
    check_rows(eps_rows, "epsilon", true);
    check_rows(L_rows, "L", false);
    const auto [lo, hi] = std::minmax_element(products.begin(), products.end());
    const double spread = (*hi - *lo) / *lo;
    c.require(spread <= 0.05, "epsilon*T spread over the epsilon scan " + fmt("%.3f%%", 100 * spread) + " (5%)");
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    c.require(secs <= 600.0, "runtime " + fmt("%.2f", secs) + " s (<= 600 s)");
  });

  criterion(5, "numerical integrity", [&](Check& c) {
    const SpacetimePacket packet = desk.packet();
    const double s = desk.flight_s();

    // Norm drift and engine agreement at default resolution.
    const auto sc = propagate_schrodinger(packet.spatial, s);
    SpatialOptions so;
    so.engine = Engine::quadrature;
    so.observation = sc.field.x;
    const auto sq = propagate_schrodinger(packet.spatial, s, {}, so);
    const auto fc = propagate_floquet(packet, s);
    const auto stc = propagate_stueckelberg(packet, s);
    PropagationOptions po;
    po.engine = Engine::quadrature;
    po.observation = fc.field.grid;
    const auto fq = propagate_floquet(packet, s, {}, po);
    po.observation = stc.field.grid;
    const auto stq = propagate_stueckelberg(packet, s, {}, po);
    const double drift = std::max({sc.norm_drift, sq.norm_drift, fc.norm_drift, fq.norm_drift,
                                   stc.norm_drift, stq.norm_drift});
    c.require(drift < 1e-6, "max norm drift " + fmt("%.2e", drift) + " (< 1e-6)");
    const double agree = std::max({rel_l2(sq.field.values, sc.field.values),
                                   rel_l2(fq.field.values, fc.field.values),
                                   rel_l2(stq.field.values, stc.field.values)});
    c.require(agree < 1e-6, "engines differ by " + fmt("%.2e", agree) + " relative L2 (< 1e-6)");

    // Semigroup: quadrature to s1, then a quadrature step of s2 onto a small
    // grid, against the closed form at s1 + s2.
    SpacetimePacket small;
    small.spatial = GaussianSpatialPacket{0.0, 1.0, 0.5, 0.0};
    small.gates = {TimeGate{0.0, 1.0}};
    small.mean_energy_E0 = 1.1;
    small = small.normalized();
    const double s1 = 0.5, s2 = 0.7;
    PropagationOptions first;
    first.engine = Engine::quadrature;
    first.observation = Grid2D{centered_axis(0.25, 11.0, 701), centered_axis(0.55, 11.0, 701)};
    const Field2D mid = propagate_stueckelberg(small, s1, {}, first).field;
    const Grid2D target{centered_axis(0.6, 2.0, 9), centered_axis(1.32, 2.0, 9)};
    const Field2D composed = stueckelberg_step(mid, s2, target);
    const double sg = rel_l2(composed.values,
                             sample_state(stueckelberg_evolved(gaussian_state(small), s1 + s2), target));
    const Field2D fmid = propagate_floquet(small, s1, {}, first).field;
    const Field2D fcomp = floquet_step(fmid, s2, target.x);
    const double fg = rel_l2(fcomp.values,
                             sample_state(floquet_evolved(gaussian_state(small), s1 + s2), fcomp.grid));
    c.require(std::max(sg, fg) < 1e-6, "semigroup K(s2) K(s1) vs K(s1+s2): stueckelberg " +
                                           fmt("%.2e", sg) + ", floquet " + fmt("%.2e", fg) + " (< 1e-6)");

    // Floquet temporal marginal.
    const Grid2D shifted{fq.resolution.source.x, fc.field.grid.t.translated(-s)};
    const auto before = time_marginal(sample_packet(packet, shifted));
    const double marg = std::max(rel_l2(time_marginal(fc.field), before),
                                 rel_l2(time_marginal(fq.field), before));
    c.require(marg < 1e-9, "floquet temporal marginal deviation " + fmt("%.2e", marg) + " (< 1e-9)");

    // Hamilton slopes on one gate of the desk packet.
    const SpacetimePacket one = packet.single_gate(0).normalized();
    const std::vector<double> ss = {0.5 * s, 0.75 * s, s, 1.25 * s};
    for (Theory th : {Theory::stueckelberg, Theory::floquet}) {
      const auto h = hamilton_diagnostics(one, th, ss);
      const double ex = within(h.slope_x, h.predicted_slope_x), et = within(h.slope_t, h.predicted_slope_t);
      c.require(std::max(ex, et) < 1e-3, std::string(to_string(th)) + " slopes dx/ds " +
                                             fmt("%.6f", h.slope_x) + ", dt/ds " + fmt("%.6f", h.slope_t) +
                                             " vs " + fmt("%.6f", h.predicted_slope_x) + ", " +
                                             fmt("%.6f", h.predicted_slope_t) + " (1e-3)");
    }
  });

  criterion(6, "property suite", [&](Check& c) {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> U(0.0, 1.0);

    double worst_period = 0.0;
    for (int i = 0; i < 200; ++i) {
      const double T0 = 0.5 + 9.5 * U(rng), step = T0 / (8.0 + 50.0 * U(rng)), ph = kPi * U(rng);
      IntensityTrace tr;
      for (double t = -10 * T0; t <= 10 * T0; t += step) {
        tr.times.push_back(t);
        tr.intensity.push_back(std::pow(std::cos(kPi * t / T0 + ph), 2));
      }
      worst_period = std::max(worst_period, std::abs(extract_fringes(tr).spacing_T - T0) / step);
    }
    c.require(worst_period <= 1.0, "planted period recovered within " + fmt("%.3f", worst_period) +
                                       " grid steps (<= 1)");

    const TwoGateRun st = run_two_gate(Theory::stueckelberg, desk);
    const FringeReport base = extract_fringes(st.trace);
    double worst_scale = 0.0;
    for (int i = 0; i < 50; ++i) {
      const double k = std::exp(-18.0 + 36.0 * U(rng));
      IntensityTrace tr = st.trace;
      for (double& v : tr.intensity) v *= k;
      for (double& v : *tr.incoherent) v *= k;
      const FringeReport r = extract_fringes(tr);
      if (r.peak_times.size() != base.peak_times.size()) {
        worst_scale = 1.0;
        continue;
      }
      for (std::size_t j = 0; j < r.peak_times.size(); ++j) {
        worst_scale = std::max(worst_scale, std::abs(r.peak_times[j] - base.peak_times[j]) /
                                                std::max(1.0, std::abs(base.peak_times[j])));
      }
      worst_scale = std::max(worst_scale, std::abs(r.visibility - base.visibility));
    }
    c.require(worst_scale <= 1e-12, "rescaling changes peaks/visibility by " + fmt("%.2e", worst_scale) +
                                        " (<= 1e-12)");

    bool round_trip = true;
    for (int i = 0; i < 50; ++i) {
      json j = {{"theory", i % 2 ? "floquet" : "stueckelberg"},
                {"workers", 1 + i % 5},
                {"setup", {{"wavelength_nm", 300 + 1000 * U(rng)}, {"photon_count", 1 + i},
                           {"flight_distance_m", 1e-3 + U(rng)}}},
                {"packet", {{"p0", 0.05 + 0.5 * U(rng)}, {"gate_width", 0.1 + U(rng)},
                            {"gate_spacing", 1 + 10 * U(rng)}}}};
      const Scenario s = scenario_from_json(j);
      const Scenario back = scenario_from_json(json::parse(to_json(s).dump()));
      round_trip = round_trip && back == s && scenario_hash(back) == scenario_hash(s);
    }
    c.require(round_trip, "50 random scenarios round-trip with equal hashes");

    const fs::path dir = fs::temp_directory_path() / "timeslit_acceptance";
    fs::remove_all(dir);
    std::vector<std::string> csv;
    for (unsigned w : {1u, 2u, 4u}) {
      Scenario s = scenario_from_json(json::parse(R"({"theory": "stueckelberg", "engine": "quadrature",
        "setup": {"wavelength_nm": 850, "photon_count": 300, "flight_distance_m": 0.01}})"));
      s.workers = w;
      s.output.dir = dir.string();
      s.output.prefix = "w" + std::to_string(w);
      const RunReport r = cmd_simulate(s);
      if (r.exit_code() != 0) throw std::runtime_error("simulate failed: " + r.error_message);
      csv.push_back(slurp(dir / (s.output.prefix + "_trace.csv")) +
                    slurp(dir / (s.output.prefix + "_field.csv")));
    }
    fs::remove_all(dir);
    c.require(csv[0] == csv[1] && csv[0] == csv[2],
              "trace and field CSV bit-identical for 1, 2 and 4 workers");
  });

  std::printf("%s: %d criteria failed\n", failures ? "FAIL" : "PASS", failures);
  return failures ? 1 : 0;
}
