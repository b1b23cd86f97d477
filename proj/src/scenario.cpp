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

#include "timeslit/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <vector>

#include "timeslit/errors.hpp"

namespace timeslit {

namespace {

std::string join(const std::string& prefix, std::string_view key) {
  return prefix.empty() ? std::string(key) : prefix + "." + std::string(key);
}

// View of one JSON object with a fixed key set.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path, std::initializer_list<std::string_view> keys)
      : j_(j), path_(std::move(path)), keys_(keys) {
    if (!j_.is_object()) fail(path_.empty() ? "scenario" : path_, "must be an object");
    for (const auto& [key, value] : j_.items()) {
      if (std::find(keys_.begin(), keys_.end(), key) != keys_.end()) continue;
      std::string_view best;
      std::size_t best_d = std::string::npos;
      for (auto k : keys_) {
        const std::size_t d = edit_distance(key, k);
        if (d < best_d) {
          best_d = d;
          best = k;
        }
      }
      std::string msg = join(path_, key) + ": unknown key";
      if (!best.empty()) msg += " (did you mean \"" + std::string(best) + "\"?)";
      throw ConfigError(msg);
    }
  }

  bool has(std::string_view key) const {
    return j_.contains(key) && !j_.at(std::string(key)).is_null();
  }

  const json& at(std::string_view key) const { return j_.at(std::string(key)); }
  std::string field(std::string_view key) const { return join(path_, key); }

  double number(std::string_view key, double fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number()) fail(field(key), "must be a number");
    return v.get<double>();
  }

  std::optional<double> optional_number(std::string_view key) const {
    if (!has(key)) return std::nullopt;
    return number(key, 0.0);
  }

  double required_number(std::string_view key) const {
    if (!has(key)) fail(field(key), "is required");
    return number(key, 0.0);
  }

  long long integer(std::string_view key, long long fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_number_integer()) fail(field(key), "must be an integer");
    return v.get<long long>();
  }

  std::string string(std::string_view key, const std::string& fallback) const {
    if (!has(key)) return fallback;
    const json& v = at(key);
    if (!v.is_string()) fail(field(key), "must be a string");
    return v.get<std::string>();
  }

  [[noreturn]] static void fail(const std::string& field, const std::string& what) {
    throw ConfigError(field + ": " + what);
  }

 private:
  const json& j_;
  std::string path_;
  std::vector<std::string_view> keys_;
};

template <class F>
auto enum_field(const std::string& field, const std::string& value, F parse) {
  try {
    return parse(value);
  } catch (const Error&) {
    throw ConfigError(field + ": invalid value \"" + value + "\"");
  }
}

GateProfile profile_from_string(std::string_view s) {
  if (s == "gaussian") return GateProfile::gaussian;
  if (s == "rectangular") return GateProfile::rectangular;
  throw DomainError("unknown profile");
}

std::string_view to_string(GateProfile p) {
  return p == GateProfile::gaussian ? "gaussian" : "rectangular";
}

std::optional<Grid2D> parse_grid(const ObjectReader& parent, std::string_view key) {
  if (!parent.has(key)) return std::nullopt;
  ObjectReader r(parent.at(key), parent.field(key), {"x_min", "x_max", "n_x", "t_min", "t_max", "n_t"});
  auto count = [&](std::string_view k) {
    const long long n = r.integer(k, -1);
    if (n < 0) ObjectReader::fail(r.field(k), "is required and must be >= 0");
    return static_cast<std::size_t>(n);
  };
  return Grid2D{Axis{r.required_number("x_min"), r.required_number("x_max"), count("n_x")},
                Axis{r.required_number("t_min"), r.required_number("t_max"), count("n_t")}};
}

json grid_json(const Grid2D& g) {
  return json{{"x_min", g.x.min}, {"x_max", g.x.max}, {"n_x", g.x.n},
              {"t_min", g.t.min}, {"t_max", g.t.max}, {"n_t", g.t.n}};
}

void require(bool ok, const char* field, const char* what) {
  if (!ok) throw ConfigError(std::string(field) + ": " + what);
}

bool pos(double v) { return std::isfinite(v) && v > 0.0; }

void check_grid(const std::optional<Grid2D>& g, const char* name) {
  if (!g) return;
  try {
    g->validate();
  } catch (const Error& e) {
    throw ConfigError(std::string(name) + ": " + e.what());
  }
}

}  // namespace

std::size_t edit_distance(std::string_view a, std::string_view b) {
  std::vector<std::size_t> prev(b.size() + 1), cur(b.size() + 1);
  for (std::size_t j = 0; j <= b.size(); ++j) prev[j] = j;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = i;
    for (std::size_t j = 1; j <= b.size(); ++j) {
      const std::size_t sub = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
      cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, sub});
    }
    std::swap(prev, cur);
  }
  return prev[b.size()];
}

void Scenario::validate() const {
  require(workers >= 1, "workers", "must be >= 1");
  require(pos(setup.wavelength_nm), "setup.wavelength_nm", "must be > 0");
  require(setup.photon_count >= 1, "setup.photon_count", "must be >= 1");
  require(pos(setup.flight_distance_m), "setup.flight_distance_m", "must be > 0");
  require(std::isfinite(setup.gate_spacing_s) && setup.gate_spacing_s >= 0.0,
          "setup.gate_spacing_s", "must be >= 0");
  require(pos(setup.gate_width_s), "setup.gate_width_s", "must be > 0");
  require(pos(units.length_scale), "units.length_scale", "must be > 0");
  require(pos(units.time_scale), "units.time_scale", "must be > 0");
  require(pos(units.mass_scale), "units.mass_scale", "must be > 0");
  require(pos(packet.hbar), "packet.hbar", "must be > 0");
  require(pos(packet.mass), "packet.mass", "must be > 0");
  require(pos(packet.c), "packet.c", "must be > 0");
  require(pos(packet.p0), "packet.p0", "must be > 0");
  require(pos(packet.sigma_x), "packet.sigma_x", "must be > 0");
  require(std::isfinite(packet.x0), "packet.x0", "must be finite");
  require(pos(packet.flight_distance), "packet.flight_distance", "must be > 0");
  require(pos(packet.gate_width), "packet.gate_width", "must be > 0");
  require(pos(packet.gate_spacing), "packet.gate_spacing", "must be > 0");
  require(!packet.energy || pos(*packet.energy), "packet.energy", "must be > 0");
  require(!packet.s_override || pos(*packet.s_override), "packet.s_override", "must be > 0");
  const auto& p = grid.policy;
  require(pos(p.samples_per_period), "grid.policy.samples_per_period", "must be > 0");
  require(pos(p.samples_per_width), "grid.policy.samples_per_width", "must be > 0");
  require(pos(p.samples_per_sigma), "grid.policy.samples_per_sigma", "must be > 0");
  require(pos(p.samples_per_fringe), "grid.policy.samples_per_fringe", "must be > 0");
  require(pos(p.range_sigmas), "grid.policy.range_sigmas", "must be > 0");
  require(p.max_points >= 3, "grid.policy.max_points", "must be >= 3");
  check_grid(grid.observation, "grid.observation");
  check_grid(grid.source, "grid.source");
  require(analysis.threshold_fraction > 0.0 && analysis.threshold_fraction < 1.0,
          "analysis.threshold_fraction", "must lie in (0, 1)");
  require(pos(analysis.compare_cp_ev), "analysis.compare_cp_ev", "must be > 0");
  require(!output.dir.empty(), "output.dir", "must not be empty");
  require(!output.prefix.empty() && output.prefix.find('/') == std::string::npos,
          "output.prefix", "must be a non-empty file name prefix");
}

TwoGateConfig Scenario::two_gate_config() const {
  TwoGateConfig c;
  c.constants = ModelConstants{packet.hbar, packet.mass, packet.c};
  c.p0 = packet.p0;
  c.sigma_x = packet.sigma_x;
  c.x0 = packet.x0;
  c.flight_distance = packet.flight_distance;
  c.gate_width = packet.gate_width;
  c.gate_spacing = packet.gate_spacing;
  c.profile = packet.profile;
  c.energy = packet.energy;
  c.s_override = packet.s_override;
  c.engine = engine;
  c.workers = workers;
  c.policy = grid.policy;
  c.observation = grid.observation;
  c.source = grid.source;
  return c;
}

Scenario scenario_from_json(const json& j) {
  const ObjectReader root(j, "", {"theory", "engine", "workers", "setup", "units", "packet", "grid",
                                  "analysis", "output"});
  Scenario s;
  if (!root.has("theory")) ObjectReader::fail("theory", "is required");
  s.theory = enum_field("theory", root.string("theory", ""), theory_from_string);
  s.engine = enum_field("engine", root.string("engine", "closed_form"), engine_from_string);
  const long long workers = root.integer("workers", 1);
  if (workers < 1 || workers > 1024) ObjectReader::fail("workers", "must lie in [1, 1024]");
  s.workers = static_cast<unsigned>(workers);

  if (!root.has("setup")) ObjectReader::fail("setup", "is required");
  {
    const ObjectReader r(root.at("setup"), "setup",
                         {"wavelength_nm", "photon_count", "flight_distance_m", "gate_spacing_s",
                          "gate_width_s", "momentum_model"});
    s.setup.wavelength_nm = r.required_number("wavelength_nm");
    if (!r.has("photon_count")) ObjectReader::fail(r.field("photon_count"), "is required");
    const long long n = r.integer("photon_count", 0);
    if (n < 1 || n > 1000000000) ObjectReader::fail(r.field("photon_count"), "must be >= 1");
    s.setup.photon_count = static_cast<int>(n);
    s.setup.flight_distance_m = r.required_number("flight_distance_m");
    s.setup.gate_spacing_s = r.number("gate_spacing_s", s.setup.gate_spacing_s);
    s.setup.gate_width_s = r.number("gate_width_s", s.setup.gate_width_s);
    s.setup.momentum_model =
        enum_field(r.field("momentum_model"), r.string("momentum_model", "nonrelativistic"),
                   momentum_model_from_string);
  }
  if (root.has("units")) {
    const ObjectReader r(root.at("units"), "units", {"length_scale", "time_scale", "mass_scale"});
    s.units.length_scale = r.number("length_scale", s.units.length_scale);
    s.units.time_scale = r.number("time_scale", s.units.time_scale);
    s.units.mass_scale = r.number("mass_scale", s.units.mass_scale);
  }
  if (root.has("packet")) {
    const ObjectReader r(root.at("packet"), "packet",
                         {"hbar", "mass", "c", "p0", "sigma_x", "x0", "flight_distance",
                          "gate_width", "gate_spacing", "profile", "energy", "s_override"});
    auto& p = s.packet;
    p.hbar = r.number("hbar", p.hbar);
    p.mass = r.number("mass", p.mass);
    p.c = r.number("c", p.c);
    p.p0 = r.number("p0", p.p0);
    p.sigma_x = r.number("sigma_x", p.sigma_x);
    p.x0 = r.number("x0", p.x0);
    p.flight_distance = r.number("flight_distance", p.flight_distance);
    p.gate_width = r.number("gate_width", p.gate_width);
    p.gate_spacing = r.number("gate_spacing", p.gate_spacing);
    p.profile = enum_field(r.field("profile"), r.string("profile", "gaussian"), profile_from_string);
    p.energy = r.optional_number("energy");
    p.s_override = r.optional_number("s_override");
  }
  if (root.has("grid")) {
    const ObjectReader r(root.at("grid"), "grid", {"policy", "observation", "source"});
    if (r.has("policy")) {
      const ObjectReader q(r.at("policy"), "grid.policy",
                           {"samples_per_period", "samples_per_width", "samples_per_sigma",
                            "samples_per_fringe", "range_sigmas", "max_points"});
      auto& p = s.grid.policy;
      p.samples_per_period = q.number("samples_per_period", p.samples_per_period);
      p.samples_per_width = q.number("samples_per_width", p.samples_per_width);
      p.samples_per_sigma = q.number("samples_per_sigma", p.samples_per_sigma);
      p.samples_per_fringe = q.number("samples_per_fringe", p.samples_per_fringe);
      p.range_sigmas = q.number("range_sigmas", p.range_sigmas);
      const long long mp = q.integer("max_points", static_cast<long long>(p.max_points));
      if (mp < 3) ObjectReader::fail(q.field("max_points"), "must be >= 3");
      p.max_points = static_cast<std::size_t>(mp);
    }
    s.grid.observation = parse_grid(r, "observation");
    s.grid.source = parse_grid(r, "source");
  }
  if (root.has("analysis")) {
    const ObjectReader r(root.at("analysis"), "analysis", {"threshold_fraction", "compare_cp_ev"});
    s.analysis.threshold_fraction = r.number("threshold_fraction", s.analysis.threshold_fraction);
    s.analysis.compare_cp_ev = r.number("compare_cp_ev", s.analysis.compare_cp_ev);
  }
  if (root.has("output")) {
    const ObjectReader r(root.at("output"), "output", {"dir", "prefix"});
    s.output.dir = r.string("dir", s.output.dir);
    s.output.prefix = r.string("prefix", s.output.prefix);
  }
  s.validate();
  return s;
}

Scenario parse_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read scenario file " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  json j;
  try {
    j = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON: " + e.what());
  }
  return scenario_from_json(j);
}

json to_json(const Scenario& s) {
  json j;
  j["theory"] = std::string(to_string(s.theory));
  j["engine"] = std::string(to_string(s.engine));
  j["workers"] = s.workers;
  j["setup"] = {{"wavelength_nm", s.setup.wavelength_nm},
                {"photon_count", s.setup.photon_count},
                {"flight_distance_m", s.setup.flight_distance_m},
                {"gate_spacing_s", s.setup.gate_spacing_s},
                {"gate_width_s", s.setup.gate_width_s},
                {"momentum_model", std::string(to_string(s.setup.momentum_model))}};
  j["units"] = {{"length_scale", s.units.length_scale},
                {"time_scale", s.units.time_scale},
                {"mass_scale", s.units.mass_scale}};
  const auto& p = s.packet;
  j["packet"] = {{"hbar", p.hbar},
                 {"mass", p.mass},
                 {"c", p.c},
                 {"p0", p.p0},
                 {"sigma_x", p.sigma_x},
                 {"x0", p.x0},
                 {"flight_distance", p.flight_distance},
                 {"gate_width", p.gate_width},
                 {"gate_spacing", p.gate_spacing},
                 {"profile", std::string(to_string(p.profile))}};
  if (p.energy) j["packet"]["energy"] = *p.energy;
  if (p.s_override) j["packet"]["s_override"] = *p.s_override;
  const auto& q = s.grid.policy;
  j["grid"]["policy"] = {{"samples_per_period", q.samples_per_period},
                         {"samples_per_width", q.samples_per_width},
                         {"samples_per_sigma", q.samples_per_sigma},
                         {"samples_per_fringe", q.samples_per_fringe},
                         {"range_sigmas", q.range_sigmas},
                         {"max_points", q.max_points}};
  if (s.grid.observation) j["grid"]["observation"] = grid_json(*s.grid.observation);
  if (s.grid.source) j["grid"]["source"] = grid_json(*s.grid.source);
  j["analysis"] = {{"threshold_fraction", s.analysis.threshold_fraction},
                   {"compare_cp_ev", s.analysis.compare_cp_ev}};
  j["output"] = {{"dir", s.output.dir}, {"prefix", s.output.prefix}};
  return j;
}

std::string canonical_text(const Scenario& s) { return to_json(s).dump(); }

std::string scenario_hash(const Scenario& s) { return fnv1a_hex(canonical_text(s)); }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace timeslit
