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

#include "timeslit/units.hpp"

#include <cmath>
#include <string>

#include "timeslit/errors.hpp"

namespace timeslit {

namespace {

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

}  // namespace

std::vector<std::string> PhysicalConstants::consistency_errors() const {
  std::vector<std::string> out;
  const double rest = electron_mass * c * c / ev_to_joule;
  if (!close_rel(rest, electron_rest_energy, 1e-6)) {
    out.push_back("electron_rest_energy != m c^2 / e (got " + std::to_string(rest) + " eV)");
  }
  const double hc_ev_nm = hbar * c * 2.0 * std::numbers::pi / (ev_to_joule * 1e-9);
  if (!close_rel(hc_ev_nm, hc, 1e-6)) {
    out.push_back("hc != 2 pi hbar c (got " + std::to_string(hc_ev_nm) + " eV nm)");
  }
  return out;
}

void UnitScales::validate() const {
  if (!positive_finite(length_scale)) throw DomainError("length_scale must be finite and > 0");
  if (!positive_finite(time_scale)) throw DomainError("time_scale must be finite and > 0");
  if (!positive_finite(mass_scale)) throw DomainError("mass_scale must be finite and > 0");
}

UnitScales electron_natural_scales(const PhysicalConstants& k) {
  return UnitScales{
      .length_scale = k.hbar / (k.electron_mass * k.c),
      .time_scale = k.hbar / (k.electron_mass * k.c * k.c),
      .mass_scale = k.electron_mass,
  };
}

std::string_view to_string(MomentumModel m) {
  return m == MomentumModel::relativistic ? "relativistic" : "nonrelativistic";
}

MomentumModel momentum_model_from_string(std::string_view s) {
  if (s == "nonrelativistic") return MomentumModel::nonrelativistic;
  if (s == "relativistic") return MomentumModel::relativistic;
  throw DomainError("unknown momentum model '" + std::string(s) + "'");
}

void PhysicalSetup::validate() const {
  if (!positive_finite(wavelength_nm)) throw DomainError("wavelength must be > 0");
  if (photon_count < 1) throw DomainError("photon_count must be >= 1");
  if (!positive_finite(flight_distance_m)) throw DomainError("flight_distance must be > 0");
  if (!std::isfinite(gate_spacing_s) || gate_spacing_s < 0.0) {
    throw DomainError("gate_spacing must be >= 0");
  }
  if (!positive_finite(gate_width_s)) throw DomainError("gate_width must be > 0");
}

InternalSetup to_internal(const PhysicalSetup& setup, const UnitScales& scales) {
  scales.validate();
  return InternalSetup{
      .wavelength = setup.wavelength_nm * 1e-9 / scales.length_scale,
      .photon_count = setup.photon_count,
      .flight_distance = setup.flight_distance_m / scales.length_scale,
      .gate_spacing = setup.gate_spacing_s / scales.time_scale,
      .gate_width = setup.gate_width_s / scales.time_scale,
      .momentum_model = setup.momentum_model,
  };
}

PhysicalSetup from_internal(const InternalSetup& setup, const UnitScales& scales) {
  scales.validate();
  return PhysicalSetup{
      .wavelength_nm = setup.wavelength * scales.length_scale * 1e9,
      .photon_count = setup.photon_count,
      .flight_distance_m = setup.flight_distance * scales.length_scale,
      .gate_spacing_s = setup.gate_spacing * scales.time_scale,
      .gate_width_s = setup.gate_width * scales.time_scale,
      .momentum_model = setup.momentum_model,
  };
}

double photon_energy_ev(double wavelength_nm, const PhysicalConstants& k) {
  if (!(wavelength_nm > 0.0) || !std::isfinite(wavelength_nm)) {
    throw DomainError("photon_energy: wavelength must be > 0");
  }
  return k.hc / wavelength_nm;
}

double kinetic_from_photons_ev(int n, double wavelength_nm, const PhysicalConstants& k) {
  if (n < 1) throw DomainError("kinetic_from_photons: photon count must be >= 1");
  return n * photon_energy_ev(wavelength_nm, k);
}

double momentum_from_kinetic_ev(double kinetic_ev, MomentumModel model,
                                const PhysicalConstants& k) {
  if (!(kinetic_ev >= 0.0) || !std::isfinite(kinetic_ev)) {
    throw DomainError("momentum_from_kinetic: kinetic energy must be >= 0");
  }
  const double mc2 = k.electron_rest_energy;
  if (model == MomentumModel::nonrelativistic) return std::sqrt(2.0 * mc2 * kinetic_ev);
  // (mc^2 + E)^2 - (mc^2)^2 without the cancellation
  return std::sqrt(kinetic_ev * (2.0 * mc2 + kinetic_ev));
}

}  // namespace timeslit
