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

// Physical constants, laboratory/internal unit conversion and the photon
// absorption chain that fixes the emitted electron's energy and momentum.

#pragma once

#include <numbers>
#include <string>
#include <string_view>
#include <vector>

namespace timeslit {

/// CODATA 2018 values. Energies in eV, everything else SI.
struct PhysicalConstants {
  double hbar = 1.054571817e-34;              // J s
  double c = 299792458.0;                     // m/s
  double electron_mass = 9.1093837015e-31;    // kg
  double electron_rest_energy = 510998.95;    // eV
  double ev_to_joule = 1.602176634e-19;       // J/eV
  double hc = 1239.84198433;                  // eV nm

  /// Messages for every violated cross-consistency relation (relative 1e-6).
  std::vector<std::string> consistency_errors() const;
};

inline constexpr PhysicalConstants kCodata{};

/// Constants of the internal (nondimensional) model. The mass doubles as the
/// Schroedinger/Floquet particle mass m and the Stueckelberg target mass M.
struct ModelConstants {
  double hbar = 1.0;
  double mass = 1.0;
  double c = 1.0;

  bool operator==(const ModelConstants&) const = default;
};

struct UnitScales {
  double length_scale = 1.0;  // m per internal length unit
  double time_scale = 1.0;    // s per internal time unit
  double mass_scale = 1.0;    // kg per internal mass unit

  /// Throws DomainError unless all three scales are finite and positive.
  void validate() const;
  bool operator==(const UnitScales&) const = default;
};

/// Scales in which hbar = m_e = c = 1 (reduced Compton length and time).
UnitScales electron_natural_scales(const PhysicalConstants& k = kCodata);

enum class MomentumModel { nonrelativistic, relativistic };

std::string_view to_string(MomentumModel m);
MomentumModel momentum_model_from_string(std::string_view s);

/// Laboratory description of the two-gate emission experiment.
struct PhysicalSetup {
  double wavelength_nm = 850.0;
  int photon_count = 300;
  double flight_distance_m = 0.01;
  double gate_spacing_s = 2.6e-15;
  double gate_width_s = 1.0e-15;
  MomentumModel momentum_model = MomentumModel::nonrelativistic;

  void validate() const;
  bool operator==(const PhysicalSetup&) const = default;
};

/// PhysicalSetup expressed in internal units.
struct InternalSetup {
  double wavelength = 0.0;
  int photon_count = 1;
  double flight_distance = 0.0;
  double gate_spacing = 0.0;
  double gate_width = 0.0;
  MomentumModel momentum_model = MomentumModel::nonrelativistic;
};

InternalSetup to_internal(const PhysicalSetup& setup, const UnitScales& scales);
PhysicalSetup from_internal(const InternalSetup& setup, const UnitScales& scales);

/// hc / wavelength, in eV.
double photon_energy_ev(double wavelength_nm, const PhysicalConstants& k = kCodata);

/// Kinetic energy after absorbing n photons of the given wavelength, in eV.
double kinetic_from_photons_ev(int n, double wavelength_nm,
                               const PhysicalConstants& k = kCodata);

/// Momentum times c, in eV, for a given kinetic energy.
///   nonrelativistic: cp = sqrt(2 mc^2 E)
///   relativistic:    cp = sqrt((mc^2 + E)^2 - (mc^2)^2)
double momentum_from_kinetic_ev(double kinetic_ev, MomentumModel model,
                                const PhysicalConstants& k = kCodata);

}  // namespace timeslit
