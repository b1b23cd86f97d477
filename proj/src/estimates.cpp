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

#include "timeslit/estimates.hpp"

#include <cmath>
#include <numbers>

#include "timeslit/errors.hpp"

namespace timeslit {

std::string_view to_string(EstimateFormula f) {
  return f == EstimateFormula::diffraction ? "diffraction" : "crude_nonrelativistic";
}

double stueckelberg_product(double distance_m, double cp_ev, const PhysicalConstants& k) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw DomainError("stueckelberg_product: L must be > 0");
  }
  if (!(cp_ev > 0.0) || !std::isfinite(cp_ev)) {
    throw DomainError("stueckelberg_product: cp must be > 0");
  }
  const double p = cp_ev * k.ev_to_joule / k.c;
  return 2.0 * std::numbers::pi * k.hbar * distance_m / (p * k.c * k.c);
}

double crude_nonrelativistic_product(double distance_m, double kinetic_ev,
                                     const PhysicalConstants& k) {
  if (!(distance_m > 0.0) || !std::isfinite(distance_m)) {
    throw DomainError("crude_nonrelativistic_product: L must be > 0");
  }
  if (!(kinetic_ev > 0.0) || !std::isfinite(kinetic_ev)) {
    throw DomainError("crude_nonrelativistic_product: E_kin must be > 0");
  }
  const double e = kinetic_ev * k.ev_to_joule;
  return 0.5 * std::numbers::pi * k.hbar * std::sqrt(0.5 * k.electron_mass) * distance_m *
         std::pow(e, -1.5);
}

EstimateReport stueckelberg_report(const PhysicalSetup& setup, double cp_ev,
                                   const PhysicalConstants& k) {
  EstimateReport r;
  r.formula = EstimateFormula::diffraction;
  r.inputs_echo = setup;
  r.epsilon_T_product = stueckelberg_product(setup.flight_distance_m, cp_ev, k);
  r.equal_spacing_T = std::sqrt(r.epsilon_T_product);
  return r;
}

EstimateComparison compare_estimates(const PhysicalSetup& setup, const PhysicalConstants& k) {
  setup.validate();
  EstimateComparison c;
  c.photon_energy_ev = photon_energy_ev(setup.wavelength_nm, k);
  c.kinetic_ev = kinetic_from_photons_ev(setup.photon_count, setup.wavelength_nm, k);
  c.cp_ev = momentum_from_kinetic_ev(c.kinetic_ev, setup.momentum_model, k);
  c.diffraction = stueckelberg_report(setup, c.cp_ev, k);
  c.crude.formula = EstimateFormula::crude_nonrelativistic;
  c.crude.inputs_echo = setup;
  c.crude.epsilon_T_product = crude_nonrelativistic_product(setup.flight_distance_m, c.kinetic_ev, k);
  c.crude.equal_spacing_T = std::sqrt(c.crude.epsilon_T_product);
  c.ratio = c.crude.epsilon_T_product / c.diffraction.epsilon_T_product;
  return c;
}

}  // namespace timeslit
