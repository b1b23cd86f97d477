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

// Closed-form fringe-spacing estimates for the laboratory setup.

#pragma once

#include <string_view>

#include "timeslit/units.hpp"

namespace timeslit {

enum class EstimateFormula { diffraction, crude_nonrelativistic };

std::string_view to_string(EstimateFormula f);

struct EstimateReport {
  double epsilon_T_product = 0.0;  // s^2
  double equal_spacing_T = 0.0;    // s, sqrt of the product
  PhysicalSetup inputs_echo;
  EstimateFormula formula = EstimateFormula::diffraction;
};

/// epsilon T = 2 pi hbar L / (p c^2) with p = cp / c, in s^2.
double stueckelberg_product(double distance_m, double cp_ev, const PhysicalConstants& k = kCodata);

/// epsilon T = (pi hbar / 2) sqrt(m / 2) L E^(-3/2), E in J; result in s^2.
double crude_nonrelativistic_product(double distance_m, double kinetic_ev,
                                     const PhysicalConstants& k = kCodata);

struct EstimateComparison {
  double photon_energy_ev = 0.0;
  double kinetic_ev = 0.0;
  double cp_ev = 0.0;
  EstimateReport crude;
  EstimateReport diffraction;
  double ratio = 0.0;  // crude / diffraction
};

/// Runs wavelength -> photon energy -> kinetic energy -> cp -> both products.
EstimateComparison compare_estimates(const PhysicalSetup& setup,
                                     const PhysicalConstants& k = kCodata);

/// Report for an externally supplied cp (e.g. a quoted value).
EstimateReport stueckelberg_report(const PhysicalSetup& setup, double cp_ev,
                                   const PhysicalConstants& k = kCodata);

}  // namespace timeslit
