// SPDX-License-Identifier: Apache-2.0
//
// uavris: trajectory and reflection planning for active-RIS UAV SWIPT links
// Copyright (C) 2026 The uavris authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------
#include "uavris/energy.hpp"

#include <cmath>

namespace uavris::energy {

double propulsion_power(const Scenario& sc, double v) {
  const Propulsion& p = sc.propulsion;
  const double v2 = v * v;
  const double v0_2 = p.mean_rotor_velocity * p.mean_rotor_velocity;
  const double blade = p.blade_profile_power * (1.0 + 3.0 * v2 / (p.tip_speed * p.tip_speed));
  // sqrt(1 + x^2) - x loses precision for large x; use the conjugate form.
  const double x = v2 / (2.0 * v0_2);
  const double induced = p.induced_power * std::sqrt(1.0 / (std::sqrt(1.0 + x * x) + x));
  const double parasite = 0.5 * p.fuselage_drag_ratio * p.air_density * p.rotor_solidity * p.rotor_disc_area * v2 * v;
  return blade + induced + parasite;
}

double cruise_energy_per_metre(const Scenario& sc) { return propulsion_power(sc, sc.cruise_speed) / sc.cruise_speed; }

double path_length(const FlightPlan& plan) {
  double len = 0.0;
  for (std::size_t i = 1; i < plan.positions.size(); ++i) len += std::abs(plan.positions[i] - plan.positions[i - 1]);
  return len;
}

EnergyBreakdown uav_total_energy(const Scenario& sc, const FlightPlan& plan) {
  EnergyBreakdown e;
  e.flight = cruise_energy_per_metre(sc) * path_length(plan);
  const double hover_power = propulsion_power(sc, 0.0);
  for (double t : plan.hover_times) {
    e.hover += hover_power * t;
    e.radiated += sc.uav_radiated_power() * t;
  }
  e.total = e.flight + e.hover + e.radiated;
  return e;
}

EnergyBreakdown system_energy(const Scenario& sc, const FlightPlan& plan, RisMode mode) {
  EnergyBreakdown e = uav_total_energy(sc, plan);
  if (mode == RisMode::Active) {
    e.ris = sc.num_hover() * sc.ris_energy_budget;
    e.total += e.ris;
  }
  return e;
}

}  // namespace uavris::energy
