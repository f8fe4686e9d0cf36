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
#pragma once

#include "uavris/scenario.hpp"

namespace uavris::energy {

struct EnergyBreakdown {
  double flight = 0.0;    // propulsion while cruising [J]
  double hover = 0.0;     // propulsion while hovering [J]
  double radiated = 0.0;  // UAV transmit energy while hovering [J]
  double ris = 0.0;       // RIS budget charged by the active-mode accounting [J]
  double total = 0.0;
};

/// Rotary-wing propulsion power at speed v (v = 0 gives the hover power).
double propulsion_power(const Scenario& sc, double speed);

/// Propulsion energy per metre of cruise, P_p(v) / v.
double cruise_energy_per_metre(const Scenario& sc);

/// Total flight path length over all L segments.
double path_length(const FlightPlan& plan);

/// UAV-side energy E_V: cruise over all segments plus hover and radiated energy.
EnergyBreakdown uav_total_energy(const Scenario& sc, const FlightPlan& plan);

/// System accounting: passive charges E_V only, active adds (L-1) * E_RIS^act.
EnergyBreakdown system_energy(const Scenario& sc, const FlightPlan& plan, RisMode mode);
inline EnergyBreakdown system_energy(const Scenario& sc, const FlightPlan& plan) {
  return system_energy(sc, plan, sc.mode);
}

}  // namespace uavris::energy
