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

#include <complex>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace uavris {

using cplx = std::complex<double>;

/// Raised when a scenario cannot be parsed or violates an invariant.
class ScenarioError : public std::runtime_error {
 public:
  enum class Kind { Parse, Validation };
  ScenarioError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  Kind kind() const noexcept { return kind_; }

 private:
  Kind kind_;
};

enum class RisMode { Active, Passive };

std::string to_string(RisMode mode);
RisMode ris_mode_from_string(const std::string& text);

/// Per-link triple, used for Rician factors and path-loss exponents.
/// `direct` is UAV->user, `uav_ris` is UAV->RIS, `ris_user` is RIS->user.
struct LinkTriple {
  double direct = 0.0;
  double uav_ris = 0.0;
  double ris_user = 0.0;
};

/// Rotary-wing propulsion constants (blade profile, induced and parasite terms).
struct Propulsion {
  double blade_profile_power = 79.8563;  // P_0 [W]
  double induced_power = 88.6279;        // P_i [W]
  double tip_speed = 120.0;              // U_tip [m/s]
  double mean_rotor_velocity = 4.03;     // v_0 [m/s]
  double fuselage_drag_ratio = 0.6;      // d_0
  double air_density = 1.225;            // rho [kg/m^3]
  double rotor_solidity = 0.05;          // s
  double rotor_disc_area = 0.503;        // A [m^2]
};

struct AlgorithmSettings {
  double tolerance = 1e-3;  // relative stopping tolerance of every SCA loop
  int max_outer = 8;        // alternating iterations
  int max_trajectory = 8;   // trajectory SCA iterations per outer pass
  int max_phase = 12;       // phase SCA iterations per outer pass
  double solver_tol = 1e-8;
  int solver_max_iter = 200;
  std::uint64_t seed = 0;  // 0 keeps the canonical initialization
};

/// Immutable problem instance. Distances in meters, powers in watts, energies in joules.
struct Scenario {
  cplx ris_position{0.0, 0.0};
  double ris_height = 10.0;
  std::vector<cplx> users;
  double uav_height = 20.0;
  cplx uav_start{-35.0, 0.0};
  cplx uav_end{35.0, 0.0};
  int num_segments = 5;

  int num_elements = 32;
  double wavelength = 1.0;
  double element_spacing = 0.5;
  LinkTriple rician{10.0, 10.0, 10.0};
  LinkTriple pathloss_exponent{2.4, 2.3, 2.3};
  double reference_gain = 1e-3;

  std::vector<double> tx_power;
  double split_ratio = 0.5;
  double noise_user = 1e-11;
  double noise_ris = 1e-11;
  std::vector<double> sinr_threshold;
  std::vector<double> energy_requirement;
  double ris_energy_budget = 20.0;
  double cruise_speed = 18.3;
  std::optional<double> radiated_power;
  Propulsion propulsion;
  AlgorithmSettings algorithm;
  RisMode mode = RisMode::Active;

  int num_users() const { return static_cast<int>(users.size()); }
  int num_hover() const { return num_segments - 1; }
  /// RIS thermal noise seen by the model; the passive baseline has none.
  double ris_noise() const { return mode == RisMode::Passive ? 0.0 : noise_ris; }
  double total_tx_power() const;
  /// P_t charged while hovering; defaults to the sum of per-user powers.
  double uav_radiated_power() const;

  /// Throws ScenarioError(Validation) naming the first violated invariant.
  void validate() const;

  Scenario with_elements(int m) const;
  Scenario with_mode(RisMode m) const;
};

/// The five-user evaluation layout: users on a 30 m semicircle, RIS at the origin.
Scenario reference_scenario();

Scenario load_scenario(const std::string& config_text);
Scenario load_scenario_file(const std::string& path);
std::string serialize_scenario(const Scenario& sc);

/// Hover positions q_{V,0..L} (endpoints included) and hover durations t_1..t_{L-1}.
struct FlightPlan {
  std::vector<cplx> positions;
  std::vector<double> hover_times;

  int num_hover() const { return static_cast<int>(hover_times.size()); }
  cplx hover(int l) const { return positions[static_cast<std::size_t>(l) + 1]; }
  void check(const Scenario& sc) const;
};

/// L-1 stacked complex reflection vectors, one per hover point.
struct ReflectionPlan {
  std::vector<std::vector<cplx>> phi;

  void check(const Scenario& sc) const;
};

struct LinkGeometry {
  double d_direct;
  double d_uav_ris;
  double d_ris_user;
  double cos_aoa;  // cos(omega_t): UAV->RIS arrival
  double cos_aod;  // cos(omega_r): RIS->user departure
};

/// Distances and array angles for user k (0-based) with the UAV hovering at q.
LinkGeometry link_distances(const Scenario& sc, cplx q, int k);

}  // namespace uavris
