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

#include <stdexcept>
#include <string>
#include <vector>

#include "uavris/energy.hpp"
#include "uavris/sca_phase.hpp"
#include "uavris/sca_trajectory.hpp"
#include "uavris/scenario.hpp"

namespace uavris::optimizer {

/// A stage failed in a way the alternating loop cannot recover from.
class OptimizerError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Initialization {
  FlightPlan plan;
  ReflectionPlan phi;
  int doublings = 0;  // how many times t was doubled to meet the harvest requirement
};

/// Uniform hover points, t_l = 2 s and the co-phased reflection. t is doubled (and, in active
/// mode, phi scaled by 1/sqrt(2) to stay inside the RIS budget) until every user harvests its
/// requirement, at most 10 times. A nonzero seed jitters hover points and phases.
/// Throws OptimizerError naming the binding constraint when the audit still fails.
Initialization initialize(const Scenario& sc);

struct Repair {
  FlightPlan plan;
  ReflectionPlan phi;
  double alpha = 1.0;  // hover-time scale factor applied
  bool feasible = false;
};

/// Smallest alpha >= 1 such that t -> alpha t (and phi -> phi / sqrt(alpha) in active mode,
/// which keeps the RIS draw t ||phi||^2 unchanged) meets every harvest requirement.
Repair repair_feasibility(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi);

struct Schedule {
  FlightPlan plan;
  ReflectionPlan phi;
  bool changed = false;
};

/// Minimum-energy hover times and per-hover reflection amplitudes for fixed hover points and
/// reflection directions. With u_l = s_l t_l (s_l the squared amplitude scale of phi_l) the
/// harvest of user k is sum_l C u_l + X sqrt(t_l u_l) + B t_l and the RIS budget bounds u_l, so
/// the program is an SOCP; a negative X uses the tangent bound of sqrt(t u). Passive mode keeps
/// s_l = 1, which leaves a linear program in t. The result is kept only when it passes the exact
/// audit and lowers the energy.
Schedule rescale_schedule(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi);

struct OuterTraceRow {
  int x = 0;
  double objective = 0.0;  // system energy of the trajectory-stage plan (the iterate's objective)
  double harvest_kept = 0.0;  // min_k h_k of the previous phi on the new plan
  double harvest_new = 0.0;   // min_k h_k after the phase stage
  bool phi_accepted = false;
  double repair_alpha = 1.0;
  bool rescaled = false;
  double move_radius = 0.0;  // hover-point move limit of the trajectory stage, infinite when off
  double energy = 0.0;  // system energy after repair and rescaling
  bool incumbent = false;
};

struct TrajectoryEvent {
  int x = 0;
  trajectory::TrajectoryTraceRow row;
};

struct PhaseEvent {
  int x = 0;
  phase::PhaseTraceRow row;
};

struct RunResult {
  FlightPlan plan;
  ReflectionPlan phi;
  energy::EnergyBreakdown energy;  // system accounting of (plan, phi)
  std::vector<OuterTraceRow> outer;
  std::vector<TrajectoryEvent> trajectory_trace;
  std::vector<PhaseEvent> phase_trace;
  double initial_energy = 0.0;
  int initial_doublings = 0;
  /// Largest relative increase of an outer objective over the best objective before it
  /// (the initial energy included).
  double fluctuation = 0.0;
  /// The same measure over the repaired energies.
  double repaired_fluctuation = 0.0;
  std::string termination;
  bool failed = false;  // a stage failed; plan and phi are still the best feasible point found
};

/// Alternating trajectory / phase SCA with acceptance of the new phi only when it raises the
/// smallest harvest ratio, feasibility repair after every pass and best-iterate bookkeeping.
/// A pass that does not lower the energy is discarded; the next pass restarts from the best
/// point with the hover-point move limit halved.
RunResult run_algorithm1(const Scenario& sc);

/// One JSON object per line: stage "trajectory", "phase" and "outer" records in run order.
std::string trace_jsonl(const RunResult& result);

/// Mean horizontal distance of the hover points to the RIS.
double mean_hover_distance_to_ris(const Scenario& sc, const FlightPlan& plan);

}  // namespace uavris::optimizer
