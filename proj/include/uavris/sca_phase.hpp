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

#include <string>
#include <vector>

#include "uavris/channel.hpp"
#include "uavris/conic.hpp"
#include "uavris/scenario.hpp"

namespace uavris::phase {

using channel::ChannelStats;

/// Stacked reflection vector [phi_1; ...; phi_{L-1}].
Eigen::VectorXcd stack(const ReflectionPlan& plan);
ReflectionPlan unstack(const Eigen::VectorXcd& phi, int hovers, int elements);

/// Normalized charged energy h_k(phi) = phi^H A_hat phi + 2 Re{a_hat^H phi} + zeta1,
/// i.e. the harvested energy of user k over all hover points divided by E_k^req.
struct HarvestAggregate {
  Eigen::MatrixXcd A_hat;  // block diagonal, (L-1)M square
  Eigen::VectorXcd a_hat;
  double zeta1 = 0.0;
  bool required = true;  // false when E_k^req = 0 (the user imposes no harvest constraint)

  double value(const Eigen::VectorXcd& phi) const;
};

std::vector<HarvestAggregate> harvest_aggregates(const Scenario& sc, const ChannelStats& stats,
                                                 const FlightPlan& plan);

/// Direct evaluation: (1/E_req) sum_l t_l (1 - eta) p_k D_{k,l}(phi_l).
double exact_harvest_ratio(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                           const ReflectionPlan& phi, int k);

/// min over users with a positive requirement of the exact harvest ratio (0 when none).
double min_harvest_ratio(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                         const ReflectionPlan& phi);

/// SINR_{k,l} >= gamma_k rewritten as phi^H F phi + 2 Re{f^H phi} >= Gamma.
struct SinrQuadratic {
  Eigen::MatrixXcd F;
  Eigen::VectorXcd f;
  double Gamma = 0.0;
  double coefficient = 0.0;     // eta (p_k - gamma_k sum_{j != k} p_j)
  double min_eigenvalue = 0.0;  // of F
  bool satisfiable = true;      // false when coefficient <= 0

  double lhs(const Eigen::VectorXcd& phi) const;
};

SinrQuadratic sinr_quadratic(const Scenario& sc, const ChannelStats& stats, int k, int l);

/// Concave minorant of the SINR left side, tangent at phi_n:
///   2 Re{g^H phi} + constant - mu ||phi||^2,  with F + mu I PSD.
struct LinearizedSinr {
  Eigen::VectorXcd g;
  double constant = 0.0;
  double mu = 0.0;

  double value(const Eigen::VectorXcd& phi) const;
};

LinearizedSinr linearize_sinr(const SinrQuadratic& q, const Eigen::VectorXcd& phi_n);

/// Affine minorant f_k(phi) = 2 Re{b^H phi} + zeta2 of h_k, tangent at phi_n.
struct LinearizedHarvest {
  Eigen::VectorXcd b;
  double zeta2 = 0.0;

  double value(const Eigen::VectorXcd& phi) const;
};

LinearizedHarvest linearize_harvest(const HarvestAggregate& h, const Eigen::VectorXcd& phi_n);

/// Smallest hover time used in the RIS-energy cone (the cone is unbounded at t = 0).
inline constexpr double kMinHoverTime = 1e-3;

/// Per-hover squared-norm cap on phi_l from the RIS energy budget (active mode only).
double ris_norm_cap(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan, int l);

struct PhaseProgram {
  conic::ConicProgram program;
  int epsilon = -1;
  int first_z = -1;  // z_l occupies [first_z + 2 M l, first_z + 2 M (l+1)), real parts first
  std::vector<int> slacks;  // elastic SINR slacks (empty unless elastic)
  int hovers = 0;
  int elements = 0;
};

/// Convex subproblem at expansion point phi_n: maximize eps subject to the linearized harvest
/// and SINR constraints and the RIS energy (active) or unit-modulus (passive) cones.
/// With `elastic`, every SINR row gets a penalized nonnegative slack.
PhaseProgram linearize_and_build(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                 const Eigen::VectorXcd& phi_n, bool elastic = false);

ReflectionPlan extract_reflection(const PhaseProgram& p, const Eigen::VectorXd& x);

/// Co-phased start: phi_l aligned with the cascade profile of the nearest user, using 80% of
/// the RIS budget (active) or unit amplitude (passive).
ReflectionPlan initial_reflection(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan);

/// Scales phi_l into the RIS budget (active) or clips amplitudes to 1 (passive).
ReflectionPlan project_feasible(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                ReflectionPlan phi);

/// Largest relative violation of the exact SINR and RIS constraints (0 when feasible).
double exact_violation(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                       const ReflectionPlan& phi);

struct PhaseTraceRow {
  int r = 0;
  double epsilon = 0.0;      // optimum of the convex subproblem
  double min_harvest = 0.0;  // exact min_k h_k at the new iterate
  std::string solver_status;
  double kkt_gap = 0.0;
  bool elastic = false;
};

struct PhaseOptions {
  double tolerance = 1e-3;  // sigma
  int max_iterations = 12;  // r_max
  conic::SolverSettings solver;
};

PhaseOptions phase_options(const Scenario& sc);

struct PhaseResult {
  ReflectionPlan phi;
  double objective = 0.0;  // exact min_k h_k of the returned plan
  bool feasible = false;   // exact SINR and RIS constraints hold
  std::vector<PhaseTraceRow> trace;
  std::string diagnostic;
};

/// SCA over the reflection vectors with the flight plan fixed.
PhaseResult solve_phase_sca(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                            const ReflectionPlan& phi_init, const PhaseOptions& options);

}  // namespace uavris::phase
