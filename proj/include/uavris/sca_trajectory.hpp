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

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "uavris/channel.hpp"
#include "uavris/conic.hpp"
#include "uavris/scenario.hpp"

namespace uavris::trajectory {

using channel::ChannelStats;

/// Harvest coefficients with the cascade profile frozen at psi_n:
/// D ~ (U1 + U3) beta_t + U2 sqrt(beta_d beta_t) + beta_d.
struct UCoefficients {
  double u1 = 0.0;
  double u2 = 0.0;
  double u3 = 0.0;

  double model(double beta_d, double beta_t) const { return (u1 + u3) * beta_t + u2 * std::sqrt(beta_d * beta_t) + beta_d; }
};

UCoefficients harvest_u_coefficients(const Scenario& sc, const channel::LinkStats& link, const Eigen::VectorXcd& phi,
                                     const Eigen::VectorXcd& psi_n);

/// Tangent minorant of beta0 / (|q - c|^2 + h^2)^{tau/2} in u = |q - c|^2:
///   value_n - slope (|q - c|^2 - u_n).
struct PathlossTangent {
  cplx center{};
  double height = 0.0;
  double exponent = 0.0;
  double u_n = 0.0;
  double value_n = 0.0;
  double slope = 0.0;

  double evaluate(cplx q) const { return value_n - slope * (std::norm(q - center) - u_n); }
};

PathlossTangent make_pathloss_tangent(double reference_gain, cplx center, double height, double exponent, cplx q_n);

struct LinkTangents {
  PathlossTangent direct;   // beta_d of user k
  PathlossTangent uav_ris;  // beta_t
};

LinkTangents pathloss_tangents(const Scenario& sc, cplx q_n, int k);

/// Affine minorant of |q - q_R|^2 tangent at q_n.
struct DistanceTangent {
  cplx q_n{};
  cplx center{};

  double evaluate(cplx q) const {
    const cplx d = q_n - center;
    return std::norm(d) + 2.0 * (d.real() * (q - q_n).real() + d.imag() * (q - q_n).imag());
  }
};

DistanceTangent horizontal_distance_tangent(cplx q_n, cplx q_r);

/// 2 / t_n - t / t_n^2, the tangent of 1/t at t_n.
inline double inverse_time_tangent(double t_n, double t) { return 2.0 / t_n - t / (t_n * t_n); }

/// 2 y_n y - y_n^2, the tangent of y^2 at y_n.
inline double square_tangent(double y_n, double y) { return 2.0 * y_n * y - y_n * y_n; }

/// Adds s^den w^num >= 1 (s, w >= 0), i.e. s >= w^{-num/den}, through a tree of 3-dimensional
/// rotated cones. Returns the number of cones added.
int add_inverse_power_bound(conic::ConicProgram& prog, const conic::AffineExpr& s, const conic::AffineExpr& w,
                            int num, int den, const std::string& label);

/// (1 - f) w^{-j} + f w^{-(j+1)} with j = floor(p), f = p - j. By weighted AM-GM it bounds
/// w^{-p} from above for w > 0, with equal value and slope at w = 1.
double inverse_power_majorant(double w, double p);

/// Adds variables whose combination bounds inverse_power_majorant(w, p) from above and returns
/// that combination.
conic::AffineExpr add_inverse_power_majorant(conic::ConicProgram& prog, const conic::AffineExpr& w, double p,
                                             const std::string& label);

/// Hover times are capped for conditioning (raised to the expansion point when it lies above).
inline constexpr double kMaxHoverTime = 1e3;

struct TrajectoryProgram {
  conic::ConicProgram program;
  std::vector<int> qx, qy, t;
  std::vector<int> y;  // y[k * hovers + l], -1 when the user has no requirement
  int hovers = 0;
};

/// Per-(k, l) data frozen for a whole trajectory stage.
struct FrozenLinks {
  std::vector<UCoefficients> u;  // [k * hovers + l]
  std::vector<double> beta_r;    // [k]
};

FrozenLinks freeze_links(const Scenario& sc, const ChannelStats& stats, const ReflectionPlan& phi);

/// Convex subproblem at expansion point (q_n, t_n, y_n).
/// A finite radius keeps every hover point within that distance of its position in anchor.
TrajectoryProgram build_trajectory_subproblem(const Scenario& sc, const FrozenLinks& frozen, const ReflectionPlan& phi,
                                              const FlightPlan& plan_n, const std::vector<double>& y_n,
                                              const FlightPlan* anchor = nullptr,
                                              double radius = std::numeric_limits<double>::infinity());

FlightPlan extract_plan(const Scenario& sc, const TrajectoryProgram& p, const Eigen::VectorXd& x);
std::vector<double> extract_shares(const TrajectoryProgram& p, const Eigen::VectorXd& x);

/// Share-based start for y: y_{k,l}^2 proportional to the energy harvested at hover l.
std::vector<double> initial_shares(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                   const ReflectionPlan& phi);

struct AuditResult {
  double max_violation = 0.0;  // relative, 0 when every exact constraint holds
  std::string first_violated;  // empty when feasible
};

/// Exact harvest, SINR and RIS-energy constraints evaluated by the channel model.
AuditResult exact_audit(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi);

struct TrajectoryTraceRow {
  int n = 0;
  double energy = 0.0;  // E_V of the new iterate
  std::string solver_status;
  double audit_violation = 0.0;
};

struct TrajectoryOptions {
  double tolerance = 1e-3;
  int max_iterations = 8;
  conic::SolverSettings solver;
  /// Re-expand the cascade profiles at every iterate instead of once per call. The frozen
  /// default keeps every previous iterate feasible, so E_V cannot increase.
  bool refresh_profiles = false;
  /// Largest distance a hover point may move away from plan_init.
  double move_radius = std::numeric_limits<double>::infinity();
};

TrajectoryOptions trajectory_options(const Scenario& sc);

struct TrajectoryResult {
  FlightPlan plan;
  std::vector<TrajectoryTraceRow> trace;
  bool solved = false;  // at least one subproblem produced an iterate
  std::string diagnostic;
};

/// SCA over hover points and hover times with phi fixed. Unless options.refresh_profiles is
/// set, the cascade profiles are frozen at plan_init for the whole call.
TrajectoryResult solve_trajectory_sca(const Scenario& sc, const ReflectionPlan& phi, const FlightPlan& plan_init,
                                      const TrajectoryOptions& options);

}  // namespace uavris::trajectory
