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

#include <Eigen/Dense>

#include "uavris/scenario.hpp"

namespace uavris::channel {

/// beta_0 / dist^tau.
double pathloss(double reference_gain, double dist, double exponent);

/// Unit-modulus cascade profile [e^{-j psi_1}, ..., e^{-j psi_M}] with
/// psi_m = 2 pi (d_d + d_r - d_t + (m-1) d (cos_aod - cos_aoa)) / lambda.
Eigen::VectorXcd cascade_phase_profile(const Scenario& sc, const LinkGeometry& g);

/// Closed-form statistics of the composite channel g = g_r^H diag(phi) g_t + g_d
/// for one (user, hover point) pair.
///
/// E|g|^2 = phi^H A phi + 2 Re{a^H phi} + beta_d with
///   A = los_gain psi psi^H + diffuse_gain I,   a = cross_gain psi.
struct LinkStats {
  LinkGeometry geometry{};
  double beta_d = 0.0;
  double beta_t = 0.0;
  double beta_r = 0.0;
  Eigen::VectorXcd psi;
  double los_gain = 0.0;
  double diffuse_gain = 0.0;
  double cross_gain = 0.0;

  Eigen::MatrixXcd A() const;
  Eigen::VectorXcd a() const;
  /// D_{k,l}(phi) evaluated through the rank-one structure.
  double second_moment(const Eigen::VectorXcd& phi) const;
};

LinkStats second_moment_components(const Scenario& sc, int k, cplx q);

/// D = phi^H A phi + 2 Re{a^H phi} + beta_d for explicit A and a.
double channel_second_moment(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& a, double beta_d,
                             const Eigen::VectorXcd& phi);

/// E||g_r^H Theta||^2 * noise_ris = beta_r * noise_ris * ||phi||^2.
double ris_reflected_noise_power(const Scenario& sc, double beta_r, const Eigen::VectorXcd& phi);

/// E||Theta s||^2 = (sum_k p_k beta_t + noise_ris) ||phi||^2.
double ris_output_power(const Scenario& sc, double beta_t, const Eigen::VectorXcd& phi);

/// (1 - eta) p_k D.
double harvested_power(const Scenario& sc, double second_moment, int k);

/// Statistics for every (user, hover point) pair of a flight plan.
class ChannelStats {
 public:
  ChannelStats() = default;
  ChannelStats(const Scenario& sc, const FlightPlan& plan);

  const LinkStats& at(int k, int l) const { return links_[static_cast<std::size_t>(k * hovers_ + l)]; }
  int num_users() const { return users_; }
  int num_hover() const { return hovers_; }

 private:
  int users_ = 0;
  int hovers_ = 0;
  std::vector<LinkStats> links_;
};

/// Large-sample SINR approximation for user k at hover point l.
double sinr(const Scenario& sc, const ChannelStats& stats, const Eigen::VectorXcd& phi_l, int k, int l);

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v);
std::vector<cplx> from_eigen(const Eigen::VectorXcd& v);

}  // namespace uavris::channel
