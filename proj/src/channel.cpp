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
#include "uavris/channel.hpp"

#include <cmath>
#include <numbers>

namespace uavris::channel {

double pathloss(double reference_gain, double dist, double exponent) {
  return reference_gain / std::pow(dist, exponent);
}

Eigen::VectorXcd cascade_phase_profile(const Scenario& sc, const LinkGeometry& g) {
  const double two_pi = 2.0 * std::numbers::pi;
  const double base = two_pi * (g.d_direct + g.d_ris_user - g.d_uav_ris) / sc.wavelength;
  const double step = two_pi * sc.element_spacing * (g.cos_aod - g.cos_aoa) / sc.wavelength;
  Eigen::VectorXcd psi(sc.num_elements);
  for (int m = 0; m < sc.num_elements; ++m) psi[m] = std::polar(1.0, -(base + m * step));
  return psi;
}

Eigen::MatrixXcd LinkStats::A() const {
  Eigen::MatrixXcd out = los_gain * psi * psi.adjoint();
  out.diagonal().array() += diffuse_gain;
  return out;
}

Eigen::VectorXcd LinkStats::a() const { return cross_gain * psi; }

double LinkStats::second_moment(const Eigen::VectorXcd& phi) const {
  const cplx proj = psi.dot(phi);  // psi^H phi
  return los_gain * std::norm(proj) + diffuse_gain * phi.squaredNorm() + 2.0 * cross_gain * proj.real() + beta_d;
}

LinkStats second_moment_components(const Scenario& sc, int k, cplx q) {
  LinkStats s;
  s.geometry = link_distances(sc, q, k);
  const auto& tau = sc.pathloss_exponent;
  s.beta_d = pathloss(sc.reference_gain, s.geometry.d_direct, tau.direct);
  s.beta_t = pathloss(sc.reference_gain, s.geometry.d_uav_ris, tau.uav_ris);
  s.beta_r = pathloss(sc.reference_gain, s.geometry.d_ris_user, tau.ris_user);
  s.psi = cascade_phase_profile(sc, s.geometry);

  const double mu_d = sc.rician.direct, mu_t = sc.rician.uav_ris, mu_r = sc.rician.ris_user;
  const double cascade = s.beta_r * s.beta_t / ((mu_r + 1.0) * (mu_t + 1.0));
  s.los_gain = mu_r * mu_t * cascade;
  s.diffuse_gain = (mu_r + mu_t + 1.0) * cascade;
  s.cross_gain = std::sqrt(mu_d * mu_r * mu_t * s.beta_d * s.beta_r * s.beta_t /
                           ((mu_d + 1.0) * (mu_r + 1.0) * (mu_t + 1.0)));
  return s;
}

double channel_second_moment(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& a, double beta_d,
                             const Eigen::VectorXcd& phi) {
  const double quad = phi.dot(A * phi).real();
  return quad + 2.0 * a.dot(phi).real() + beta_d;
}

double ris_reflected_noise_power(const Scenario& sc, double beta_r, const Eigen::VectorXcd& phi) {
  return beta_r * sc.ris_noise() * phi.squaredNorm();
}

double ris_output_power(const Scenario& sc, double beta_t, const Eigen::VectorXcd& phi) {
  return (sc.total_tx_power() * beta_t + sc.ris_noise()) * phi.squaredNorm();
}

double harvested_power(const Scenario& sc, double second_moment, int k) {
  return (1.0 - sc.split_ratio) * sc.tx_power.at(static_cast<std::size_t>(k)) * second_moment;
}

ChannelStats::ChannelStats(const Scenario& sc, const FlightPlan& plan)
    : users_(sc.num_users()), hovers_(plan.num_hover()) {
  links_.reserve(static_cast<std::size_t>(users_ * hovers_));
  for (int k = 0; k < users_; ++k)
    for (int l = 0; l < hovers_; ++l) links_.push_back(second_moment_components(sc, k, plan.hover(l)));
}

double sinr(const Scenario& sc, const ChannelStats& stats, const Eigen::VectorXcd& phi_l, int k, int l) {
  const LinkStats& s = stats.at(k, l);
  const double d = s.second_moment(phi_l);
  const double eta = sc.split_ratio;
  const double pk = sc.tx_power[static_cast<std::size_t>(k)];
  const double interference = eta * (sc.total_tx_power() - pk) * d;
  return eta * pk * d / (interference + ris_reflected_noise_power(sc, s.beta_r, phi_l) + sc.noise_user);
}

Eigen::VectorXcd to_eigen(const std::vector<cplx>& v) {
  return Eigen::Map<const Eigen::VectorXcd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<cplx> from_eigen(const Eigen::VectorXcd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace uavris::channel
