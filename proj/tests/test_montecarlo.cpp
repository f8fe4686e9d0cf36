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
#include <catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "uavris/montecarlo.hpp"
#include "uavris/sca_phase.hpp"

using namespace uavris;
using namespace uavris::montecarlo;
using Catch::Approx;

namespace {

Scenario one_user(int elements, int segments = 2) {
  Scenario sc = reference_scenario();
  sc.users = {{-30.0, 0.0}};
  sc.tx_power = {0.2};
  sc.sinr_threshold = {0.1};
  sc.energy_requirement = {4e-5};
  sc.num_elements = elements;
  sc.num_segments = segments;
  return sc;
}

FlightPlan one_hover(const Scenario& sc, cplx q, double t) {
  return {{sc.uav_start, q, sc.uav_end}, {t}};
}

}  // namespace

TEST_CASE("CounterRng: pure function of seed, stream and counter") {
  const CounterRng a(5, 1), b(5, 1), c(5, 2), d(6, 1);
  for (std::uint64_t i = 0; i < 100; ++i) {
    CHECK(a.bits(i) == b.bits(i));
    CHECK(a.bits(i) != c.bits(i));
    CHECK(a.bits(i) != d.bits(i));
    const double u = a.uniform(i);
    CHECK(u > 0.0);
    CHECK(u <= 1.0);
  }
  double re = 0.0, im = 0.0, pw = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const cplx z = a.complex_normal(static_cast<std::uint64_t>(i));
    re += z.real();
    im += z.imag();
    pw += std::norm(z);
  }
  CHECK(std::abs(re / n) < 5.0 * std::sqrt(0.5 / n));
  CHECK(std::abs(im / n) < 5.0 * std::sqrt(0.5 / n));
  CHECK(pw / n == Approx(1.0).epsilon(0.01));
}

TEST_CASE("mc_second_moment: direct link only") {
  const Scenario sc = reference_scenario();
  const cplx q{-5.0, 8.0};
  const auto s = channel::second_moment_components(sc, 3, q);
  const auto est = mc_second_moment(sc, 3, q, Eigen::VectorXcd::Zero(32), 100000, 17);
  CHECK(std::abs(est.z_score(s.beta_d)) <= 3.0);
  CHECK(est.n == 100000);
  CHECK(est.seed == 17);
}

TEST_CASE("mc_second_moment: Rayleigh links with one active element") {
  Scenario sc = reference_scenario().with_elements(4);
  sc.rician = {0.0, 0.0, 0.0};
  const cplx q{10.0, -3.0};
  const auto s = channel::second_moment_components(sc, 2, q);
  Eigen::VectorXcd e1 = Eigen::VectorXcd::Zero(4);
  e1[0] = 1.0;
  const double expect = s.beta_d + s.beta_r * s.beta_t;
  CHECK(s.second_moment(e1) == Approx(expect).epsilon(1e-14));
  const auto est = mc_second_moment(sc, 2, q, e1, 100000, 23);
  CHECK(std::abs(est.z_score(expect)) <= 3.0);
}

TEST_CASE("estimators: identical seeds give identical estimates") {
  const Scenario sc = reference_scenario().with_elements(8);
  Eigen::VectorXcd phi(8);
  for (int m = 0; m < 8; ++m) phi[m] = std::polar(1.0 + 0.1 * m, 0.5 * m);
  const cplx q{3.0, 4.0};
  const auto a = mc_second_moment(sc, 1, q, phi, 5000, 99);
  const auto b = mc_second_moment(sc, 1, q, phi, 5000, 99);
  CHECK(a.mean == b.mean);
  CHECK(a.se == b.se);
  CHECK(mc_second_moment(sc, 1, q, phi, 5000, 100).mean != a.mean);
  CHECK(mc_ris_reflected_noise(sc, 1, phi, 5000, 99).mean == mc_ris_reflected_noise(sc, 1, phi, 5000, 99).mean);
  CHECK(mc_ris_output_power(sc, q, phi, 5000, 99).mean == mc_ris_output_power(sc, q, phi, 5000, 99).mean);
  CHECK(mc_ergodic_rate(sc, 1, q, phi, 5000, 99).mean == mc_ergodic_rate(sc, 1, q, phi, 5000, 99).mean);
}

TEST_CASE("estimators: standard error falls as one over root N") {
  const Scenario sc = reference_scenario().with_elements(4);
  Eigen::VectorXcd phi = Eigen::VectorXcd::Constant(4, cplx{0.6, 0.8});
  const cplx q{-15.0, 2.0};
  const auto s3 = mc_second_moment(sc, 0, q, phi, 1000, 5);
  const auto s4 = mc_second_moment(sc, 0, q, phi, 10000, 5);
  const auto s5 = mc_second_moment(sc, 0, q, phi, 100000, 5);
  const double r10 = std::sqrt(10.0);
  CHECK(s3.se / s4.se == Approx(r10).epsilon(0.2));
  CHECK(s4.se / s5.se == Approx(r10).epsilon(0.2));
}

TEST_CASE("estimators: fewer than the minimum samples are rejected") {
  const Scenario sc = reference_scenario().with_elements(4);
  const Eigen::VectorXcd phi = Eigen::VectorXcd::Ones(4);
  CHECK_THROWS_AS(mc_second_moment(sc, 0, {0.0, 0.0}, phi, kMinSamples - 1, 1), InsufficientSamples);
  CHECK_THROWS_AS(mc_ris_reflected_noise(sc, 0, phi, 10, 1), InsufficientSamples);
  CHECK_THROWS_AS(mc_ris_output_power(sc, {0.0, 0.0}, phi, 10, 1), InsufficientSamples);
  CHECK_THROWS_AS(mc_ergodic_rate(sc, 0, {0.0, 0.0}, phi, 10, 1), InsufficientSamples);
  CHECK_NOTHROW(mc_second_moment(sc, 0, {0.0, 0.0}, phi, kMinSamples, 1));
}

TEST_CASE("mc_ergodic_rate: overwhelming noise drives the rate to zero") {
  Scenario sc = one_user(8);
  sc.noise_user = 1e6;
  const auto plan = one_hover(sc, {-20.0, 0.0}, 1.0);
  const channel::ChannelStats stats(sc, plan);
  const Eigen::VectorXcd phi = stats.at(0, 0).psi;
  const auto rate = mc_ergodic_rate(sc, 0, plan.hover(0), phi, 10000, 3);
  CHECK(rate.mean < 1e-9);
  CHECK(std::log2(1.0 + channel::sinr(sc, stats, phi, 0, 0)) < 1e-9);
}

TEST_CASE("brute_force_phase_oracle: size limits") {
  const Scenario big = one_user(3);
  CHECK_THROWS_AS(brute_force_phase_oracle(big, one_hover(big, {0.0, 0.0}, 1.0)), OracleError);

  Scenario two_hover = one_user(2, 3);
  const FlightPlan p2{{two_hover.uav_start, {-5.0, 0.0}, {5.0, 0.0}, two_hover.uav_end}, {1.0, 1.0}};
  CHECK_THROWS_AS(brute_force_phase_oracle(two_hover, p2), OracleError);

  const Scenario two = one_user(2);
  OracleGrid huge;
  huge.phases = 720;
  huge.amplitudes = 200;
  CHECK_THROWS_AS(brute_force_phase_oracle(two, one_hover(two, {0.0, 0.0}, 1.0), huge), OracleError);
}

TEST_CASE("amplitude_bound: RIS budget solved for one element") {
  const Scenario sc = one_user(1);
  const auto plan = one_hover(sc, {-12.0, 3.0}, 2.5);
  const channel::ChannelStats stats(sc, plan);
  const double bt = stats.at(0, 0).beta_t;
  CHECK(amplitude_bound(sc, stats, plan, 0) == Approx(std::sqrt(20.0 / (2.5 * (0.2 * bt + 1e-11)))).epsilon(1e-14));
  CHECK(amplitude_bound(sc.with_mode(RisMode::Passive), stats, plan, 0) == 1.0);
}

TEST_CASE("brute_force_phase_oracle: one element co-phases with the cascade") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const Scenario sc = one_user(1).with_mode(mode);
    const auto plan = one_hover(sc, {-18.0, 4.0}, 1.0);
    const channel::ChannelStats stats(sc, plan);
    const auto res = brute_force_phase_oracle(sc, plan);
    REQUIRE(res.feasible > 0);
    CHECK(res.points == 720LL * 200LL);
    const cplx best = res.phi.phi[0][0];
    const double step = 2.0 * std::numbers::pi / 720;
    CHECK(std::abs(std::arg(best / stats.at(0, 0).psi[0])) <= step);
    CHECK(std::abs(best) == Approx(amplitude_bound(sc, stats, plan, 0)).epsilon(1e-2));
    CHECK(res.objective == Approx(phase::min_harvest_ratio(sc, stats, plan, res.phi)).epsilon(1e-12));
  }
}
