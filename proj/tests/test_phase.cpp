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
#include <limits>
#include <random>

#include "uavris/optimizer.hpp"
#include "uavris/sca_phase.hpp"

using namespace uavris;
using namespace uavris::phase;
using Catch::Approx;

namespace {

Eigen::VectorXcd random_phi(std::mt19937_64& rng, Eigen::Index m, double scale) {
  std::normal_distribution<double> n(0.0, scale);
  Eigen::VectorXcd phi(m);
  for (Eigen::Index i = 0; i < m; ++i) phi[i] = {n(rng), n(rng)};
  return phi;
}

struct Setup {
  Scenario sc;
  FlightPlan plan;
  ReflectionPlan phi;
  ChannelStats stats;
};

Setup reference_setup(RisMode mode = RisMode::Active, int elements = 32) {
  Setup s;
  s.sc = reference_scenario().with_mode(mode).with_elements(elements);
  const auto init = optimizer::initialize(s.sc);
  s.plan = init.plan;
  s.phi = init.phi;
  s.stats = ChannelStats(s.sc, s.plan);
  return s;
}

}  // namespace

TEST_CASE("harvest_aggregates: zero hover time gives a zero form") {
  auto s = reference_setup();
  for (auto& t : s.plan.hover_times) t = 0.0;
  const auto aggs = harvest_aggregates(s.sc, s.stats, s.plan);
  REQUIRE(aggs.size() == 5);
  std::mt19937_64 rng(1);
  const auto phi = random_phi(rng, 4 * 32, 1.0);
  for (const auto& h : aggs) {
    CHECK(h.A_hat.norm() == 0.0);
    CHECK(h.a_hat.norm() == 0.0);
    CHECK(h.zeta1 == 0.0);
    CHECK(h.value(phi) == 0.0);
  }
}

TEST_CASE("harvest_aggregates: direct link exactly meets a constructed requirement") {
  Scenario sc = reference_scenario();
  sc.num_segments = 2;
  sc.users = {{-30.0, 0.0}};
  sc.tx_power = {0.2};
  sc.sinr_threshold = {0.1};
  FlightPlan plan;
  plan.positions = {sc.uav_start, {-5.0, 2.0}, sc.uav_end};
  plan.hover_times = {1.0};
  const ChannelStats stats(sc, plan);
  sc.energy_requirement = {(1.0 - sc.split_ratio) * 0.2 * stats.at(0, 0).beta_d};
  const auto h = harvest_aggregates(sc, stats, plan).front();
  CHECK(h.zeta1 == Approx(1.0).epsilon(1e-14));
  CHECK(h.value(Eigen::VectorXcd::Zero(32)) == Approx(1.0).epsilon(1e-14));
}

TEST_CASE("harvest_aggregates: form matches the direct evaluation") {
  const auto s = reference_setup();
  const auto aggs = harvest_aggregates(s.sc, s.stats, s.plan);
  const auto phi = stack(s.phi);
  for (int k = 0; k < 5; ++k)
    CHECK(aggs[static_cast<std::size_t>(k)].value(phi) ==
          Approx(exact_harvest_ratio(s.sc, s.stats, s.plan, s.phi, k)).epsilon(1e-11));
}

TEST_CASE("sinr_quadratic: single user form") {
  Scenario sc = reference_scenario();
  sc.users = {{30.0, 0.0}};
  sc.tx_power = {0.2};
  sc.sinr_threshold = {0.1};
  sc.energy_requirement = {4e-5};
  const auto init = optimizer::initialize(sc);
  const ChannelStats stats(sc, init.plan);
  const auto q = sinr_quadratic(sc, stats, 0, 1);
  const auto& ls = stats.at(0, 1);
  Eigen::MatrixXcd F = 0.5 * 0.2 * ls.A();
  F.diagonal().array() -= 0.1 * ls.beta_r * sc.noise_ris;
  CHECK((q.F - F).norm() <= 1e-14 * F.norm());
  CHECK(q.Gamma == Approx(0.1 * sc.noise_user - 0.5 * 0.2 * ls.beta_d).epsilon(1e-13));
  CHECK(q.coefficient == Approx(0.1).epsilon(1e-15));

  std::mt19937_64 rng(2);
  for (int i = 0; i < 20; ++i) {
    const auto phi = random_phi(rng, 32, 1.0);
    const double s = channel::sinr(sc, stats, phi, 0, 1);
    CHECK((q.lhs(phi) >= q.Gamma) == (s >= 0.1));
  }
}

TEST_CASE("sinr_quadratic: interference coefficient of the five-user layout") {
  const auto s = reference_setup();
  const auto q = sinr_quadratic(s.sc, s.stats, 3, 2);
  CHECK(q.coefficient == Approx(0.06).epsilon(1e-13));
  CHECK(q.satisfiable);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(q.F);
  CHECK(q.min_eigenvalue == Approx(eig.eigenvalues().minCoeff()).epsilon(1e-9));
}

TEST_CASE("linearize_sinr: tangent at the expansion point and below elsewhere") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const auto s = reference_setup(mode, 8);
    std::mt19937_64 rng(4);
    for (int k = 0; k < 5; ++k) {
      const auto q = sinr_quadratic(s.sc, s.stats, k, k % 4);
      const auto phi_n = random_phi(rng, 8, 2.0);
      const auto lin = linearize_sinr(q, phi_n);
      CHECK(std::abs(lin.value(phi_n) - q.lhs(phi_n)) <= 1e-10 * std::max(1e-30, std::abs(q.lhs(phi_n))));
      for (int i = 0; i < 200; ++i) {
        const auto phi = random_phi(rng, 8, i % 2 ? 0.5 : 5.0);
        CHECK(lin.value(phi) <= q.lhs(phi) + 1e-12 * std::abs(q.lhs(phi)));
      }
    }
  }
}

TEST_CASE("linearize_harvest: tangent at the expansion point and below elsewhere") {
  const auto s = reference_setup(RisMode::Active, 8);
  const auto aggs = harvest_aggregates(s.sc, s.stats, s.plan);
  std::mt19937_64 rng(5);
  for (const auto& h : aggs) {
    const auto phi_n = random_phi(rng, 4 * 8, 3.0);
    const auto lin = linearize_harvest(h, phi_n);
    CHECK(std::abs(lin.value(phi_n) - h.value(phi_n)) <= 1e-10 * h.value(phi_n));
    for (int i = 0; i < 1000; ++i) {
      const auto phi = random_phi(rng, 4 * 8, 3.0);
      CHECK(lin.value(phi) <= h.value(phi) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("ris_norm_cap: budget over draw, infinite when passive") {
  const auto s = reference_setup();
  const double t = s.plan.hover_times[1];
  const double draw = s.sc.total_tx_power() * s.stats.at(0, 1).beta_t + s.sc.noise_ris;
  CHECK(ris_norm_cap(s.sc, s.stats, s.plan, 1) == Approx(20.0 / (draw * t)).epsilon(1e-14));
  const auto p = reference_setup(RisMode::Passive);
  CHECK(std::isinf(ris_norm_cap(p.sc, p.stats, p.plan, 1)));
}

TEST_CASE("solve_phase_sca: infinite tolerance stops after one solve") {
  const auto s = reference_setup();
  auto opts = phase_options(s.sc);
  opts.tolerance = std::numeric_limits<double>::infinity();
  const auto res = solve_phase_sca(s.sc, s.stats, s.plan, s.phi, opts);
  CHECK(res.trace.size() == 1);
}

TEST_CASE("solve_phase_sca: objective chain is nondecreasing and feasible") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const auto s = reference_setup(mode);
    const auto opts = phase_options(s.sc);
    const auto res = solve_phase_sca(s.sc, s.stats, s.plan, s.phi, opts);
    REQUIRE(res.feasible);
    const double tol = 10.0 * opts.solver.tol;
    double prev = min_harvest_ratio(s.sc, s.stats, s.plan, s.phi);
    double prev_eps = -std::numeric_limits<double>::infinity();
    for (const auto& row : res.trace) {
      CHECK(row.epsilon >= prev_eps - tol * std::abs(prev_eps));
      // The subproblem optimum and the projected iterate only agree to solver feasibility.
      CHECK(row.epsilon >= prev * (1.0 - 1e-6));
      CHECK(row.min_harvest >= row.epsilon * (1.0 - 1e-6));
      prev = row.min_harvest;
      prev_eps = row.epsilon;
    }
    CHECK(res.objective >= min_harvest_ratio(s.sc, s.stats, s.plan, s.phi));
    CHECK(exact_violation(s.sc, s.stats, s.plan, res.phi) <= 1e-6);
    CHECK_NOTHROW(res.phi.check(s.sc));
  }
}
