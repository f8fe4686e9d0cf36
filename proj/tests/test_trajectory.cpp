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
#include <numbers>
#include <random>

#include "uavris/energy.hpp"
#include "uavris/optimizer.hpp"
#include "uavris/sca_trajectory.hpp"

using namespace uavris;
using namespace uavris::trajectory;
using Catch::Approx;

namespace {

cplx random_point(std::mt19937_64& rng, double half_width) {
  std::uniform_real_distribution<double> u(-half_width, half_width);
  return {u(rng), u(rng)};
}

double exact_pathloss(double beta0, cplx q, cplx c, double h, double tau) {
  return beta0 / std::pow(std::norm(q - c) + h * h, tau / 2.0);
}

}  // namespace

TEST_CASE("harvest_u_coefficients: zero and co-phased reflections") {
  const Scenario sc = reference_scenario();
  const auto link = channel::second_moment_components(sc, 1, {-12.0, 4.0});
  const auto zero = harvest_u_coefficients(sc, link, Eigen::VectorXcd::Zero(32), link.psi);
  CHECK(zero.u1 == 0.0);
  CHECK(zero.u2 == 0.0);
  CHECK(zero.u3 == 0.0);
  CHECK(zero.model(link.beta_d, link.beta_t) == link.beta_d);

  const double c = 1.7;
  const auto co = harvest_u_coefficients(sc, link, c * link.psi, link.psi);
  CHECK(co.u1 == Approx(100.0 * link.beta_r / 121.0 * c * c * 32 * 32).epsilon(1e-12));
  // The model reproduces D exactly when the profile is the true one.
  CHECK(co.model(link.beta_d, link.beta_t) == Approx(link.second_moment(c * link.psi)).epsilon(1e-12));

  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> ph(0.0, 2.0 * std::numbers::pi);
  for (int i = 0; i < 100; ++i) {
    Eigen::VectorXcd phi(32);
    for (int m = 0; m < 32; ++m) phi[m] = std::polar(c, ph(rng));
    const auto u = harvest_u_coefficients(sc, link, phi, link.psi);
    CHECK(u.u2 <= co.u2);
    CHECK(u.u3 == Approx(co.u3).epsilon(1e-12));
  }
}

TEST_CASE("pathloss tangents: tight at the expansion point, below elsewhere") {
  const Scenario sc = reference_scenario();
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx q_n = random_point(rng, 40.0);
    const int k = trial % sc.num_users();
    const auto tan = pathloss_tangents(sc, q_n, k);
    const cplx user = sc.users[static_cast<std::size_t>(k)];
    const double bd_n = exact_pathloss(1e-3, q_n, user, 20.0, 2.4);
    const double bt_n = exact_pathloss(1e-3, q_n, sc.ris_position, 10.0, 2.3);
    CHECK(std::abs(tan.direct.evaluate(q_n) - bd_n) <= 1e-10 * bd_n);
    CHECK(std::abs(tan.uav_ris.evaluate(q_n) - bt_n) <= 1e-10 * bt_n);
    for (int i = 0; i < 1000; ++i) {
      const cplx q = random_point(rng, 80.0);
      CHECK(tan.direct.evaluate(q) <= exact_pathloss(1e-3, q, user, 20.0, 2.4) * (1.0 + 1e-12));
      CHECK(tan.uav_ris.evaluate(q) <= exact_pathloss(1e-3, q, sc.ris_position, 10.0, 2.3) * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("pathloss tangents: slope flattens as the altitude grows") {
  double prev = std::numeric_limits<double>::infinity();
  for (double h : {10.0, 100.0, 1e3, 1e4}) {
    const auto t = make_pathloss_tangent(1e-3, {0.0, 0.0}, h, 2.3, {5.0, 5.0});
    CHECK(t.slope < prev);
    prev = t.slope;
  }
  CHECK(prev < 1e-15);
}

TEST_CASE("horizontal_distance_tangent: tight, below, and degenerate at the centre") {
  std::mt19937_64 rng(10);
  const cplx q_r{1.5, -2.0};
  for (int trial = 0; trial < 10; ++trial) {
    const cplx q_n = random_point(rng, 40.0);
    const auto tan = horizontal_distance_tangent(q_n, q_r);
    CHECK(tan.evaluate(q_n) == Approx(std::norm(q_n - q_r)).epsilon(1e-14));
    for (int i = 0; i < 1000; ++i) {
      const cplx q = random_point(rng, 80.0);
      CHECK(tan.evaluate(q) <= std::norm(q - q_r) + 1e-12 * (1.0 + std::norm(q - q_r)));
    }
  }
  const auto flat = horizontal_distance_tangent(q_r, q_r);
  for (int i = 0; i < 100; ++i) CHECK(flat.evaluate(random_point(rng, 50.0)) == 0.0);
}

TEST_CASE("scalar tangents of y^2 and 1/t") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> pos(1e-3, 50.0), any(-10.0, 10.0);
  for (int trial = 0; trial < 20; ++trial) {
    const double y_n = any(rng), t_n = pos(rng);
    CHECK(square_tangent(y_n, y_n) == Approx(y_n * y_n).epsilon(1e-14));
    CHECK(inverse_time_tangent(t_n, t_n) == Approx(1.0 / t_n).epsilon(1e-14));
    for (int i = 0; i < 1000; ++i) {
      const double y = any(rng), t = pos(rng);
      CHECK(square_tangent(y_n, y) <= y * y + 1e-12);
      CHECK(inverse_time_tangent(t_n, t) <= 1.0 / t * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("inverse_power_majorant: value, slope and bound") {
  for (double p : {1.0, 1.15, 1.2, 2.5}) {
    CHECK(inverse_power_majorant(1.0, p) == Approx(1.0).epsilon(1e-15));
    const double h = 1e-6;
    const double slope = (inverse_power_majorant(1.0 + h, p) - inverse_power_majorant(1.0 - h, p)) / (2 * h);
    CHECK(slope == Approx(-p).epsilon(1e-6));
    for (double w = 0.05; w < 20.0; w *= 1.07) CHECK(inverse_power_majorant(w, p) >= std::pow(w, -p) * (1.0 - 1e-14));
  }
}

TEST_CASE("add_inverse_power_bound: cone tree reproduces the power") {
  for (auto [num, den] : {std::pair{1, 1}, {3, 2}, {2, 1}, {5, 3}}) {
    conic::ConicProgram prog;
    const int s = prog.add_variable("s"), w = prog.add_variable("w");
    prog.set_bounds(w, 2.0, 2.0);
    prog.minimize(conic::AffineExpr::var(s));
    add_inverse_power_bound(prog, conic::AffineExpr::var(s), conic::AffineExpr::var(w), num, den, "b");
    const auto sol = conic::solve(prog);
    REQUIRE(sol.status == conic::SolveStatus::Optimal);
    CHECK(sol.x[s] == Approx(std::pow(2.0, -double(num) / den)).epsilon(1e-6));
  }
}

TEST_CASE("RIS energy row is conservative and tight at the expansion point") {
  // Row assembled from the public tangents: (P beta_t^n S(q) + noise) |phi|^2 t_n / E <= 2 - t / t_n,
  // with S(q) >= beta_t(q) / beta_t^n built from the distance tangent and the majorant.
  const Scenario sc = reference_scenario();
  const double h = 10.0, tau = 2.3, E = 20.0, phi2 = 40.0, P = sc.total_tx_power();
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> tt(0.05, 20.0);
  for (int trial = 0; trial < 10; ++trial) {
    const cplx q_n = random_point(rng, 30.0);
    const double t_n = tt(rng);
    const double w_n = std::norm(q_n) + h * h;
    const double bt_n = 1e-3 * std::pow(w_n, -tau / 2);
    const auto tan = horizontal_distance_tangent(q_n, sc.ris_position);
    auto row = [&](cplx q, double t) {
      const double S = inverse_power_majorant((tan.evaluate(q) + h * h) / w_n, tau / 2);
      return 2.0 - t / t_n - (P * bt_n * S + sc.noise_ris) * phi2 * t_n / E;
    };
    auto exact = [&](cplx q, double t) {
      const double bt = exact_pathloss(1e-3, q, sc.ris_position, h, tau);
      return t_n * (1.0 / t - (P * bt + sc.noise_ris) * phi2 / E);
    };
    CHECK(std::abs(row(q_n, t_n) - exact(q_n, t_n)) <= 1e-10);
    for (int i = 0; i < 1000; ++i) {
      const cplx q = random_point(rng, 60.0);
      const double t = tt(rng);
      if (tan.evaluate(q) + h * h <= 0.0) continue;  // the cone makes such points infeasible
      CHECK(row(q, t) <= exact(q, t) + 1e-12);
    }
  }
}

namespace {

struct Start {
  Scenario sc;
  optimizer::Initialization init;
};

Start reference_start(RisMode mode = RisMode::Active) {
  Start s;
  s.sc = reference_scenario().with_mode(mode);
  s.init = optimizer::initialize(s.sc);
  return s;
}

}  // namespace

TEST_CASE("solve_trajectory_sca: one iteration cap means one solve") {
  const auto s = reference_start();
  auto opts = trajectory_options(s.sc);
  opts.max_iterations = 1;
  const auto res = solve_trajectory_sca(s.sc, s.init.phi, s.init.plan, opts);
  CHECK(res.trace.size() == 1);
  CHECK(res.solved);
}

TEST_CASE("solve_trajectory_sca: E_V never increases") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const auto s = reference_start(mode);
    const auto opts = trajectory_options(s.sc);
    const auto res = solve_trajectory_sca(s.sc, s.init.phi, s.init.plan, opts);
    REQUIRE(res.solved);
    double prev = energy::uav_total_energy(s.sc, s.init.plan).total;
    for (const auto& row : res.trace) {
      CHECK(row.energy <= prev * (1.0 + 10.0 * opts.solver.tol));
      // The frozen profiles are exact only at plan_init; the audit measures the model gap.
      CHECK(std::isfinite(row.audit_violation));
      prev = row.energy;
    }
    CHECK_NOTHROW(res.plan.check(s.sc));
  }
}

TEST_CASE("solve_trajectory_sca: move radius bounds every hover point") {
  const auto s = reference_start();
  auto opts = trajectory_options(s.sc);
  opts.move_radius = 1.5;
  const auto res = solve_trajectory_sca(s.sc, s.init.phi, s.init.plan, opts);
  REQUIRE(res.solved);
  for (int l = 0; l < res.plan.num_hover(); ++l)
    CHECK(std::abs(res.plan.hover(l) - s.init.plan.hover(l)) <= 1.5 * (1.0 + 1e-6));
}

TEST_CASE("build_trajectory_subproblem: the expansion point satisfies the convex rows") {
  const auto s = reference_start();
  const channel::ChannelStats stats(s.sc, s.init.plan);
  const auto frozen = freeze_links(s.sc, stats, s.init.phi);
  const auto y = initial_shares(s.sc, stats, s.init.plan, s.init.phi);
  const auto p = build_trajectory_subproblem(s.sc, frozen, s.init.phi, s.init.plan, y);
  CHECK_NOTHROW(p.program.validate());
  const auto sol = conic::solve(p.program, trajectory_options(s.sc).solver);
  REQUIRE(sol.status == conic::SolveStatus::Optimal);
  const double start = energy::uav_total_energy(s.sc, s.init.plan).total;
  CHECK(sol.objective <= start * (1.0 + 1e-7));
}
