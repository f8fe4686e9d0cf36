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

#include "uavris/energy.hpp"
#include "uavris/optimizer.hpp"

using namespace uavris;
using namespace uavris::optimizer;
using Catch::Approx;

TEST_CASE("initialize: reference layout passes the exact audit") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const Scenario sc = reference_scenario().with_mode(mode);
    const auto init = initialize(sc);
    CHECK_NOTHROW(init.plan.check(sc));
    CHECK_NOTHROW(init.phi.check(sc));
    CHECK(trajectory::exact_audit(sc, init.plan, init.phi).max_violation == 0.0);
    const channel::ChannelStats stats(sc, init.plan);
    CHECK(phase::min_harvest_ratio(sc, stats, init.plan, init.phi) >= 1.0);
  }
}

TEST_CASE("initialize: no requirement keeps two-second hovers") {
  Scenario sc = reference_scenario();
  sc.energy_requirement.assign(5, 0.0);
  const auto init = initialize(sc);
  CHECK(init.doublings == 0);
  for (double t : init.plan.hover_times) CHECK(t == 2.0);
  for (int l = 0; l < init.plan.num_hover(); ++l)
    CHECK(init.plan.hover(l).real() == Approx(-35.0 + 14.0 * (l + 1)));
}

TEST_CASE("initialize: unreachable requirement names the binding constraint") {
  Scenario sc = reference_scenario();
  sc.energy_requirement.assign(5, 1e3);
  try {
    initialize(sc);
    FAIL("initialization accepted a 1 kJ requirement");
  } catch (const OptimizerError& e) {
    const std::string what = e.what();
    CHECK(what.find("10 doublings") != std::string::npos);
    CHECK(what.find("harvest") != std::string::npos);
  }
}

TEST_CASE("initialize: nonzero seeds jitter deterministically") {
  Scenario a = reference_scenario();
  a.algorithm.seed = 7;
  const auto i1 = initialize(a), i2 = initialize(a);
  CHECK(i1.plan.positions == i2.plan.positions);
  CHECK(i1.phi.phi == i2.phi.phi);
  const auto base = initialize(reference_scenario());
  CHECK(i1.plan.positions != base.plan.positions);
}

TEST_CASE("repair_feasibility: scaling restores the harvest requirement") {
  const Scenario sc = reference_scenario();
  auto init = initialize(sc);
  for (auto& t : init.plan.hover_times) t *= 0.3;
  const auto r = repair_feasibility(sc, init.plan, init.phi);
  CHECK(r.alpha > 1.0);
  CHECK(r.feasible);
  const channel::ChannelStats stats(sc, r.plan);
  CHECK(phase::min_harvest_ratio(sc, stats, r.plan, r.phi) >= 1.0);
  // The RIS draw t |phi|^2 is unchanged by the scaling.
  for (int l = 0; l < r.plan.num_hover(); ++l) {
    const auto ul = static_cast<std::size_t>(l);
    CHECK(r.plan.hover_times[ul] * channel::to_eigen(r.phi.phi[ul]).squaredNorm() ==
          Approx(init.plan.hover_times[ul] * channel::to_eigen(init.phi.phi[ul]).squaredNorm()).epsilon(1e-12));
  }
}

TEST_CASE("rescale_schedule: result is feasible and never costs more") {
  for (RisMode mode : {RisMode::Active, RisMode::Passive}) {
    const Scenario sc = reference_scenario().with_mode(mode);
    const auto init = initialize(sc);
    const auto s = rescale_schedule(sc, init.plan, init.phi);
    CHECK(trajectory::exact_audit(sc, s.plan, s.phi).max_violation <= 1e-6);
    CHECK(energy::system_energy(sc, s.plan).total <= energy::system_energy(sc, init.plan).total);
    CHECK(s.plan.positions == init.plan.positions);
    // The floor holds to interior-point accuracy.
    for (double t : s.plan.hover_times) CHECK(t >= phase::kMinHoverTime - 1e-6);
  }
}

TEST_CASE("run_algorithm1: one outer pass") {
  Scenario sc = reference_scenario();
  sc.algorithm.max_outer = 1;
  const auto res = run_algorithm1(sc);
  REQUIRE(res.outer.size() == 1);
  CHECK(res.outer.front().x == 1);
  bool traj = false, phase_seen = false;
  for (const auto& e : res.trajectory_trace) {
    CHECK(e.x == 1);
    traj = true;
  }
  for (const auto& e : res.phase_trace) {
    CHECK(e.x == 1);
    phase_seen = true;
  }
  CHECK(traj);
  CHECK(phase_seen);
}

TEST_CASE("run_algorithm1: bookkeeping on the reference layout") {
  const Scenario sc = reference_scenario();
  const auto res = run_algorithm1(sc);
  REQUIRE_FALSE(res.failed);

  const auto recomputed = energy::system_energy(sc, res.plan);
  CHECK(res.energy.total == Approx(recomputed.total).epsilon(1e-9));
  CHECK(res.energy.total <= res.initial_energy);
  CHECK(trajectory::exact_audit(sc, res.plan, res.phi).max_violation <= 1e-6);

  double best = res.initial_energy;
  for (const auto& row : res.outer) {
    // The phi carried forward never has a smaller min_k h_k than the one it replaces.
    CHECK(row.harvest_new >= row.harvest_kept);
    if (row.phi_accepted) CHECK(row.harvest_new > row.harvest_kept);
    if (row.incumbent) {
      CHECK(row.energy < best);
      best = row.energy;
    }
  }
  CHECK(res.energy.total == Approx(best).epsilon(1e-12));
  CHECK(res.fluctuation >= 0.0);
  CHECK(res.repaired_fluctuation >= 0.0);

  const auto again = run_algorithm1(sc);
  CHECK(trace_jsonl(again) == trace_jsonl(res));
  CHECK(again.plan.positions == res.plan.positions);
  CHECK(again.plan.hover_times == res.plan.hover_times);
}

TEST_CASE("mean_hover_distance_to_ris: simple layouts") {
  Scenario sc = reference_scenario();
  sc.num_segments = 3;
  FlightPlan plan;
  plan.positions = {sc.uav_start, {3.0, 4.0}, {0.0, -6.0}, sc.uav_end};
  plan.hover_times = {1.0, 1.0};
  CHECK(mean_hover_distance_to_ris(sc, plan) == Approx(5.5).epsilon(1e-15));
}
