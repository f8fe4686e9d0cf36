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
#include "uavris/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>

#include <json.hpp>

#include "uavris/channel.hpp"

namespace uavris::optimizer {

namespace {

constexpr double kFeasibilityTolerance = 1e-9;
constexpr int kMaxDoublings = 10;
constexpr double kInitialHoverTime = 2.0;

bool has_requirement(const Scenario& sc) {
  return std::any_of(sc.energy_requirement.begin(), sc.energy_requirement.end(), [](double e) { return e > 0.0; });
}

void scale(const Scenario& sc, FlightPlan& plan, ReflectionPlan& phi, double alpha) {
  for (auto& t : plan.hover_times) t *= alpha;
  if (sc.mode != RisMode::Active) return;
  const double g = 1.0 / std::sqrt(alpha);
  for (auto& v : phi.phi)
    for (auto& c : v) c *= g;
}

double harvest(const Scenario& sc, const channel::ChannelStats& stats, const FlightPlan& plan,
               const ReflectionPlan& phi) {
  return has_requirement(sc) ? phase::min_harvest_ratio(sc, stats, plan, phi) : 1.0;
}

}  // namespace

Initialization initialize(const Scenario& sc) {
  Initialization init;
  const int hov = sc.num_hover();
  std::mt19937_64 rng(sc.algorithm.seed);
  std::uniform_real_distribution<double> jitter(-2.0, 2.0);
  std::uniform_real_distribution<double> spin(-std::numbers::pi / 8.0, std::numbers::pi / 8.0);

  for (int i = 0; i <= sc.num_segments; ++i) {
    cplx q = sc.uav_start + (sc.uav_end - sc.uav_start) * (static_cast<double>(i) / sc.num_segments);
    if (sc.algorithm.seed != 0 && i > 0 && i < sc.num_segments) q += cplx(jitter(rng), jitter(rng));
    init.plan.positions.push_back(q);
  }
  init.plan.hover_times.assign(static_cast<std::size_t>(hov), kInitialHoverTime);
  const channel::ChannelStats stats(sc, init.plan);
  init.phi = phase::initial_reflection(sc, stats, init.plan);
  if (sc.algorithm.seed != 0)
    for (auto& v : init.phi.phi)
      for (auto& c : v) c *= std::polar(1.0, spin(rng));

  while (harvest(sc, stats, init.plan, init.phi) < 1.0 && init.doublings < kMaxDoublings) {
    scale(sc, init.plan, init.phi, 2.0);
    ++init.doublings;
  }
  const auto audit = trajectory::exact_audit(sc, init.plan, init.phi);
  if (audit.max_violation > kFeasibilityTolerance)
    throw OptimizerError("initialization infeasible after " + std::to_string(init.doublings) +
                         " doublings: " + audit.first_violated);
  return init;
}

Repair repair_feasibility(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi) {
  Repair r{plan, phi, 1.0, false};
  const channel::ChannelStats stats(sc, plan);
  auto ok = [&](double alpha) {
    FlightPlan p = plan;
    ReflectionPlan f = phi;
    scale(sc, p, f, alpha);
    return harvest(sc, stats, p, f) >= 1.0;
  };
  if (!ok(1.0)) {
    double lo = 1.0, hi = 2.0;
    while (!ok(hi) && hi < 1e6) {
      lo = hi;
      hi *= 2.0;
    }
    for (int i = 0; i < 60 && hi - lo > 1e-12 * hi; ++i) {
      const double mid = 0.5 * (lo + hi);
      (ok(mid) ? hi : lo) = mid;
    }
    r.alpha = hi;
    scale(sc, r.plan, r.phi, r.alpha);
  }
  r.feasible = trajectory::exact_audit(sc, r.plan, r.phi).max_violation <= kFeasibilityTolerance;
  return r;
}

Schedule rescale_schedule(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi) {
  Schedule out{plan, phi, false};
  if (!has_requirement(sc)) return out;
  const channel::ChannelStats stats(sc, plan);
  const int hov = plan.num_hover();
  const bool active = sc.mode == RisMode::Active;
  // A small margin keeps the exact audit on the feasible side of the solver tolerance.
  constexpr double kMargin = 1e-7;
  using conic::AffineExpr;
  conic::ConicProgram prog;
  std::vector<int> t(static_cast<std::size_t>(hov)), u(static_cast<std::size_t>(hov), -1);
  std::vector<AffineExpr> root(static_cast<std::size_t>(hov)), root_upper(static_cast<std::size_t>(hov));
  AffineExpr cost;
  for (int l = 0; l < hov; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const std::string tag = std::to_string(l);
    t[ul] = prog.add_variable("t_" + tag);
    // A vanishing hover time would leave the next trajectory expansion without a reference point.
    prog.set_bounds(t[ul], phase::kMinHoverTime, std::nullopt);
    cost += AffineExpr::var(t[ul]);
    const Eigen::VectorXcd v = channel::to_eigen(phi.phi[ul]);
    if (!active || v.squaredNorm() == 0.0) continue;
    // u_l = s_l t_l with s_l = 1 for the current amplitudes.
    u[ul] = prog.add_variable("u_" + tag);
    const double draw = channel::ris_output_power(sc, stats.at(0, l).beta_t, v);
    prog.set_bounds(u[ul], 0.0, (1.0 - kMargin) * sc.ris_energy_budget / draw);
    const int g = prog.add_variable("g_" + tag);
    prog.add_rotated_soc({AffineExpr::var(t[ul]), AffineExpr::var(u[ul], 0.5), AffineExpr::var(g)}, "gm_" + tag);
    root[ul] = AffineExpr::var(g);
    root_upper[ul] = (AffineExpr::var(t[ul]) + AffineExpr::var(u[ul])) * 0.5;
  }
  prog.minimize(cost);
  for (int k = 0; k < sc.num_users(); ++k) {
    const auto uk = static_cast<std::size_t>(k);
    if (!(sc.energy_requirement[uk] > 0.0)) continue;
    const double w = (1.0 - sc.split_ratio) * sc.tx_power[uk] / sc.energy_requirement[uk];
    AffineExpr row(-(1.0 + kMargin));
    for (int l = 0; l < hov; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      const auto& link = stats.at(k, l);
      const Eigen::VectorXcd v = channel::to_eigen(phi.phi[ul]);
      const double cascade = w * (v.dot(link.A() * v)).real();
      const double cross = w * 2.0 * link.a().dot(v).real();
      const double direct = w * link.beta_d;
      if (u[ul] < 0) {
        row += AffineExpr::var(t[ul], cascade + cross + direct);
        continue;
      }
      row += AffineExpr::var(u[ul], cascade) + AffineExpr::var(t[ul], direct);
      row += (cross >= 0.0 ? root[ul] : root_upper[ul]) * cross;
    }
    prog.add_nonneg(row, "harvest_" + std::to_string(k));
  }
  const auto sol = conic::solve(prog, {sc.algorithm.solver_tol, sc.algorithm.solver_max_iter});
  if (sol.status != conic::SolveStatus::Optimal) return out;

  Schedule cand{plan, phi, true};
  for (int l = 0; l < hov; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const double tl = std::max(0.0, sol.x[t[ul]]);
    cand.plan.hover_times[ul] = tl;
    if (u[ul] < 0 || tl <= 0.0) continue;
    const double g = std::sqrt(std::max(0.0, sol.x[u[ul]]) / tl);
    for (auto& c : cand.phi.phi[ul]) c *= g;
  }
  if (trajectory::exact_audit(sc, cand.plan, cand.phi).max_violation > kFeasibilityTolerance) return out;
  if (!(energy::system_energy(sc, cand.plan).total < energy::system_energy(sc, plan).total) &&
      trajectory::exact_audit(sc, plan, phi).max_violation <= kFeasibilityTolerance)
    return out;
  return cand;
}

RunResult run_algorithm1(const Scenario& sc) {
  RunResult res;
  const Initialization init = initialize(sc);
  res.initial_doublings = init.doublings;
  res.plan = init.plan;
  res.phi = init.phi;
  res.energy = energy::system_energy(sc, res.plan);
  res.initial_energy = res.energy.total;

  FlightPlan plan = init.plan;
  ReflectionPlan phi = init.phi;
  double e_prev = res.energy.total;
  double best_objective = res.energy.total;
  int quiet = 0;
  auto t_opts = trajectory::trajectory_options(sc);
  const auto p_opts = phase::phase_options(sc);
  res.termination = "iteration cap";

  for (int x = 1; x <= sc.algorithm.max_outer; ++x) {
    OuterTraceRow row;
    row.x = x;
    const auto tr = trajectory::solve_trajectory_sca(sc, phi, plan, t_opts);
    for (const auto& t : tr.trace) res.trajectory_trace.push_back({x, t});
    if (!tr.solved) {
      res.termination = "trajectory stage failed: " + tr.diagnostic;
      res.failed = true;
      break;
    }
    const FlightPlan moved = tr.plan;
    row.objective = energy::system_energy(sc, moved).total;
    if (row.objective > best_objective)
      res.fluctuation = std::max(res.fluctuation, (row.objective - best_objective) / best_objective);
    best_objective = std::min(best_objective, row.objective);

    const channel::ChannelStats stats(sc, moved);
    const ReflectionPlan kept = phase::project_feasible(sc, stats, moved, phi);
    row.harvest_kept = harvest(sc, stats, moved, kept);
    const auto ph = phase::solve_phase_sca(sc, stats, moved, kept, p_opts);
    for (const auto& p : ph.trace) res.phase_trace.push_back({x, p});
    row.harvest_new = ph.objective;
    row.phi_accepted = ph.feasible && ph.objective > row.harvest_kept;
    const ReflectionPlan chosen = row.phi_accepted ? ph.phi : kept;
    if (!row.phi_accepted) row.harvest_new = row.harvest_kept;

    Schedule sched = rescale_schedule(sc, moved, chosen);
    if (!sched.changed) {
      const Repair rep = repair_feasibility(sc, moved, chosen);
      row.repair_alpha = rep.alpha;
      if (!rep.feasible) {
        res.outer.push_back(row);
        res.termination = "repair failed: " + trajectory::exact_audit(sc, rep.plan, rep.phi).first_violated;
        res.failed = true;
        break;
      }
      sched = rescale_schedule(sc, rep.plan, rep.phi);
      if (!sched.changed) sched = {rep.plan, rep.phi, false};
    }
    row.rescaled = sched.changed;
    row.energy = energy::system_energy(sc, sched.plan).total;
    row.move_radius = t_opts.move_radius;
    const double incumbent = res.energy.total;
    if (row.energy > incumbent)
      res.repaired_fluctuation = std::max(res.repaired_fluctuation, (row.energy - incumbent) / incumbent);
    if (row.energy < incumbent) {
      res.plan = sched.plan;
      res.phi = sched.phi;
      res.energy = energy::system_energy(sc, sched.plan);
      row.incumbent = true;
    } else {
      // The step made things worse: retry from the best point with a tighter move limit.
      double moved_by = 0.0;
      for (int l = 0; l < plan.num_hover(); ++l) moved_by = std::max(moved_by, std::abs(moved.hover(l) - plan.hover(l)));
      t_opts.move_radius = 0.5 * std::min(t_opts.move_radius, moved_by);
    }
    plan = res.plan;
    phi = res.phi;
    res.outer.push_back(row);

    quiet = std::abs(row.energy - e_prev) <= sc.algorithm.tolerance * std::abs(e_prev) ? quiet + 1 : 0;
    e_prev = row.energy;
    if (quiet >= 2) {
      res.termination = "converged";
      break;
    }
  }
  return res;
}

std::string trace_jsonl(const RunResult& result) {
  using nlohmann::json;
  std::ostringstream out;
  std::size_t ti = 0, pi = 0;
  for (const auto& o : result.outer) {
    for (; ti < result.trajectory_trace.size() && result.trajectory_trace[ti].x == o.x; ++ti) {
      const auto& r = result.trajectory_trace[ti].row;
      out << json{{"stage", "trajectory"}, {"x", o.x}, {"n", r.n}, {"E_V", r.energy},
                  {"solver_status", r.solver_status}, {"exact_audit_max_violation", r.audit_violation}}
                 .dump()
          << '\n';
    }
    for (; pi < result.phase_trace.size() && result.phase_trace[pi].x == o.x; ++pi) {
      const auto& r = result.phase_trace[pi].row;
      out << json{{"stage", "phase"}, {"x", o.x}, {"r", r.r}, {"epsilon", r.epsilon}, {"min_harvest", r.min_harvest},
                  {"solver_status", r.solver_status}, {"kkt_gap", r.kkt_gap}, {"elastic", r.elastic}}
                 .dump()
          << '\n';
    }
    out << json{{"stage", "outer"}, {"x", o.x}, {"objective", o.objective},
                {"harvest_kept", o.harvest_kept}, {"harvest_new", o.harvest_new}, {"phi_accepted", o.phi_accepted},
                {"repair_alpha", o.repair_alpha}, {"rescaled", o.rescaled},
                {"move_radius", std::isfinite(o.move_radius) ? json(o.move_radius) : json(nullptr)}, {"energy", o.energy}, {"incumbent", o.incumbent}}
               .dump()
        << '\n';
  }
  // Stage rows of a pass that terminated before its outer record.
  for (; ti < result.trajectory_trace.size(); ++ti) {
    const auto& e = result.trajectory_trace[ti];
    out << json{{"stage", "trajectory"}, {"x", e.x}, {"n", e.row.n}, {"E_V", e.row.energy},
                {"solver_status", e.row.solver_status}, {"exact_audit_max_violation", e.row.audit_violation}}
               .dump()
        << '\n';
  }
  out << json{{"stage", "result"}, {"energy", result.energy.total}, {"fluctuation", result.fluctuation},
              {"repaired_fluctuation", result.repaired_fluctuation},
              {"termination", result.termination}}
             .dump()
      << '\n';
  return out.str();
}

double mean_hover_distance_to_ris(const Scenario& sc, const FlightPlan& plan) {
  if (plan.num_hover() == 0) return 0.0;
  double s = 0.0;
  for (int l = 0; l < plan.num_hover(); ++l) s += std::abs(plan.hover(l) - sc.ris_position);
  return s / plan.num_hover();
}

}  // namespace uavris::optimizer
