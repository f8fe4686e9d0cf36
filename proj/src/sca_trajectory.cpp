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
#include "uavris/sca_trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>

#include "uavris/energy.hpp"
#include "uavris/sca_phase.hpp"

namespace uavris::trajectory {

using conic::AffineExpr;
using Eigen::VectorXcd;

namespace {

bool usable(const conic::ConicSolution& sol) {
  if (sol.status == conic::SolveStatus::Optimal) return true;
  return sol.status == conic::SolveStatus::MaxIter && sol.x.allFinite() &&
         std::max({sol.primal_residual, sol.dual_residual, sol.duality_gap}) <= 1e-6;
}

double norm2(const std::vector<cplx>& v) {
  double s = 0.0;
  for (const auto& c : v) s += std::norm(c);
  return s;
}

// (X, 1/2, (q - c)/sqrt(w)) with 2 X (1/2) >= |q - c|^2 / w.
std::vector<AffineExpr> distance_cone(int qx, int qy, cplx c, double w, AffineExpr lhs) {
  const double inv = 1.0 / std::sqrt(w);
  return {std::move(lhs), 0.5, AffineExpr::var(qx, inv) - c.real() * inv, AffineExpr::var(qy, inv) - c.imag() * inv};
}

// Affine-in-q expression S with beta(q) <= beta(q_n) S, tight at q_n: the distance tangent
// bounds w / w_n from below and the majorant bounds its -tau/2 power from above.
AffineExpr pathloss_upper(conic::ConicProgram& prog, int qx, int qy, cplx center, double height, cplx q_n,
                          double exponent, const std::string& label) {
  const double w_n = std::norm(q_n - center) + height * height;
  const cplx d = q_n - center;
  const DistanceTangent tan = horizontal_distance_tangent(q_n, center);
  AffineExpr w_hat = (AffineExpr(tan.evaluate(q_n) + height * height - 2.0 * (d.real() * q_n.real() + d.imag() * q_n.imag())) +
                      AffineExpr::var(qx, 2.0 * d.real()) + AffineExpr::var(qy, 2.0 * d.imag())) *
                     (1.0 / w_n);
  return add_inverse_power_majorant(prog, w_hat, exponent / 2.0, label);
}

}  // namespace

UCoefficients harvest_u_coefficients(const Scenario& sc, const channel::LinkStats& link, const Eigen::VectorXcd& phi,
                                     const Eigen::VectorXcd& psi_n) {
  const double mu_d = sc.rician.direct, mu_t = sc.rician.uav_ris, mu_r = sc.rician.ris_user;
  const double den = (mu_r + 1.0) * (mu_t + 1.0);
  const cplx proj = psi_n.dot(phi);  // psi^H phi
  UCoefficients u;
  u.u1 = mu_r * mu_t * link.beta_r / den * std::norm(proj);
  u.u2 = 2.0 * std::sqrt(mu_d * mu_r * mu_t * link.beta_r / ((mu_d + 1.0) * den)) * proj.real();
  u.u3 = (mu_r + mu_t + 1.0) * link.beta_r / den * phi.squaredNorm();
  return u;
}

PathlossTangent make_pathloss_tangent(double reference_gain, cplx center, double height, double exponent, cplx q_n) {
  PathlossTangent t;
  t.center = center;
  t.height = height;
  t.exponent = exponent;
  t.u_n = std::norm(q_n - center);
  const double w = t.u_n + height * height;
  t.value_n = reference_gain / std::pow(w, exponent / 2.0);
  t.slope = exponent * reference_gain / (2.0 * std::pow(w, exponent / 2.0 + 1.0));
  return t;
}

LinkTangents pathloss_tangents(const Scenario& sc, cplx q_n, int k) {
  return {make_pathloss_tangent(sc.reference_gain, sc.users[static_cast<std::size_t>(k)], sc.uav_height,
                                sc.pathloss_exponent.direct, q_n),
          make_pathloss_tangent(sc.reference_gain, sc.ris_position, sc.uav_height - sc.ris_height,
                                sc.pathloss_exponent.uav_ris, q_n)};
}

DistanceTangent horizontal_distance_tangent(cplx q_n, cplx q_r) { return {q_n, q_r}; }

int add_inverse_power_bound(conic::ConicProgram& prog, const AffineExpr& s, const AffineExpr& w, int num, int den,
                            const std::string& label) {
  int leaves = 1;
  while (leaves < num + den) leaves *= 2;
  auto kind = [&](int i) { return i < den ? 0 : (i < den + num ? 1 : 2); };
  auto leaf = [&](int k) { return k == 0 ? s : (k == 1 ? w : AffineExpr(1.0)); };
  int cones = 0;
  // Each internal node u satisfies u^2 <= left * right, so u_root^leaves <= prod(leaves).
  auto node = [&](auto&& self, int lo, int hi) -> AffineExpr {
    bool uniform = true;
    for (int i = lo + 1; i < hi && uniform; ++i) uniform = kind(i) == kind(lo);
    if (uniform) return leaf(kind(lo));
    const int mid = (lo + hi) / 2;
    AffineExpr left = self(self, lo, mid);
    AffineExpr right = self(self, mid, hi);
    const int u = prog.add_variable(label + "_gm" + std::to_string(cones));
    prog.add_rotated_soc({left, right * 0.5, AffineExpr::var(u)}, label + "_tree");
    ++cones;
    return AffineExpr::var(u);
  };
  const AffineExpr root = node(node, 0, leaves);
  prog.add_nonneg(root - 1.0, label + "_root");
  return cones;
}

double inverse_power_majorant(double w, double p) {
  const double j = std::floor(p), f = p - j;
  return (1.0 - f) * std::pow(w, -j) + f * std::pow(w, -(j + 1.0));
}

AffineExpr add_inverse_power_majorant(conic::ConicProgram& prog, const AffineExpr& w, double p,
                                      const std::string& label) {
  const int j = static_cast<int>(std::floor(p));
  const double f = p - j;
  auto power = [&](int e) -> AffineExpr {
    if (e == 0) return AffineExpr(1.0);
    const int s = prog.add_variable(label + "_inv" + std::to_string(e));
    add_inverse_power_bound(prog, AffineExpr::var(s), w, e, 1, label + "_inv" + std::to_string(e));
    return AffineExpr::var(s);
  };
  AffineExpr bound = power(j) * (1.0 - f);
  if (f > 0.0) bound += power(j + 1) * f;
  return bound;
}

FrozenLinks freeze_links(const Scenario& sc, const ChannelStats& stats, const ReflectionPlan& phi) {
  FrozenLinks f;
  const int hov = stats.num_hover();
  for (int k = 0; k < sc.num_users(); ++k) {
    f.beta_r.push_back(stats.at(k, 0).beta_r);
    for (int l = 0; l < hov; ++l) {
      const auto& link = stats.at(k, l);
      f.u.push_back(harvest_u_coefficients(sc, link, channel::to_eigen(phi.phi[static_cast<std::size_t>(l)]), link.psi));
    }
  }
  return f;
}

TrajectoryProgram build_trajectory_subproblem(const Scenario& sc, const FrozenLinks& frozen, const ReflectionPlan& phi,
                                              const FlightPlan& plan_n, const std::vector<double>& y_n,
                                              const FlightPlan* anchor, double radius) {
  TrajectoryProgram p;
  auto& prog = p.program;
  const int hov = plan_n.num_hover(), users = sc.num_users();
  p.hovers = hov;
  const double h_t = sc.uav_height - sc.ris_height;

  for (int l = 0; l < hov; ++l) {
    const std::string tag = std::to_string(l);
    p.qx.push_back(prog.add_variable("qx_" + tag));
    p.qy.push_back(prog.add_variable("qy_" + tag));
    p.t.push_back(prog.add_variable("t_" + tag));
    prog.set_bounds(p.t.back(), 0.0, std::max(kMaxHoverTime, plan_n.hover_times[static_cast<std::size_t>(l)]));
    if (anchor && std::isfinite(radius)) {
      const cplx c = anchor->hover(l);
      prog.add_soc({AffineExpr(radius), AffineExpr::var(p.qx.back()) - c.real(), AffineExpr::var(p.qy.back()) - c.imag()},
                   "move_" + tag);
    }
  }

  // Flight length epigraphs over all L segments.
  AffineExpr flight;
  for (int j = 0; j <= hov; ++j) {
    auto px = [&](int i) { return i < 0 ? AffineExpr(sc.uav_start.real()) : (i >= hov ? AffineExpr(sc.uav_end.real()) : AffineExpr::var(p.qx[static_cast<std::size_t>(i)])); };
    auto py = [&](int i) { return i < 0 ? AffineExpr(sc.uav_start.imag()) : (i >= hov ? AffineExpr(sc.uav_end.imag()) : AffineExpr::var(p.qy[static_cast<std::size_t>(i)])); };
    const int e = prog.add_variable("seg_" + std::to_string(j));
    prog.add_soc({AffineExpr::var(e), px(j) - px(j - 1), py(j) - py(j - 1)}, "segment_" + std::to_string(j));
    flight += AffineExpr::var(e);
  }
  AffineExpr hover_time;
  for (int l = 0; l < hov; ++l) hover_time += AffineExpr::var(p.t[static_cast<std::size_t>(l)]);
  const double hover_power = energy::propulsion_power(sc, 0.0) + sc.uav_radiated_power();
  prog.minimize(flight * energy::cruise_energy_per_metre(sc) + hover_time * hover_power);

  p.y.assign(static_cast<std::size_t>(users * hov), -1);

  for (int l = 0; l < hov; ++l) {
    const std::string tag = std::to_string(l);
    const auto ul = static_cast<std::size_t>(l);
    const cplx q_n = plan_n.hover(l);
    const int qx = p.qx[ul], qy = p.qy[ul], t = p.t[ul];
    std::optional<AffineExpr> t_upper;
    const double t_n = std::max(plan_n.hover_times[ul], phase::kMinHoverTime);

    // z1 / beta_t^n <= beta_t tangent / beta_t^n.
    const auto tan_t = make_pathloss_tangent(sc.reference_gain, sc.ris_position, h_t, sc.pathloss_exponent.uav_ris, q_n);
    const double w_t = tan_t.u_n + h_t * h_t;
    const int z1 = prog.add_variable("z1_" + tag);
    prog.set_bounds(z1, 0.0, std::nullopt);
    {
      const double kappa = 2.0 * w_t / tan_t.exponent;
      AffineExpr lhs = (AffineExpr(tan_t.u_n + kappa) - AffineExpr::var(z1, kappa)) * (1.0 / w_t);
      prog.add_rotated_soc(distance_cone(qx, qy, sc.ris_position, w_t, lhs), "beta_t_" + tag);
    }

    for (int k = 0; k < users; ++k) {
      const auto uk = static_cast<std::size_t>(k);
      const std::string kt = std::to_string(k) + "_" + tag;
      const UCoefficients& U = frozen.u[static_cast<std::size_t>(k * hov + l)];
      const auto tan_d = make_pathloss_tangent(sc.reference_gain, sc.users[uk], sc.uav_height,
                                               sc.pathloss_exponent.direct, q_n);
      const double w_d = tan_d.u_n + sc.uav_height * sc.uav_height;
      const int z2 = prog.add_variable("z2_" + kt);
      prog.set_bounds(z2, 0.0, std::nullopt);
      {
        const double kappa = 2.0 * w_d / tan_d.exponent;
        AffineExpr lhs = (AffineExpr(tan_d.u_n + kappa) - AffineExpr::var(z2, kappa)) * (1.0 / w_d);
        prog.add_rotated_soc(distance_cone(qx, qy, sc.users[uk], w_d, lhs), "beta_d_" + kt);
      }

      const double bt = tan_t.value_n, bd = tan_d.value_n;
      AffineExpr W;
      if (U.u2 >= 0.0) {
        W = AffineExpr::var(z1, (U.u1 + U.u3) * bt) + AffineExpr::var(z2, bd);
        if (U.u2 > 0.0) {
          const int z3 = prog.add_variable("z3_" + kt);
          prog.add_rotated_soc({AffineExpr::var(z1), AffineExpr::var(z2, 0.5), AffineExpr::var(z3)}, "cross_" + kt);
          W += AffineExpr::var(z3, U.u2 * std::sqrt(bd * bt));
        }
      } else {
        // sqrt(beta_d beta_t) <= (rho beta_d + beta_t / rho) / 2, tight at the expansion point.
        const double rho = std::sqrt(bt / bd);
        const double ct = U.u1 + U.u3 + U.u2 / (2.0 * rho);
        const double cd = 1.0 + U.u2 * rho / 2.0;
        // A negative coefficient needs an upper bound on the path loss instead.
        if (ct >= 0.0) {
          W = AffineExpr::var(z1, ct * bt);
        } else {
          if (!t_upper)
            t_upper = pathloss_upper(prog, qx, qy, sc.ris_position, h_t, q_n, sc.pathloss_exponent.uav_ris, "beta_t_up_" + tag);
          W = *t_upper * (ct * bt);
        }
        W += cd >= 0.0 ? AffineExpr::var(z2, cd * bd)
                       : pathloss_upper(prog, qx, qy, sc.users[uk], sc.uav_height, q_n, sc.pathloss_exponent.direct, "beta_d_up_" + kt) *
                             (cd * bd);
      }
      double scale = U.model(bd, bt);
      if (!(scale > 0.0)) scale = bd;
      W *= 1.0 / scale;

      const double req = sc.energy_requirement[uk];
      if (req > 0.0) {
        const int y = prog.add_variable("y_" + kt);
        p.y[static_cast<std::size_t>(k * hov + l)] = y;
        const double c = req / ((1.0 - sc.split_ratio) * sc.tx_power[uk]);
        prog.add_rotated_soc({W, AffineExpr::var(t, 0.5), AffineExpr::var(y, std::sqrt(c / scale))}, "harvest_" + kt);
      }
      const double gamma = sc.sinr_threshold[uk];
      const double coef = sc.split_ratio * (sc.tx_power[uk] - gamma * (sc.total_tx_power() - sc.tx_power[uk]));
      if (coef > 0.0) {
        const double rhs = gamma * (frozen.beta_r[uk] * sc.ris_noise() * norm2(phi.phi[ul]) + sc.noise_user);
        prog.add_nonneg(W - rhs / (coef * scale), "sinr_" + kt);
      }
    }

    // RIS energy with the distance and 1/t tangents.
    const double phi2 = norm2(phi.phi[ul]);
    if (sc.mode == RisMode::Active && sc.ris_energy_budget > 0.0 && phi2 > 0.0) {
      if (!t_upper) t_upper = pathloss_upper(prog, qx, qy, sc.ris_position, h_t, q_n, sc.pathloss_exponent.uav_ris, "beta_t_up_" + tag);
      const double w_n = std::norm(q_n - sc.ris_position) + h_t * h_t;
      const double s_n = std::pow(w_n, -sc.pathloss_exponent.uav_ris / 2.0);
      const double E = sc.ris_energy_budget;
      AffineExpr row = AffineExpr(2.0 - t_n * sc.ris_noise() * phi2 / E) - AffineExpr::var(t, 1.0 / t_n) -
                       *t_upper * (t_n * sc.total_tx_power() * sc.reference_gain * phi2 * s_n / E);
      prog.add_nonneg(row, "ris_energy_" + tag);
    }
  }

  // sum_l (2 y_n y - y_n^2) >= 1 per user.
  for (int k = 0; k < users; ++k) {
    if (!(sc.energy_requirement[static_cast<std::size_t>(k)] > 0.0)) continue;
    AffineExpr row(-1.0);
    for (int l = 0; l < hov; ++l) {
      const auto idx = static_cast<std::size_t>(k * hov + l);
      row += AffineExpr::var(p.y[idx], 2.0 * y_n[idx]) - y_n[idx] * y_n[idx];
    }
    prog.add_nonneg(row, "share_" + std::to_string(k));
  }
  return p;
}

FlightPlan extract_plan(const Scenario& sc, const TrajectoryProgram& p, const Eigen::VectorXd& x) {
  FlightPlan plan;
  plan.positions.push_back(sc.uav_start);
  for (int l = 0; l < p.hovers; ++l) {
    const auto ul = static_cast<std::size_t>(l);
    plan.positions.emplace_back(x[p.qx[ul]], x[p.qy[ul]]);
    plan.hover_times.push_back(std::clamp(x[p.t[ul]], 0.0, kMaxHoverTime));
  }
  plan.positions.push_back(sc.uav_end);
  return plan;
}

std::vector<double> extract_shares(const TrajectoryProgram& p, const Eigen::VectorXd& x) {
  std::vector<double> y(p.y.size(), 0.0);
  for (std::size_t i = 0; i < p.y.size(); ++i)
    if (p.y[i] >= 0) y[i] = x[p.y[i]];
  return y;
}

std::vector<double> initial_shares(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                   const ReflectionPlan& phi) {
  const int hov = plan.num_hover();
  std::vector<double> y(static_cast<std::size_t>(sc.num_users() * hov), 0.0);
  for (int k = 0; k < sc.num_users(); ++k) {
    std::vector<double> e(static_cast<std::size_t>(hov));
    double total = 0.0;
    for (int l = 0; l < hov; ++l) {
      const auto ul = static_cast<std::size_t>(l);
      e[ul] = plan.hover_times[ul] * stats.at(k, l).second_moment(channel::to_eigen(phi.phi[ul]));
      total += e[ul];
    }
    for (int l = 0; l < hov; ++l)
      y[static_cast<std::size_t>(k * hov + l)] =
          total > 0.0 ? std::sqrt(e[static_cast<std::size_t>(l)] / total) : 1.0 / std::sqrt(static_cast<double>(hov));
  }
  return y;
}

AuditResult exact_audit(const Scenario& sc, const FlightPlan& plan, const ReflectionPlan& phi) {
  const ChannelStats stats(sc, plan);
  AuditResult a;
  auto note = [&](double v, const std::string& what) {
    if (v > a.max_violation) {
      a.max_violation = v;
      a.first_violated = what;
    }
  };
  for (int k = 0; k < sc.num_users(); ++k)
    if (sc.energy_requirement[static_cast<std::size_t>(k)] > 0.0)
      note(1.0 - phase::exact_harvest_ratio(sc, stats, plan, phi, k), "harvest of user " + std::to_string(k + 1));
  for (int l = 0; l < plan.num_hover(); ++l) {
    const auto ul = static_cast<std::size_t>(l);
    const VectorXcd v = channel::to_eigen(phi.phi[ul]);
    for (int k = 0; k < sc.num_users(); ++k)
      note(1.0 - channel::sinr(sc, stats, v, k, l) / sc.sinr_threshold[static_cast<std::size_t>(k)],
           "sinr of user " + std::to_string(k + 1) + " at hover " + std::to_string(l + 1));
    if (sc.mode == RisMode::Active) {
      const double draw = channel::ris_output_power(sc, stats.at(0, l).beta_t, v) * plan.hover_times[ul];
      note(sc.ris_energy_budget > 0.0 ? draw / sc.ris_energy_budget - 1.0 : draw,
           "ris energy at hover " + std::to_string(l + 1));
    } else {
      note(v.size() ? v.cwiseAbs().maxCoeff() - 1.0 : 0.0, "unit modulus at hover " + std::to_string(l + 1));
    }
  }
  return a;
}

TrajectoryOptions trajectory_options(const Scenario& sc) {
  TrajectoryOptions o;
  o.tolerance = sc.algorithm.tolerance;
  o.max_iterations = sc.algorithm.max_trajectory;
  o.solver.tol = sc.algorithm.solver_tol;
  o.solver.max_iter = sc.algorithm.solver_max_iter;
  return o;
}

TrajectoryResult solve_trajectory_sca(const Scenario& sc, const ReflectionPlan& phi, const FlightPlan& plan_init,
                                      const TrajectoryOptions& options) {
  TrajectoryResult res;
  res.plan = plan_init;
  const ChannelStats entry(sc, plan_init);
  FrozenLinks frozen = freeze_links(sc, entry, phi);
  std::vector<double> y = initial_shares(sc, entry, plan_init, phi);
  double e_prev = energy::uav_total_energy(sc, plan_init).total;

  for (int n = 1; n <= options.max_iterations; ++n) {
    if (options.refresh_profiles && n > 1) frozen = freeze_links(sc, ChannelStats(sc, res.plan), phi);
    const auto prog = build_trajectory_subproblem(sc, frozen, phi, res.plan, y, &plan_init, options.move_radius);
    const auto sol = conic::solve(prog.program, options.solver);
    TrajectoryTraceRow row;
    row.n = n;
    row.solver_status = conic::to_string(sol.status);
    if (!usable(sol)) {
      row.energy = e_prev;
      row.audit_violation = exact_audit(sc, res.plan, phi).max_violation;
      res.trace.push_back(row);
      res.diagnostic = "trajectory subproblem " + row.solver_status + " at n=" + std::to_string(n);
      const auto audit = exact_audit(sc, res.plan, phi);
      if (!audit.first_violated.empty()) res.diagnostic += "; incumbent violates " + audit.first_violated;
      break;
    }
    res.plan = extract_plan(sc, prog, sol.x);
    y = extract_shares(prog, sol.x);
    res.solved = true;
    row.energy = energy::uav_total_energy(sc, res.plan).total;
    row.audit_violation = exact_audit(sc, res.plan, phi).max_violation;
    res.trace.push_back(row);
    const bool converged = std::abs(row.energy - e_prev) <= options.tolerance * std::abs(e_prev);
    e_prev = row.energy;
    if (converged) break;
  }
  return res;
}

}  // namespace uavris::trajectory
