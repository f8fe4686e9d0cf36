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
#include "uavris/sca_phase.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace uavris::phase {

using conic::AffineExpr;
using Eigen::MatrixXcd;
using Eigen::VectorXcd;

namespace {

constexpr double kElasticPenalty = 1e3;
constexpr double kFeasibilityTol = 1e-6;

double harvest_weight(const Scenario& sc, const FlightPlan& plan, int k, int l) {
  const auto ku = static_cast<std::size_t>(k);
  return (1.0 - sc.split_ratio) * sc.tx_power[ku] * plan.hover_times[static_cast<std::size_t>(l)] /
         sc.energy_requirement[ku];
}

// 2 Re{g^H phi_l} over the real variables of hover l.
AffineExpr real_inner(const VectorXcd& g, int first) {
  AffineExpr e;
  const auto m = static_cast<int>(g.size());
  for (int i = 0; i < m; ++i) {
    if (g[i].real() != 0.0) e.terms.emplace_back(first + i, 2.0 * g[i].real());
    if (g[i].imag() != 0.0) e.terms.emplace_back(first + m + i, 2.0 * g[i].imag());
  }
  return e;
}

bool usable(const conic::ConicSolution& sol) {
  if (sol.status == conic::SolveStatus::Optimal) return true;
  return sol.status == conic::SolveStatus::MaxIter && sol.x.allFinite() &&
         std::max({sol.primal_residual, sol.dual_residual, sol.duality_gap}) <= 1e-6;
}

}  // namespace

Eigen::VectorXcd stack(const ReflectionPlan& plan) {
  Eigen::Index total = 0;
  for (const auto& v : plan.phi) total += static_cast<Eigen::Index>(v.size());
  VectorXcd out(total);
  Eigen::Index off = 0;
  for (const auto& v : plan.phi)
    for (const cplx& c : v) out[off++] = c;
  return out;
}

ReflectionPlan unstack(const Eigen::VectorXcd& phi, int hovers, int elements) {
  ReflectionPlan plan;
  plan.phi.resize(static_cast<std::size_t>(hovers));
  for (int l = 0; l < hovers; ++l) plan.phi[static_cast<std::size_t>(l)] = channel::from_eigen(phi.segment(l * elements, elements));
  return plan;
}

double HarvestAggregate::value(const Eigen::VectorXcd& phi) const {
  return phi.dot(A_hat * phi).real() + 2.0 * a_hat.dot(phi).real() + zeta1;
}

std::vector<HarvestAggregate> harvest_aggregates(const Scenario& sc, const ChannelStats& stats,
                                                 const FlightPlan& plan) {
  const int m = sc.num_elements, hov = plan.num_hover();
  std::vector<HarvestAggregate> out(static_cast<std::size_t>(sc.num_users()));
  for (int k = 0; k < sc.num_users(); ++k) {
    auto& h = out[static_cast<std::size_t>(k)];
    h.A_hat = MatrixXcd::Zero(hov * m, hov * m);
    h.a_hat = VectorXcd::Zero(hov * m);
    h.required = sc.energy_requirement[static_cast<std::size_t>(k)] > 0.0;
    if (!h.required) continue;
    for (int l = 0; l < hov; ++l) {
      const double w = harvest_weight(sc, plan, k, l);
      const auto& s = stats.at(k, l);
      h.A_hat.block(l * m, l * m, m, m) = w * s.A();
      h.a_hat.segment(l * m, m) = w * s.a();
      h.zeta1 += w * s.beta_d;
    }
  }
  return out;
}

double exact_harvest_ratio(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                           const ReflectionPlan& phi, int k) {
  double energy = 0.0;
  for (int l = 0; l < plan.num_hover(); ++l) {
    const double d = stats.at(k, l).second_moment(channel::to_eigen(phi.phi[static_cast<std::size_t>(l)]));
    energy += plan.hover_times[static_cast<std::size_t>(l)] * channel::harvested_power(sc, d, k);
  }
  return energy / sc.energy_requirement[static_cast<std::size_t>(k)];
}

double min_harvest_ratio(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                         const ReflectionPlan& phi) {
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < sc.num_users(); ++k)
    if (sc.energy_requirement[static_cast<std::size_t>(k)] > 0.0)
      best = std::min(best, exact_harvest_ratio(sc, stats, plan, phi, k));
  return std::isfinite(best) ? best : 0.0;
}

double SinrQuadratic::lhs(const Eigen::VectorXcd& phi) const {
  return phi.dot(F * phi).real() + 2.0 * f.dot(phi).real();
}

SinrQuadratic sinr_quadratic(const Scenario& sc, const ChannelStats& stats, int k, int l) {
  const auto& s = stats.at(k, l);
  const auto ku = static_cast<std::size_t>(k);
  const double gamma = sc.sinr_threshold[ku];
  const double pk = sc.tx_power[ku];
  SinrQuadratic q;
  q.coefficient = sc.split_ratio * (pk - gamma * (sc.total_tx_power() - pk));
  q.satisfiable = q.coefficient > 0.0;
  const double noise_term = gamma * s.beta_r * sc.ris_noise();
  q.F = q.coefficient * s.A();
  q.F.diagonal().array() -= noise_term;
  q.f = q.coefficient * s.a();
  q.Gamma = gamma * sc.noise_user - q.coefficient * s.beta_d;
  // A = los psi psi^H + diffuse I with |psi|^2 = M: eigenvalues diffuse (M-1 times) and los M + diffuse.
  const auto m = static_cast<double>(s.psi.size());
  const double lo = m > 1 ? s.diffuse_gain : s.los_gain * m + s.diffuse_gain;
  const double hi = s.los_gain * m + s.diffuse_gain;
  q.min_eigenvalue = std::min(q.coefficient * lo, q.coefficient * hi) - noise_term;
  return q;
}

double LinearizedSinr::value(const Eigen::VectorXcd& phi) const {
  return 2.0 * g.dot(phi).real() + constant - mu * phi.squaredNorm();
}

LinearizedSinr linearize_sinr(const SinrQuadratic& q, const Eigen::VectorXcd& phi_n) {
  LinearizedSinr out;
  out.mu = std::max(0.0, -q.min_eigenvalue);
  const VectorXcd Fp_phi = q.F * phi_n + out.mu * phi_n;
  out.g = Fp_phi + q.f;
  out.constant = -phi_n.dot(Fp_phi).real();
  return out;
}

double LinearizedHarvest::value(const Eigen::VectorXcd& phi) const { return 2.0 * b.dot(phi).real() + zeta2; }

LinearizedHarvest linearize_harvest(const HarvestAggregate& h, const Eigen::VectorXcd& phi_n) {
  LinearizedHarvest out;
  const VectorXcd A_phi = h.A_hat * phi_n;
  out.b = A_phi + h.a_hat;
  out.zeta2 = h.zeta1 - phi_n.dot(A_phi).real();
  return out;
}

double ris_norm_cap(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan, int l) {
  if (sc.mode == RisMode::Passive) return std::numeric_limits<double>::infinity();
  const double t = std::max(plan.hover_times[static_cast<std::size_t>(l)], kMinHoverTime);
  const double c = sc.total_tx_power() * stats.at(0, l).beta_t + sc.ris_noise();
  return sc.ris_energy_budget / (c * t);
}

PhaseProgram linearize_and_build(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                 const Eigen::VectorXcd& phi_n, bool elastic) {
  PhaseProgram p;
  p.hovers = plan.num_hover();
  p.elements = sc.num_elements;
  const int m = p.elements;
  auto& prog = p.program;
  p.epsilon = prog.add_variable("epsilon");
  p.first_z = prog.num_vars();
  for (int l = 0; l < p.hovers; ++l) {
    for (int i = 0; i < m; ++i) prog.add_variable("re_phi_" + std::to_string(l) + "_" + std::to_string(i));
    for (int i = 0; i < m; ++i) prog.add_variable("im_phi_" + std::to_string(l) + "_" + std::to_string(i));
  }
  auto z_first = [&](int l) { return p.first_z + 2 * m * l; };
  AffineExpr objective = AffineExpr::var(p.epsilon, -1.0);

  // Harvest: f_k(phi) >= eps.
  const auto aggregates = harvest_aggregates(sc, stats, plan);
  bool any_required = false;
  for (int k = 0; k < sc.num_users(); ++k) {
    const auto& h = aggregates[static_cast<std::size_t>(k)];
    if (!h.required) continue;
    any_required = true;
    const auto lin = linearize_harvest(h, phi_n);
    AffineExpr row(lin.zeta2);
    for (int l = 0; l < p.hovers; ++l) row += real_inner(lin.b.segment(l * m, m), z_first(l));
    row -= AffineExpr::var(p.epsilon);
    prog.add_nonneg(row, "harvest_" + std::to_string(k));
  }
  if (!any_required) prog.set_bounds(p.epsilon, std::nullopt, 0.0);

  // SINR: concave minorant >= Gamma, normalized by its own scale.
  for (int k = 0; k < sc.num_users(); ++k) {
    const double gamma = sc.sinr_threshold[static_cast<std::size_t>(k)];
    for (int l = 0; l < p.hovers; ++l) {
      const auto q = sinr_quadratic(sc, stats, k, l);
      if (!q.satisfiable) continue;
      const VectorXcd phi_l = phi_n.segment(l * m, m);
      const auto lin = linearize_sinr(q, phi_l);
      double scale = std::max(std::abs(q.Gamma), gamma * sc.noise_user);
      if (!(scale > 0.0)) scale = 1.0;
      AffineExpr row = (real_inner(lin.g, z_first(l)) + (lin.constant - q.Gamma)) * (1.0 / scale);
      if (elastic) {
        const int xi = prog.add_variable("sinr_slack_" + std::to_string(k) + "_" + std::to_string(l));
        prog.set_bounds(xi, 0.0, std::nullopt);
        p.slacks.push_back(xi);
        row += AffineExpr::var(xi);
        objective += AffineExpr::var(xi, kElasticPenalty);
      }
      const std::string label = "sinr_" + std::to_string(k) + "_" + std::to_string(l);
      if (lin.mu == 0.0) {
        prog.add_nonneg(row, label);
      } else {
        // 2 * row * (1/2) >= (mu/scale) ||z_l||^2
        std::vector<AffineExpr> rows{row, 0.5};
        const double w = std::sqrt(lin.mu / scale);
        for (int i = 0; i < 2 * m; ++i) rows.push_back(AffineExpr::var(z_first(l) + i, w));
        prog.add_rotated_soc(std::move(rows), label);
      }
    }
  }

  // RIS energy (active) or unit modulus (passive).
  for (int l = 0; l < p.hovers; ++l) {
    const std::string tag = std::to_string(l);
    if (sc.mode == RisMode::Active) {
      const double cap = ris_norm_cap(sc, stats, plan, l);
      if (cap <= 0.0) {
        for (int i = 0; i < 2 * m; ++i) prog.add_zero(AffineExpr::var(z_first(l) + i), "ris_off_" + tag);
        continue;
      }
      const double inv_r = 1.0 / std::sqrt(cap);
      std::vector<AffineExpr> rows{1.0};
      for (int i = 0; i < 2 * m; ++i) rows.push_back(AffineExpr::var(z_first(l) + i, inv_r));
      prog.add_soc(std::move(rows), "ris_energy_" + tag);
    } else {
      for (int i = 0; i < m; ++i)
        prog.add_soc({1.0, AffineExpr::var(z_first(l) + i), AffineExpr::var(z_first(l) + m + i)},
                     "unit_modulus_" + tag + "_" + std::to_string(i));
    }
  }
  prog.minimize(objective);
  return p;
}

ReflectionPlan extract_reflection(const PhaseProgram& p, const Eigen::VectorXd& x) {
  const int m = p.elements;
  ReflectionPlan out;
  out.phi.resize(static_cast<std::size_t>(p.hovers));
  for (int l = 0; l < p.hovers; ++l) {
    auto& v = out.phi[static_cast<std::size_t>(l)];
    v.resize(static_cast<std::size_t>(m));
    const int f = p.first_z + 2 * m * l;
    for (int i = 0; i < m; ++i) v[static_cast<std::size_t>(i)] = cplx(x[f + i], x[f + m + i]);
  }
  return out;
}

ReflectionPlan initial_reflection(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan) {
  ReflectionPlan out;
  const int m = sc.num_elements;
  for (int l = 0; l < plan.num_hover(); ++l) {
    int nearest = 0;
    double best = std::numeric_limits<double>::infinity();
    for (int k = 0; k < sc.num_users(); ++k) {
      const double d = std::abs(plan.hover(l) - sc.users[static_cast<std::size_t>(k)]);
      if (d < best) {
        best = d;
        nearest = k;
      }
    }
    double g = 1.0;
    if (sc.mode == RisMode::Active) g = std::sqrt(0.8 * ris_norm_cap(sc, stats, plan, l) / m);
    out.phi.push_back(channel::from_eigen(g * stats.at(nearest, l).psi));
  }
  return out;
}

ReflectionPlan project_feasible(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                                ReflectionPlan phi) {
  for (int l = 0; l < plan.num_hover(); ++l) {
    auto& v = phi.phi[static_cast<std::size_t>(l)];
    if (sc.mode == RisMode::Passive) {
      for (auto& c : v)
        if (std::abs(c) > 1.0) c /= std::abs(c);
      continue;
    }
    const double cap = ris_norm_cap(sc, stats, plan, l);
    double norm2 = 0.0;
    for (const auto& c : v) norm2 += std::norm(c);
    if (norm2 > cap) {
      const double s = cap > 0.0 ? std::sqrt(cap / norm2) : 0.0;
      for (auto& c : v) c *= s;
    }
  }
  return phi;
}

double exact_violation(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                       const ReflectionPlan& phi) {
  double worst = 0.0;
  for (int l = 0; l < plan.num_hover(); ++l) {
    const VectorXcd v = channel::to_eigen(phi.phi[static_cast<std::size_t>(l)]);
    for (int k = 0; k < sc.num_users(); ++k) {
      const double gamma = sc.sinr_threshold[static_cast<std::size_t>(k)];
      worst = std::max(worst, 1.0 - channel::sinr(sc, stats, v, k, l) / gamma);
    }
    if (sc.mode == RisMode::Passive) {
      worst = std::max(worst, v.cwiseAbs().maxCoeff() - 1.0);
    } else {
      const double draw = channel::ris_output_power(sc, stats.at(0, l).beta_t, v) *
                          plan.hover_times[static_cast<std::size_t>(l)];
      if (sc.ris_energy_budget > 0.0)
        worst = std::max(worst, draw / sc.ris_energy_budget - 1.0);
      else
        worst = std::max(worst, draw);
    }
  }
  return worst;
}

PhaseOptions phase_options(const Scenario& sc) {
  PhaseOptions o;
  o.tolerance = sc.algorithm.tolerance;
  o.max_iterations = sc.algorithm.max_phase;
  o.solver.tol = sc.algorithm.solver_tol;
  o.solver.max_iter = sc.algorithm.solver_max_iter;
  return o;
}

PhaseResult solve_phase_sca(const Scenario& sc, const ChannelStats& stats, const FlightPlan& plan,
                            const ReflectionPlan& phi_init, const PhaseOptions& options) {
  PhaseResult res;
  ReflectionPlan current = project_feasible(sc, stats, plan, phi_init);
  double f_prev = min_harvest_ratio(sc, stats, plan, current);
  bool have_best = false;
  if (exact_violation(sc, stats, plan, current) <= kFeasibilityTol) {
    res.phi = current;
    res.objective = f_prev;
    have_best = true;
  }

  for (int r = 1; r <= options.max_iterations; ++r) {
    const VectorXcd phi_n = stack(current);
    PhaseTraceRow row;
    row.r = r;
    auto prog = linearize_and_build(sc, stats, plan, phi_n, false);
    auto sol = conic::solve(prog.program, options.solver);
    if (!usable(sol)) {
      prog = linearize_and_build(sc, stats, plan, phi_n, true);
      sol = conic::solve(prog.program, options.solver);
      row.elastic = true;
    }
    row.solver_status = conic::to_string(sol.status);
    row.kkt_gap = sol.duality_gap;
    if (!usable(sol)) {
      res.trace.push_back(row);
      res.diagnostic = "phase subproblem failed at r=" + std::to_string(r) + " (" + row.solver_status + ")";
      break;
    }
    row.epsilon = sol.x[prog.epsilon];
    current = project_feasible(sc, stats, plan, extract_reflection(prog, sol.x));
    const double f_new = min_harvest_ratio(sc, stats, plan, current);
    row.min_harvest = f_new;
    res.trace.push_back(row);

    if (exact_violation(sc, stats, plan, current) <= kFeasibilityTol && (!have_best || f_new > res.objective)) {
      res.phi = current;
      res.objective = f_new;
      have_best = true;
    }
    if (std::abs(f_new - f_prev) <= options.tolerance * std::abs(f_prev)) break;
    f_prev = f_new;
  }

  res.feasible = have_best;
  if (!have_best) {
    res.phi = current;
    res.objective = min_harvest_ratio(sc, stats, plan, current);
    if (res.diagnostic.empty()) res.diagnostic = "no iterate satisfies the exact SINR and RIS constraints";
  }
  return res;
}

}  // namespace uavris::phase
