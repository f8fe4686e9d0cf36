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
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "uavris/conic.hpp"

namespace uavris::conic {

double AffineExpr::evaluate(const Eigen::VectorXd& x) const {
  double v = constant;
  for (const auto& [i, c] : terms) v += c * x[i];
  return v;
}

std::string to_string(Cone c) {
  switch (c) {
    case Cone::Zero: return "zero";
    case Cone::Nonnegative: return "nonnegative";
    case Cone::SecondOrder: return "second_order";
    case Cone::RotatedSecondOrder: return "rotated_second_order";
  }
  return "?";
}

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::Infeasible: return "infeasible";
    case SolveStatus::Unbounded: return "unbounded";
    case SolveStatus::MaxIter: return "max_iter";
  }
  return "?";
}

int ConicProgram::add_variable(std::string name) {
  if (name.empty()) name = "x" + std::to_string(names_.size());
  names_.push_back(std::move(name));
  lower_.emplace_back();
  upper_.emplace_back();
  return num_vars() - 1;
}

void ConicProgram::add(Cone cone, std::vector<AffineExpr> rows, std::string label) {
  constraints_.push_back({cone, std::move(rows), std::move(label)});
}

void ConicProgram::add_zero(AffineExpr e, std::string label) { add(Cone::Zero, {std::move(e)}, std::move(label)); }

void ConicProgram::add_nonneg(AffineExpr e, std::string label) {
  add(Cone::Nonnegative, {std::move(e)}, std::move(label));
}

void ConicProgram::add_leq(const AffineExpr& lhs, const AffineExpr& rhs, std::string label) {
  add_nonneg(rhs - lhs, std::move(label));
}

void ConicProgram::add_soc(std::vector<AffineExpr> rows, std::string label) {
  add(Cone::SecondOrder, std::move(rows), std::move(label));
}

void ConicProgram::add_rotated_soc(std::vector<AffineExpr> rows, std::string label) {
  add(Cone::RotatedSecondOrder, std::move(rows), std::move(label));
}

void ConicProgram::set_bounds(int var, std::optional<double> lower, std::optional<double> upper) {
  lower_.at(static_cast<std::size_t>(var)) = lower;
  upper_.at(static_cast<std::size_t>(var)) = upper;
}

void ConicProgram::validate() const {
  const int n = num_vars();
  auto check_expr = [n](const AffineExpr& e) {
    for (const auto& [i, c] : e.terms) {
      if (i < 0 || i >= n) throw std::invalid_argument("affine map references unknown variable " + std::to_string(i));
      if (!std::isfinite(c)) throw std::invalid_argument("non-finite coefficient");
    }
    if (!std::isfinite(e.constant)) throw std::invalid_argument("non-finite constant");
  };
  check_expr(objective_);
  for (const auto& con : constraints_) {
    if (con.rows.empty()) throw std::invalid_argument("empty constraint '" + con.label + "'");
    if (con.cone == Cone::SecondOrder && con.rows.size() < 2)
      throw std::invalid_argument("second-order cone needs dimension >= 2 ('" + con.label + "')");
    if (con.cone == Cone::RotatedSecondOrder && con.rows.size() < 3)
      throw std::invalid_argument("rotated cone needs dimension >= 3 ('" + con.label + "')");
    for (const auto& r : con.rows) check_expr(r);
  }
}

double ConicProgram::max_violation(const Eigen::VectorXd& x) const {
  double worst = 0.0;
  for (const auto& con : constraints_) {
    Eigen::VectorXd u(static_cast<Eigen::Index>(con.rows.size()));
    for (std::size_t i = 0; i < con.rows.size(); ++i) u[static_cast<Eigen::Index>(i)] = con.rows[i].evaluate(x);
    switch (con.cone) {
      case Cone::Zero: worst = std::max(worst, u.cwiseAbs().maxCoeff()); break;
      case Cone::Nonnegative: worst = std::max(worst, -u.minCoeff()); break;
      case Cone::SecondOrder: worst = std::max(worst, u.tail(u.size() - 1).norm() - u[0]); break;
      case Cone::RotatedSecondOrder: {
        const double r = std::hypot((u[0] - u[1]) / std::sqrt(2.0), u.tail(u.size() - 2).norm());
        worst = std::max({worst, r - (u[0] + u[1]) / std::sqrt(2.0), -u[0], -u[1]});
        break;
      }
    }
  }
  for (int i = 0; i < num_vars(); ++i) {
    if (lower_[static_cast<std::size_t>(i)]) worst = std::max(worst, *lower_[static_cast<std::size_t>(i)] - x[i]);
    if (upper_[static_cast<std::size_t>(i)]) worst = std::max(worst, x[i] - *upper_[static_cast<std::size_t>(i)]);
  }
  return worst;
}

std::string ConicProgram::dump() const {
  using nlohmann::json;
  auto expr = [](const AffineExpr& e) {
    json terms = json::array();
    for (const auto& [i, c] : e.terms) terms.push_back({i, c});
    return json{{"terms", terms}, {"constant", e.constant}};
  };
  json vars = json::array();
  for (int i = 0; i < num_vars(); ++i) {
    json v{{"name", names_[static_cast<std::size_t>(i)]}};
    if (lower_[static_cast<std::size_t>(i)]) v["lower"] = *lower_[static_cast<std::size_t>(i)];
    if (upper_[static_cast<std::size_t>(i)]) v["upper"] = *upper_[static_cast<std::size_t>(i)];
    vars.push_back(v);
  }
  json cons = json::array();
  for (const auto& c : constraints_) {
    json rows = json::array();
    for (const auto& r : c.rows) rows.push_back(expr(r));
    cons.push_back({{"cone", to_string(c.cone)}, {"label", c.label}, {"rows", rows}});
  }
  json root{{"sense", "minimize"}, {"variables", vars}, {"objective", expr(objective_)}, {"constraints", cons}};
  return root.dump(1);
}

RealQuadratic complex_embed(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& u) {
  if (H.rows() != H.cols() || H.rows() != u.size()) throw std::invalid_argument("complex_embed: shape mismatch");
  const double scale = std::max(1.0, H.cwiseAbs().maxCoeff());
  if ((H - H.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw std::invalid_argument("complex_embed: matrix is not Hermitian");
  const Eigen::Index m = H.rows();
  RealQuadratic out;
  const Eigen::MatrixXd re = H.real(), im = H.imag();
  out.Q.resize(2 * m, 2 * m);
  out.Q << re, -im, im, re;
  out.Q = 0.5 * (out.Q + out.Q.transpose()).eval();
  out.v.resize(2 * m);
  out.v << u.real(), u.imag();
  return out;
}

Eigen::VectorXd stack_real(const Eigen::VectorXcd& phi) {
  Eigen::VectorXd z(2 * phi.size());
  z << phi.real(), phi.imag();
  return z;
}

Eigen::VectorXcd unstack_real(const Eigen::VectorXd& z) {
  const Eigen::Index m = z.size() / 2;
  Eigen::VectorXcd phi(m);
  for (Eigen::Index i = 0; i < m; ++i) phi[i] = cplx(z[i], z[m + i]);
  return phi;
}

}  // namespace uavris::conic
