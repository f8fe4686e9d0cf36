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
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "uavris/scenario.hpp"

namespace uavris::conic {

/// Sparse affine expression sum_i coef_i * x_{var_i} + constant.
struct AffineExpr {
  std::vector<std::pair<int, double>> terms;
  double constant = 0.0;

  AffineExpr() = default;
  AffineExpr(double c) : constant(c) {}  // NOLINT(google-explicit-constructor)

  static AffineExpr var(int index, double coef = 1.0) {
    AffineExpr e;
    e.terms.emplace_back(index, coef);
    return e;
  }

  AffineExpr& operator+=(const AffineExpr& o) {
    terms.insert(terms.end(), o.terms.begin(), o.terms.end());
    constant += o.constant;
    return *this;
  }
  AffineExpr& operator-=(const AffineExpr& o) { return *this += o * -1.0; }
  AffineExpr& operator*=(double s) {
    for (auto& t : terms) t.second *= s;
    constant *= s;
    return *this;
  }
  friend AffineExpr operator+(AffineExpr a, const AffineExpr& b) { return a += b; }
  friend AffineExpr operator-(AffineExpr a, const AffineExpr& b) { return a -= b; }
  friend AffineExpr operator*(AffineExpr a, double s) { return a *= s; }
  friend AffineExpr operator*(double s, AffineExpr a) { return a *= s; }

  double evaluate(const Eigen::VectorXd& x) const;
};

/// Cone conventions (fixed for every builder in this library):
///   Zero:               u = 0
///   Nonnegative:        u >= 0
///   SecondOrder:        u_0 >= ||(u_1, ..., u_{m-1})||_2,               m >= 2
///   RotatedSecondOrder: 2 u_0 u_1 >= ||(u_2, ..., u_{m-1})||_2^2, u_0, u_1 >= 0,  m >= 3
enum class Cone { Zero, Nonnegative, SecondOrder, RotatedSecondOrder };

std::string to_string(Cone c);

struct ConeConstraint {
  Cone cone;
  std::vector<AffineExpr> rows;
  std::string label;
};

/// minimize c^T x + c_0 subject to (affine map) in (cone) for every constraint.
class ConicProgram {
 public:
  int add_variable(std::string name = {});
  int num_vars() const { return static_cast<int>(names_.size()); }
  const std::string& name(int i) const { return names_[static_cast<std::size_t>(i)]; }

  void minimize(AffineExpr objective) { objective_ = std::move(objective); }
  const AffineExpr& objective() const { return objective_; }

  void add_zero(AffineExpr e, std::string label = {});
  void add_nonneg(AffineExpr e, std::string label = {});
  /// lhs <= rhs, stored as rhs - lhs >= 0.
  void add_leq(const AffineExpr& lhs, const AffineExpr& rhs, std::string label = {});
  void add_soc(std::vector<AffineExpr> rows, std::string label = {});
  void add_rotated_soc(std::vector<AffineExpr> rows, std::string label = {});
  void set_bounds(int var, std::optional<double> lower, std::optional<double> upper);

  const std::vector<ConeConstraint>& constraints() const { return constraints_; }
  const std::vector<std::optional<double>>& lower_bounds() const { return lower_; }
  const std::vector<std::optional<double>>& upper_bounds() const { return upper_; }

  /// Throws std::invalid_argument on bad indices or undersized cone blocks.
  void validate() const;

  double objective_value(const Eigen::VectorXd& x) const { return objective_.evaluate(x); }
  /// Largest violation of any constraint or bound at x (0 when feasible).
  double max_violation(const Eigen::VectorXd& x) const;

  /// Structured debug dump (JSON) for external cross-checking.
  std::string dump() const;

 private:
  void add(Cone cone, std::vector<AffineExpr> rows, std::string label);

  std::vector<std::string> names_;
  std::vector<std::optional<double>> lower_, upper_;
  AffineExpr objective_;
  std::vector<ConeConstraint> constraints_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIter };

std::string to_string(SolveStatus s);

struct SolverSettings {
  double tol = 1e-8;
  int max_iter = 200;
};

/// Residuals and gap are measured on the equilibrated problem the solver works on,
/// relative to the norms of its data (see README for the exact definitions).
struct ConicSolution {
  SolveStatus status = SolveStatus::MaxIter;
  Eigen::VectorXd x;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double duality_gap = 0.0;
  int iterations = 0;
};

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling.
/// Deterministic and reentrant; single-threaded per call.
ConicSolution solve(const ConicProgram& program, const SolverSettings& settings = {});

/// Real embedding of the complex form phi^H H phi + 2 Re{u^H phi}: with z = [Re phi; Im phi],
/// the form equals z^T Q z + 2 v^T z.
struct RealQuadratic {
  Eigen::MatrixXd Q;
  Eigen::VectorXd v;

  double evaluate(const Eigen::VectorXd& z) const { return z.dot(Q * z) + 2.0 * v.dot(z); }
};

/// Throws std::invalid_argument when H is not Hermitian.
RealQuadratic complex_embed(const Eigen::MatrixXcd& H, const Eigen::VectorXcd& u);

Eigen::VectorXd stack_real(const Eigen::VectorXcd& phi);
Eigen::VectorXcd unstack_real(const Eigen::VectorXd& z);

}  // namespace uavris::conic
