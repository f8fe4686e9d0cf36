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
#include <random>

#include "uavris/conic.hpp"

using namespace uavris;
using namespace uavris::conic;
using Catch::Approx;

TEST_CASE("conic: norm of a fixed vector") {
  ConicProgram p;
  const int x = p.add_variable("x");
  p.minimize(AffineExpr::var(x));
  p.add_soc({AffineExpr::var(x), 3.0, 4.0});
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[x] == Approx(5.0).epsilon(1e-7));
  CHECK(sol.objective == Approx(5.0).epsilon(1e-7));
}

TEST_CASE("conic: rotated cone uses the 2 u0 u1 convention") {
  ConicProgram p;
  const int z = p.add_variable("z1");
  p.minimize(AffineExpr::var(z));
  p.add_rotated_soc({AffineExpr::var(z), 1.0, 2.0});
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[z] == Approx(2.0).epsilon(1e-7));
}

TEST_CASE("conic: nonnegative row and bounds") {
  ConicProgram p;
  const int x = p.add_variable();
  p.minimize(AffineExpr::var(x));
  p.add_nonneg(AffineExpr::var(x) - 7.0);
  auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[x] == Approx(7.0).epsilon(1e-8));

  ConicProgram q;
  const int y = q.add_variable();
  q.minimize(AffineExpr::var(y, -1.0));
  q.set_bounds(y, -2.0, 3.5);
  sol = solve(q);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[y] == Approx(3.5).epsilon(1e-8));
}

TEST_CASE("conic: equality constraints") {
  // min x0 + 2 x1 s.t. x0 + x1 = 1, x >= 0  ->  (1, 0)
  ConicProgram p;
  const int a = p.add_variable(), b = p.add_variable();
  p.minimize(AffineExpr::var(a) + AffineExpr::var(b, 2.0));
  p.add_zero(AffineExpr::var(a) + AffineExpr::var(b) - 1.0);
  p.set_bounds(a, 0.0, std::nullopt);
  p.set_bounds(b, 0.0, std::nullopt);
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.objective == Approx(1.0).epsilon(1e-8));
}

TEST_CASE("conic: infeasible and unbounded statuses") {
  ConicProgram p;
  const int x = p.add_variable();
  p.minimize(AffineExpr::var(x));
  p.add_nonneg(AffineExpr::var(x) - 1.0);
  p.add_leq(AffineExpr::var(x), 0.0);
  CHECK(solve(p).status == SolveStatus::Infeasible);

  ConicProgram q;
  const int y = q.add_variable();
  q.minimize(AffineExpr::var(y));
  q.add_leq(AffineExpr::var(y), 5.0);
  CHECK(solve(q).status == SolveStatus::Unbounded);

  ConicProgram r;
  const int t = r.add_variable(), u = r.add_variable();
  r.minimize(AffineExpr::var(t));
  r.add_soc({AffineExpr::var(t), AffineExpr::var(u)});
  r.add_soc({AffineExpr(1.0), AffineExpr::var(u) - 3.0});  // |u - 3| <= 1
  r.add_leq(AffineExpr::var(t), 1.0);
  CHECK(solve(r).status == SolveStatus::Infeasible);
}

TEST_CASE("conic: malformed programs are rejected") {
  ConicProgram p;
  p.add_variable();
  p.add_soc({AffineExpr::var(0)});
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  ConicProgram q;
  q.add_variable();
  q.add_nonneg(AffineExpr::var(3));
  CHECK_THROWS_AS(solve(q), std::invalid_argument);
  ConicProgram r;
  r.add_variable();
  r.add_rotated_soc({AffineExpr::var(0), 1.0});
  CHECK_THROWS_AS(r.validate(), std::invalid_argument);
}

TEST_CASE("conic: random norm-minimization family") {
  // min |x - a| subject to a random mix of one halfspace and one hyperplane.
  std::mt19937_64 rng(20260301);
  std::normal_distribution<double> nd(0.0, 1.0);
  std::uniform_int_distribution<int> dim(2, 12);
  int checked = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = dim(rng);
    Eigen::VectorXd a(n), c(n);
    for (int i = 0; i < n; ++i) {
      a[i] = 10.0 * nd(rng);
      c[i] = nd(rng);
    }
    const bool hyperplane = trial % 2 == 0;
    const double d = c.dot(a) + 5.0 * std::abs(nd(rng)) + 0.5;
    const double expected = (d - c.dot(a)) / c.norm();

    ConicProgram p;
    const int t = p.add_variable("t");
    std::vector<AffineExpr> rows{AffineExpr::var(t)};
    AffineExpr lin;
    for (int i = 0; i < n; ++i) {
      const int xi = p.add_variable();
      rows.push_back(AffineExpr::var(xi) - a[i]);
      lin += AffineExpr::var(xi, c[i]);
    }
    p.add_soc(rows);
    if (hyperplane)
      p.add_zero(lin - d);
    else
      p.add_nonneg(lin - d);
    p.minimize(AffineExpr::var(t));
    const auto sol = solve(p);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(std::abs(sol.objective - expected) / expected <= 1e-6);
    CHECK(sol.duality_gap >= -1e-8);
    CHECK(p.max_violation(sol.x) <= 1e-6 * std::max(1.0, expected));
    ++checked;
  }
  CHECK(checked == 50);
}

TEST_CASE("conic: badly scaled rows are equilibrated") {
  // min t s.t. |1e4 x - 3e4| <= t, 1e-5 x >= 5e-5  ->  x = 5, t = 2e4
  ConicProgram p;
  const int t = p.add_variable(), x = p.add_variable();
  p.minimize(AffineExpr::var(t));
  p.add_soc({AffineExpr::var(t), AffineExpr::var(x, 1e4) - 3e4});
  p.add_nonneg(AffineExpr::var(x, 1e-5) - 5e-5);
  const auto sol = solve(p);
  REQUIRE(sol.status == SolveStatus::Optimal);
  CHECK(sol.x[x] == Approx(5.0).epsilon(1e-7));
  CHECK(sol.objective == Approx(2e4).epsilon(1e-7));
}

TEST_CASE("conic: solve is deterministic") {
  ConicProgram p;
  const int a = p.add_variable(), b = p.add_variable(), t = p.add_variable();
  p.minimize(AffineExpr::var(t) + AffineExpr::var(a, 0.3));
  p.add_soc({AffineExpr::var(t), AffineExpr::var(a) - 1.0, AffineExpr::var(b) + 2.0});
  p.add_rotated_soc({AffineExpr::var(a) + 4.0, 0.5, AffineExpr::var(b)});
  const auto s1 = solve(p), s2 = solve(p);
  REQUIRE(s1.status == SolveStatus::Optimal);
  CHECK(s1.x == s2.x);
  CHECK(s1.iterations == s2.iterations);
}

TEST_CASE("complex_embed: identity and scalar examples") {
  const auto id = complex_embed(Eigen::MatrixXcd::Identity(3, 3), Eigen::VectorXcd::Zero(3));
  CHECK(id.Q.isApprox(Eigen::MatrixXd::Identity(6, 6)));
  CHECK(id.v.isZero());

  Eigen::MatrixXcd H(1, 1);
  H(0, 0) = 2.0;
  Eigen::VectorXcd u(1);
  u[0] = cplx(1.0, 1.0);
  const auto rq = complex_embed(H, u);
  Eigen::VectorXcd phi(1);
  phi[0] = 1.0;
  CHECK(rq.evaluate(stack_real(phi)) == Approx(4.0));
}

TEST_CASE("complex_embed: random Hermitian forms agree") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  Eigen::MatrixXcd B(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) B(i, j) = cplx(nd(rng), nd(rng));
  const Eigen::MatrixXcd H = B + B.adjoint();
  Eigen::VectorXcd u(3);
  for (int i = 0; i < 3; ++i) u[i] = cplx(nd(rng), nd(rng));
  const auto rq = complex_embed(H, u);
  CHECK((rq.Q - rq.Q.transpose()).norm() == 0.0);
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXcd phi(3);
    for (int i = 0; i < 3; ++i) phi[i] = cplx(nd(rng), nd(rng));
    const double complex_form = phi.dot(H * phi).real() + 2.0 * u.dot(phi).real();
    CHECK(std::abs(rq.evaluate(stack_real(phi)) - complex_form) <= 1e-12 * std::max(1.0, std::abs(complex_form)));
    CHECK(unstack_real(stack_real(phi)).isApprox(phi));
  }
  // PSD is preserved: B B^H embeds to a PSD matrix.
  const auto psd = complex_embed(B * B.adjoint(), u);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(psd.Q);
  CHECK(es.eigenvalues().minCoeff() >= -1e-12);
}

TEST_CASE("complex_embed: non-Hermitian input is rejected") {
  Eigen::MatrixXcd H(2, 2);
  H << 1.0, cplx(0, 1), cplx(0, 1), 1.0;
  CHECK_THROWS_AS(complex_embed(H, Eigen::VectorXcd::Zero(2)), std::invalid_argument);
}

TEST_CASE("conic: debug dump is structured") {
  ConicProgram p;
  const int x = p.add_variable("x");
  p.minimize(AffineExpr::var(x));
  p.add_soc({AffineExpr::var(x), 3.0, 4.0}, "norm");
  const std::string text = p.dump();
  CHECK(text.find("\"second_order\"") != std::string::npos);
  CHECK(text.find("\"norm\"") != std::string::npos);
}
