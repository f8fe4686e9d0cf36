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
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "uavris/conic.hpp"

namespace uavris::conic {
namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

constexpr double kInvSqrt2 = 0.70710678118654752440;

// Standard form: minimize c^T x  s.t.  A x = b,  s = h - G x in K,
// K = R_+^l x Q^{q_1} x ... (nonnegative rows first).
struct Standard {
  int n = 0;
  MatrixXd A;
  VectorXd b;
  MatrixXd G;
  VectorXd h;
  VectorXd c;
  double c0 = 0.0;
  int l = 0;
  std::vector<int> q;
  int m() const { return static_cast<int>(h.size()); }
};

struct RowBuilder {
  int n;
  std::vector<VectorXd> rows;
  std::vector<double> consts;
  void push(const AffineExpr& e) {
    VectorXd r = VectorXd::Zero(n);
    for (const auto& [i, c] : e.terms) r[i] += c;
    rows.push_back(std::move(r));
    consts.push_back(e.constant);
  }
};

Standard lower(const ConicProgram& p) {
  Standard s;
  s.n = p.num_vars();
  s.c = VectorXd::Zero(s.n);
  for (const auto& [i, c] : p.objective().terms) s.c[i] += c;
  s.c0 = p.objective().constant;

  RowBuilder eq{s.n, {}, {}}, cone{s.n, {}, {}};
  for (const auto& con : p.constraints()) {
    if (con.cone == Cone::Zero)
      for (const auto& r : con.rows) eq.push(r);
    else if (con.cone == Cone::Nonnegative)
      for (const auto& r : con.rows) cone.push(r);
  }
  for (int i = 0; i < s.n; ++i) {
    if (const auto& lo = p.lower_bounds()[static_cast<std::size_t>(i)]) cone.push(AffineExpr::var(i) - *lo);
    if (const auto& hi = p.upper_bounds()[static_cast<std::size_t>(i)]) cone.push(AffineExpr(*hi) - AffineExpr::var(i));
  }
  s.l = static_cast<int>(cone.rows.size());
  for (const auto& con : p.constraints()) {
    if (con.cone == Cone::SecondOrder) {
      for (const auto& r : con.rows) cone.push(r);
      s.q.push_back(static_cast<int>(con.rows.size()));
    } else if (con.cone == Cone::RotatedSecondOrder) {
      // 2 u0 u1 >= |w|^2  <=>  (u0+u1)/sqrt2 >= |((u0-u1)/sqrt2, w)|
      cone.push((con.rows[0] + con.rows[1]) * kInvSqrt2);
      cone.push((con.rows[0] - con.rows[1]) * kInvSqrt2);
      for (std::size_t i = 2; i < con.rows.size(); ++i) cone.push(con.rows[i]);
      s.q.push_back(static_cast<int>(con.rows.size()));
    }
  }
  const auto pe = static_cast<Eigen::Index>(eq.rows.size());
  const auto me = static_cast<Eigen::Index>(cone.rows.size());
  s.A.resize(pe, s.n);
  s.b.resize(pe);
  for (Eigen::Index i = 0; i < pe; ++i) {
    s.A.row(i) = eq.rows[static_cast<std::size_t>(i)].transpose();
    s.b[i] = -eq.consts[static_cast<std::size_t>(i)];
  }
  s.G.resize(me, s.n);
  s.h.resize(me);
  for (Eigen::Index i = 0; i < me; ++i) {
    s.G.row(i) = -cone.rows[static_cast<std::size_t>(i)].transpose();
    s.h[i] = cone.consts[static_cast<std::size_t>(i)];
  }
  return s;
}

// Ruiz equilibration; rows of one SOC block share a scale factor so the cone is preserved.
struct Scaling {
  VectorXd col, row_a, row_g;
  double obj = 1.0, rhs = 1.0;
};

Scaling equilibrate(Standard& s) {
  Scaling sc;
  sc.col = VectorXd::Ones(s.n);
  sc.row_a = VectorXd::Ones(s.A.rows());
  sc.row_g = VectorXd::Ones(s.G.rows());
  if (s.n == 0) return sc;
  for (int it = 0; it < 25; ++it) {
    double worst = 0.0;
    VectorXd ra = VectorXd::Ones(s.A.rows()), rg = VectorXd::Ones(s.G.rows());
    for (Eigen::Index i = 0; i < s.A.rows(); ++i) {
      const double v = s.A.row(i).cwiseAbs().maxCoeff();
      if (v > 0) ra[i] = 1.0 / std::sqrt(v);
      if (v > 0) worst = std::max(worst, std::abs(1.0 - v));
    }
    for (int i = 0; i < s.l; ++i) {
      const double v = s.G.row(i).cwiseAbs().maxCoeff();
      if (v > 0) rg[i] = 1.0 / std::sqrt(v);
      if (v > 0) worst = std::max(worst, std::abs(1.0 - v));
    }
    int off = s.l;
    for (int d : s.q) {
      const double v = s.G.middleRows(off, d).cwiseAbs().maxCoeff();
      if (v > 0) {
        rg.segment(off, d).setConstant(1.0 / std::sqrt(v));
        worst = std::max(worst, std::abs(1.0 - v));
      }
      off += d;
    }
    s.A = ra.asDiagonal() * s.A;
    s.G = rg.asDiagonal() * s.G;
    sc.row_a.array() *= ra.array();
    sc.row_g.array() *= rg.array();

    VectorXd cs = VectorXd::Ones(s.n);
    for (int j = 0; j < s.n; ++j) {
      double v = 0.0;
      if (s.A.rows() > 0) v = s.A.col(j).cwiseAbs().maxCoeff();
      if (s.G.rows() > 0) v = std::max(v, s.G.col(j).cwiseAbs().maxCoeff());
      if (v > 0) {
        cs[j] = 1.0 / std::sqrt(v);
        worst = std::max(worst, std::abs(1.0 - v));
      }
    }
    s.A = s.A * cs.asDiagonal();
    s.G = s.G * cs.asDiagonal();
    sc.col.array() *= cs.array();
    if (worst < 1e-2) break;
  }
  s.b.array() *= sc.row_a.array();
  s.h.array() *= sc.row_g.array();
  s.c.array() *= sc.col.array();

  const double cn = s.c.size() ? s.c.cwiseAbs().maxCoeff() : 0.0;
  if (cn > 0) sc.obj = 1.0 / cn;
  double rn = 0.0;
  if (s.b.size()) rn = s.b.cwiseAbs().maxCoeff();
  if (s.h.size()) rn = std::max(rn, s.h.cwiseAbs().maxCoeff());
  if (rn > 0) sc.rhs = 1.0 / rn;
  s.c *= sc.obj;
  s.b *= sc.rhs;
  s.h *= sc.rhs;
  return sc;
}

// ---- cone algebra --------------------------------------------------------------------------

struct Layout {
  int l = 0;
  std::vector<int> q;
  int degree() const { return l + static_cast<int>(q.size()); }
};

template <class F>
void for_blocks(const Layout& k, F&& f) {
  int off = k.l;
  for (int d : k.q) {
    f(off, d);
    off += d;
  }
}

VectorXd identity(const Layout& k, int m) {
  VectorXd e = VectorXd::Zero(m);
  e.head(k.l).setOnes();
  for_blocks(k, [&](int off, int) { e[off] = 1.0; });
  return e;
}

// Smallest "eigenvalue" of u with respect to the cone.
double min_eig(const Layout& k, const VectorXd& u) {
  double v = std::numeric_limits<double>::infinity();
  if (k.l > 0) v = u.head(k.l).minCoeff();
  for_blocks(k, [&](int off, int d) { v = std::min(v, u[off] - u.segment(off + 1, d - 1).norm()); });
  return v;
}

VectorXd jprod(const Layout& k, const VectorXd& u, const VectorXd& v) {
  VectorXd w(u.size());
  w.head(k.l) = u.head(k.l).cwiseProduct(v.head(k.l));
  for_blocks(k, [&](int off, int d) {
    w[off] = u.segment(off, d).dot(v.segment(off, d));
    w.segment(off + 1, d - 1) = u[off] * v.segment(off + 1, d - 1) + v[off] * u.segment(off + 1, d - 1);
  });
  return w;
}

// Solves lambda o u = v for u.
VectorXd jdiv(const Layout& k, const VectorXd& lam, const VectorXd& v) {
  VectorXd u(v.size());
  u.head(k.l) = v.head(k.l).cwiseQuotient(lam.head(k.l));
  for_blocks(k, [&](int off, int d) {
    const double l0 = lam[off];
    const auto l1 = lam.segment(off + 1, d - 1);
    const double det = l0 * l0 - l1.squaredNorm();
    const double u0 = (l0 * v[off] - l1.dot(v.segment(off + 1, d - 1))) / det;
    u[off] = u0;
    u.segment(off + 1, d - 1) = (v.segment(off + 1, d - 1) - u0 * l1) / l0;
  });
  return u;
}

// Largest alpha with u + alpha du in the cone (infinity when unbounded).
double max_step(const Layout& k, const VectorXd& u, const VectorXd& du) {
  double a = std::numeric_limits<double>::infinity();
  for (int i = 0; i < k.l; ++i)
    if (du[i] < 0) a = std::min(a, -u[i] / du[i]);
  for_blocks(k, [&](int off, int d) {
    const double u0 = u[off], d0 = du[off];
    const auto u1 = u.segment(off + 1, d - 1);
    const auto d1 = du.segment(off + 1, d - 1);
    // (u0 + a d0)^2 - |u1 + a d1|^2 >= 0 and u0 + a d0 >= 0
    const double qa = d0 * d0 - d1.squaredNorm();
    const double qb = 2.0 * (u0 * d0 - u1.dot(d1));
    const double qc = std::max(0.0, u0 * u0 - u1.squaredNorm());
    double r = std::numeric_limits<double>::infinity();
    if (d0 < 0) r = -u0 / d0;
    if (std::abs(qa) < 1e-300) {
      if (qb < 0) r = std::min(r, -qc / qb);
    } else {
      const double disc = qb * qb - 4.0 * qa * qc;
      if (disc >= 0) {
        const double sq = std::sqrt(disc);
        // numerically stable roots
        const double t = -0.5 * (qb + std::copysign(sq, qb));
        const double r1 = t / qa;
        const double r2 = (t != 0.0) ? qc / t : std::numeric_limits<double>::infinity();
        for (double root : {r1, r2})
          if (root > 0) r = std::min(r, root);
      }
    }
    a = std::min(a, r);
  });
  return a;
}

// Nesterov-Todd scaling W with W^{-T} s = W z = lambda.
struct NtScaling {
  const Layout* k = nullptr;
  VectorXd dl;  // nonnegative part: sqrt(s/z)
  std::vector<double> beta;
  std::vector<VectorXd> refl;
  VectorXd lambda;

  void compute(const Layout& lay, const VectorXd& s, const VectorXd& z) {
    k = &lay;
    dl = (s.head(lay.l).array() / z.head(lay.l).array()).sqrt();
    beta.clear();
    refl.clear();
    for_blocks(lay, [&](int off, int d) {
      const VectorXd sb = s.segment(off, d), zb = z.segment(off, d);
      const double sjs = std::max(sb[0] * sb[0] - sb.tail(d - 1).squaredNorm(), 1e-300);
      const double zjz = std::max(zb[0] * zb[0] - zb.tail(d - 1).squaredNorm(), 1e-300);
      const VectorXd sn = sb / std::sqrt(sjs), zn = zb / std::sqrt(zjz);
      const double g = std::sqrt(std::max((1.0 + sn.dot(zn)) / 2.0, 1e-300));
      VectorXd w(d);
      w[0] = (sn[0] + zn[0]) / (2.0 * g);
      w.tail(d - 1) = (sn.tail(d - 1) - zn.tail(d - 1)) / (2.0 * g);
      // Hyperbolic reflector v with W = beta (2 v v^T - J).
      VectorXd v = w;
      v[0] += 1.0;
      v /= std::sqrt(2.0 * (w[0] + 1.0));
      beta.push_back(std::pow(sjs / zjz, 0.25));
      refl.push_back(std::move(v));
    });
    lambda = apply(z);
  }

  void identity(const Layout& lay, int m) {
    k = &lay;
    dl = VectorXd::Ones(lay.l);
    beta.assign(lay.q.size(), 1.0);
    refl.clear();
    for (int d : lay.q) {
      VectorXd w = VectorXd::Zero(d);
      w[0] = 1.0;
      refl.push_back(std::move(w));
    }
    lambda = VectorXd::Zero(m);
  }

  // W x for a column block (works on vectors and matrices).
  MatrixXd apply(const MatrixXd& x, bool inverse = false) const {
    MatrixXd y(x.rows(), x.cols());
    if (inverse)
      y.topRows(k->l) = dl.cwiseInverse().asDiagonal() * x.topRows(k->l);
    else
      y.topRows(k->l) = dl.asDiagonal() * x.topRows(k->l);
    std::size_t b = 0;
    for_blocks(*k, [&](int off, int d) {
      const auto xb = x.middleRows(off, d);
      VectorXd w = refl[b];
      MatrixXd jx = xb;
      jx.bottomRows(d - 1) *= -1.0;
      double bt = beta[b];
      if (inverse) {
        w.tail(d - 1) *= -1.0;  // J refl
        bt = 1.0 / bt;
      }
      y.middleRows(off, d) = bt * (2.0 * w * (w.transpose() * xb) - jx);
      ++b;
    });
    return y;
  }
  VectorXd apply(const VectorXd& x, bool inverse = false) const {
    return apply(MatrixXd(x), inverse).col(0);
  }
};

double inf(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

// Reduced KKT system for [0 A^T G^T; A 0 0; G 0 -W^T W].
class Kkt {
 public:
  Kkt(const Standard& s) : s_(s) {}

  void factor(const NtScaling& w) {
    w_ = &w;
    Gt_ = w.apply(s_.G, true);  // W^{-1} G
    if (blocks_.empty()) index_blocks(*w.k);
    // Each cone block only touches its own columns, so H is assembled block by block.
    MatrixXd H = MatrixXd::Zero(s_.n, s_.n);
    for (const auto& b : blocks_) {
      const MatrixXd B = Gt_(Eigen::seqN(b.row, b.rows), b.cols);
      const MatrixXd P = B.transpose() * B;
      H(b.cols, b.cols) += P;
    }
    // Regularize each column relative to its own diagonal; a global shift swamps small pivots.
    H.diagonal().array() += 1e-13 * H.diagonal().array().abs() + 1e-15;
    delta_ = 1e-13;
    const int p = static_cast<int>(s_.A.rows());
    if (p == 0) {
      ldlt_.compute(H);
    } else {
      MatrixXd K = MatrixXd::Zero(s_.n + p, s_.n + p);
      K.topLeftCorner(s_.n, s_.n) = H;
      K.topRightCorner(s_.n, p) = s_.A.transpose();
      K.bottomLeftCorner(p, s_.n) = s_.A;
      K.bottomRightCorner(p, p).diagonal().setConstant(-delta_);
      lu_.compute(K);
    }
  }

  // Solves the full system with iterative refinement.
  void solve(const VectorXd& bx, const VectorXd& by, const VectorXd& bz, VectorXd& x, VectorXd& y,
             VectorXd& z) const {
    raw(bx, by, bz, x, y, z);
    double prev = std::numeric_limits<double>::infinity();
    for (int it = 0; it < 10; ++it) {
      const VectorXd ex = bx - (s_.A.transpose() * y + s_.G.transpose() * z);
      const VectorXd ey = by - s_.A * x;
      const VectorXd ez = bz - (s_.G * x - w_->apply(w_->apply(z)));
      const double err = std::max({inf(ex), inf(ey), inf(ez)});
      if (!(err > 1e-15) || err > 0.5 * prev) break;
      prev = err;
      VectorXd dx, dy, dz;
      raw(ex, ey, ez, dx, dy, dz);
      x += dx;
      y += dy;
      z += dz;
    }
  }

 private:
  struct Block {
    int row = 0, rows = 0;
    std::vector<int> cols;
  };

  void index_blocks(const Layout& k) {
    auto add = [&](int row, int rows) {
      Block b{row, rows, {}};
      for (int c = 0; c < s_.n; ++c)
        if (s_.G.block(row, c, rows, 1).cwiseAbs().maxCoeff() > 0.0) b.cols.push_back(c);
      if (!b.cols.empty()) blocks_.push_back(std::move(b));
    };
    for (int i = 0; i < k.l; ++i) add(i, 1);
    for_blocks(k, add);
  }

  void raw(const VectorXd& bx, const VectorXd& by, const VectorXd& bz, VectorXd& x, VectorXd& y,
           VectorXd& z) const {
    // z = W^{-T} W^{-1} (G x - bz); substitute into the first block.
    const VectorXd bzt = w_->apply(bz, true);
    const VectorXd rx = bx + Gt_.transpose() * bzt;
    const int p = static_cast<int>(s_.A.rows());
    if (p == 0) {
      x = ldlt_.solve(rx);
      y.resize(0);
    } else {
      VectorXd rhs(s_.n + p);
      rhs << rx, by;
      const VectorXd sol = lu_.solve(rhs);
      x = sol.head(s_.n);
      y = sol.tail(p);
    }
    z = w_->apply(VectorXd(Gt_ * x - bzt), true);
  }

  const Standard& s_;
  const NtScaling* w_ = nullptr;
  MatrixXd Gt_;
  std::vector<Block> blocks_;
  double delta_ = 0.0;
  Eigen::LDLT<MatrixXd> ldlt_;
  Eigen::PartialPivLU<MatrixXd> lu_;
};

double inf_norm(const VectorXd& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

}  // namespace

ConicSolution solve(const ConicProgram& program, const SolverSettings& settings) {
  program.validate();
  Standard s = lower(program);
  const Standard original = s;
  const Scaling scl = equilibrate(s);
  const Layout k{s.l, s.q};
  const int n = s.n, p = static_cast<int>(s.A.rows()), m = s.m();
  const double tol = settings.tol;

  ConicSolution out;
  auto finish = [&](const VectorXd& xs, SolveStatus st) {
    out.status = st;
    out.x = xs.cwiseProduct(scl.col) / scl.rhs;
    out.objective = original.c.dot(out.x) + original.c0;
    return out;
  };

  if (m == 0) {
    // Pure equality-constrained LP: only bounded when c lies in the row space of A.
    if (n == 0) return finish(VectorXd::Zero(0), SolveStatus::Optimal);
    Eigen::CompleteOrthogonalDecomposition<MatrixXd> cod(s.A);
    VectorXd x = p ? VectorXd(cod.solve(s.b)) : VectorXd::Zero(n);
    const VectorXd y = p ? VectorXd(Eigen::CompleteOrthogonalDecomposition<MatrixXd>(s.A.transpose()).solve(-s.c))
                         : VectorXd::Zero(0);
    const double dres = inf_norm(s.c + (p ? VectorXd(s.A.transpose() * y) : VectorXd::Zero(n)));
    const double pres = p ? inf_norm(s.A * x - s.b) : 0.0;
    out.primal_residual = pres;
    out.dual_residual = dres;
    if (pres > 1e-9 * std::max(1.0, inf_norm(s.b))) return finish(x, SolveStatus::Infeasible);
    if (dres > 1e-9) return finish(x, SolveStatus::Unbounded);
    return finish(x, SolveStatus::Optimal);
  }

  const VectorXd e = identity(k, m);
  NtScaling W;
  Kkt kkt(s);

  // Initial point from the W = I system.
  VectorXd x, y, z, sv;
  {
    W.identity(k, m);
    kkt.factor(W);
    VectorXd xp, yp, zp;
    kkt.solve(VectorXd::Zero(n), s.b, s.h, xp, yp, zp);
    sv = -zp;
    const double as = min_eig(k, sv);
    if (as <= 0) sv += (1.0 - as) * e;
    x = xp;
    VectorXd xd, yd, zd;
    kkt.solve(-s.c, VectorXd::Zero(p), VectorXd::Zero(m), xd, yd, zd);
    z = zd;
    const double az = min_eig(k, z);
    if (az <= 0) z += (1.0 - az) * e;
    y = yd;
  }
  double tau = 1.0, kap = 1.0;

  const double nb = std::max(1.0, std::hypot(s.b.norm(), s.h.norm()));
  const double nc = std::max(1.0, s.c.norm());
  const int deg = k.degree();

  struct Best {
    VectorXd x;
    double merit = std::numeric_limits<double>::infinity();
    double pres = 0, dres = 0, gap = 0;
  } best;

  int stalls = 0;
  for (int it = 0; it <= settings.max_iter; ++it) {
    out.iterations = it;
    const VectorXd r1 = s.A.transpose() * y + s.G.transpose() * z + s.c * tau;
    const VectorXd r2 = -s.A * x + s.b * tau;
    const VectorXd r3 = -s.G * x + s.h * tau - sv;
    const double cx = s.c.dot(x), by = s.b.dot(y), hz = s.h.dot(z);
    const double r4 = -cx - by - hz - kap;

    const double pres = std::hypot(r2.norm(), r3.norm()) / tau / nb;
    const double dres = r1.norm() / tau / nc;
    const double gap_abs = sv.dot(z) / (tau * tau);
    const double pcost = cx / tau;
    const double rgap = gap_abs / std::max(1.0, std::abs(pcost));
    out.primal_residual = pres;
    out.dual_residual = dres;
    out.duality_gap = rgap;

    const double merit = std::max({pres, dres, rgap});
    if (std::isfinite(merit) && merit < best.merit) {
      best.x = x / tau;
      best.merit = merit;
      best.pres = pres;
      best.dres = dres;
      best.gap = rgap;
    }
    if (pres <= tol && dres <= tol && rgap <= tol) return finish(x / tau, SolveStatus::Optimal);

    const double dual_obj = -(by + hz);
    if (dual_obj > 0) {
      const double cert = (s.A.transpose() * y + s.G.transpose() * z).norm() / dual_obj;
      if (cert <= tol) {
        out.primal_residual = pres;
        return finish(VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN()), SolveStatus::Infeasible);
      }
    }
    if (cx < 0) {
      const double cert = std::max((s.A * x).norm(), (s.G * x + sv).norm()) / (-cx);
      if (cert <= tol) {
        return finish(VectorXd::Constant(n, std::numeric_limits<double>::quiet_NaN()), SolveStatus::Unbounded);
      }
    }
    if (it == settings.max_iter) break;

    W.compute(k, sv, z);
    if (!W.lambda.allFinite()) break;
    kkt.factor(W);
    const VectorXd& lam = W.lambda;
    const double mu = (sv.dot(z) + tau * kap) / (deg + 1);

    VectorXd x1, y1, z1;
    kkt.solve(-s.c, s.b, s.h, x1, y1, z1);
    const double den_base = kap / tau - (s.c.dot(x1) + s.b.dot(y1) + s.h.dot(z1));

    auto direction = [&](double f, const VectorXd& ds, double dk, VectorXd& dx, VectorXd& dy, VectorXd& dz,
                         VectorXd& dsv, double& dt, double& dkap) {
      const VectorXd lds = jdiv(k, lam, ds);
      VectorXd x2, y2, z2;
      kkt.solve(-f * r1, f * r2, f * r3 - W.apply(lds), x2, y2, z2);
      dt = (s.c.dot(x2) + s.b.dot(y2) + s.h.dot(z2) + dk / tau - f * r4) / den_base;
      dx = x2 + dt * x1;
      dy = y2 + dt * y1;
      dz = z2 + dt * z1;
      dkap = (dk - kap * dt) / tau;
      dsv = W.apply(VectorXd(lds - W.apply(dz)));
    };
    auto step_len = [&](const VectorXd& dsv, const VectorXd& dz, double dt, double dkap) {
      double a = std::min(max_step(k, sv, dsv), max_step(k, z, dz));
      if (dt < 0) a = std::min(a, -tau / dt);
      if (dkap < 0) a = std::min(a, -kap / dkap);
      return a;
    };

    // Predictor.
    VectorXd dxa, dya, dza, dsa;
    double dta, dka;
    direction(1.0, -jprod(k, lam, lam), -tau * kap, dxa, dya, dza, dsa, dta, dka);
    const double aa = std::min(1.0, step_len(dsa, dza, dta, dka));
    const double sigma = std::pow(1.0 - aa, 3);

    // Corrector.
    const VectorXd ds = -jprod(k, lam, lam) - jprod(k, W.apply(dsa, true), W.apply(dza)) + sigma * mu * e;
    const double dk = -tau * kap - dta * dka + sigma * mu;
    VectorXd dx, dy, dz, dsv;
    double dt, dkap;
    direction(1.0 - sigma, ds, dk, dx, dy, dz, dsv, dt, dkap);
    const double alpha = std::min(1.0, 0.99 * step_len(dsv, dz, dt, dkap));
    if (!(alpha > 0) || !dx.allFinite()) break;

    x += alpha * dx;
    y += alpha * dy;
    z += alpha * dz;
    sv += alpha * dsv;
    tau += alpha * dt;
    kap += alpha * dkap;
    stalls = alpha < 1e-10 ? stalls + 1 : 0;
    if (stalls >= 5) break;
  }

  out.primal_residual = best.pres;
  out.dual_residual = best.dres;
  out.duality_gap = best.gap;
  if (best.x.size() == 0) best.x = VectorXd::Zero(n);
  return finish(best.x, SolveStatus::MaxIter);
}

}  // namespace uavris::conic
