// Copyright 2026 The gsmp Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Homogeneous self-dual primal-dual interior-point method with
// Nesterov-Todd scaling and Mehrotra correction. Standard form:
//   min c^T x  s.t.  A x = b,  G x + s = h,  s in K
// with K a product of one nonnegative orthant and second-order cones.

#include <algorithm>
#include <cmath>
#include <limits>
#include <cstdio>

#include "gsmp/conic.hpp"
#include "gsmp/internal/cones.hpp"

namespace gsmp {
namespace {

using internal::ConeSpace;
using internal::Scaling;

struct StandardForm {
  Vector c;
  Matrix A;
  Vector b;
  Matrix G;
  Vector h;
  ConeSpace K;
  // Recovery of eliminated columns: x_B = t - T x_N.
  bool eliminated = false;
  std::vector<int> keep;
  std::vector<int> drop;
  Matrix T;
  Vector t;
};

StandardForm to_standard_form(const ConeProgram& prog) {
  StandardForm sf;
  const int nv = prog.num_vars;
  int m = static_cast<int>(prog.nonneg.size());
  sf.K.l = m;
  for (const auto& cone : prog.cones) {
    sf.K.soc_off.push_back(m);
    sf.K.soc_dim.push_back(cone.dim());
    m += cone.dim();
  }
  sf.K.m = m;
  Matrix G = Matrix::Zero(m, nv);
  Vector h = Vector::Zero(m);
  for (std::size_t i = 0; i < prog.nonneg.size(); ++i)
    G(static_cast<Eigen::Index>(i), prog.nonneg[i]) = -1.0;
  for (std::size_t j = 0; j < prog.cones.size(); ++j) {
    const SocConstraint& cone = prog.cones[j];
    const int off = sf.K.soc_off[j];
    for (std::size_t k = 0; k < cone.members.size(); ++k)
      G.block(off, cone.members[k], cone.dim(), 1) -= cone.D.col(static_cast<Eigen::Index>(k));
    h.segment(off, cone.dim()) = cone.e;
  }

  if (!prog.eliminate) {
    sf.c = prog.c;
    sf.A = prog.A;
    sf.b = prog.b;
    sf.G = std::move(G);
    sf.h = std::move(h);
    return sf;
  }

  const VarRange r = *prog.eliminate;
  sf.eliminated = true;
  for (int k = 0; k < nv; ++k) {
    if (k >= r.offset && k < r.offset + r.length) sf.drop.push_back(k);
    else sf.keep.push_back(k);
  }
  const Matrix AB = prog.A.middleCols(r.offset, r.length);
  const Matrix AN = prog.A(Eigen::all, sf.keep);
  if (AB.triangularView<Eigen::StrictlyUpper>().toDenseMatrix().isZero(0.0)) {
    if ((AB.diagonal().array() == 0.0).any()) throw InvalidArgument("elimination block is singular");
    const auto tri = AB.triangularView<Eigen::Lower>();
    sf.T = tri.solve(AN);
    sf.t = tri.solve(prog.b);
  } else {
    const Eigen::FullPivLU<Matrix> lu(AB);
    if (!lu.isInvertible()) throw InvalidArgument("elimination block is singular");
    sf.T = lu.solve(AN);
    sf.t = lu.solve(prog.b);
  }
  const Matrix GB = G.middleCols(r.offset, r.length);
  const Vector cB = prog.c.segment(r.offset, r.length);
  sf.c = prog.c(sf.keep) - sf.T.transpose() * cB;
  sf.G = G(Eigen::all, sf.keep) - GB * sf.T;
  sf.h = h - GB * sf.t;
  sf.A.resize(0, static_cast<Eigen::Index>(sf.keep.size()));
  sf.b.resize(0);
  return sf;
}

// Newton system  [0 A^T G^T; A 0 0; G 0 -W^2]  with W fixed per iteration.
class KktSolver {
 public:
  explicit KktSolver(const StandardForm& sf) : sf_(sf) {
    const ConeSpace& K = sf.K;
    const Eigen::Index nv = sf.G.cols();
    for (int i = 0; i < K.l; ++i) {
      std::vector<std::pair<int, double>> row;
      for (Eigen::Index k = 0; k < nv; ++k)
        if (sf.G(i, k) != 0.0) row.emplace_back(static_cast<int>(k), sf.G(i, k));
      orth_rows_.push_back(std::move(row));
    }
    for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
      const int off = K.soc_off[j], d = K.soc_dim[j];
      std::vector<int> supp;
      for (Eigen::Index k = 0; k < nv; ++k)
        if (sf.G.block(off, k, d, 1).cwiseAbs().maxCoeff() > 0.0) supp.push_back(static_cast<int>(k));
      Matrix Gk = sf.G(Eigen::seqN(off, d), supp);
      soc_support_.push_back(std::move(supp));
      soc_blocks_.push_back(std::move(Gk));
    }
  }

  /// Assembles and factors G^T W^-2 G (+ the Schur complement for A).
  void factor(const Scaling& W) {
    W_ = &W;
    const Eigen::Index nv = sf_.G.cols();
    H_.setZero(nv, nv);
    for (int i = 0; i < sf_.K.l; ++i) {
      const double wi = 1.0 / (W.d(i) * W.d(i));
      for (const auto& [a, va] : orth_rows_[static_cast<std::size_t>(i)])
        for (const auto& [b, vb] : orth_rows_[static_cast<std::size_t>(i)]) H_(a, b) += wi * va * vb;
    }
    for (std::size_t j = 0; j < soc_blocks_.size(); ++j) {
      const Matrix& Gk = soc_blocks_[j];
      const Matrix M = internal::soc_apply_winv_cols(W.eta[j], W.wbar[j], Gk);
      const auto& S = soc_support_[j];
      Matrix Hk = Matrix::Zero(M.cols(), M.cols());
      Hk.selfadjointView<Eigen::Lower>().rankUpdate(M.transpose());
      Hk = Hk.selfadjointView<Eigen::Lower>();
      H_(S, S) += Hk;
    }
    double reg = 0.0;
    const double scale = std::max(1.0, H_.diagonal().cwiseAbs().maxCoeff());
    for (int attempt = 0; attempt < 8; ++attempt) {
      Matrix Hr = H_;
      if (reg > 0.0) Hr.diagonal().array() += reg;
      llt_.compute(Hr);
      if (llt_.info() == Eigen::Success) break;
      reg = reg == 0.0 ? 1e-14 * scale : reg * 100.0;
    }
    if (sf_.A.rows() > 0) {
      HinvAt_ = llt_.solve(sf_.A.transpose());
      Matrix S = sf_.A * HinvAt_;
      S.diagonal().array() += 1e-14 * std::max(1.0, S.diagonal().cwiseAbs().maxCoeff());
      schur_.compute(S);
    }
  }

  /// Solves the Newton system in scaled form: the third unknown is
  /// u = W dz and the third right-hand side is W^{-1} rz. Two steps of
  /// iterative refinement follow the direct solve.
  void solve(const Vector& rx, const Vector& ry, const Vector& rzs, Vector& dx,
             Vector& dy, Vector& u) const {
    raw_solve(rx, ry, rzs, dx, dy, u);
    for (int it = 0; it < 2; ++it) {
      Vector ex, ey, ez;
      residual(rx, ry, rzs, dx, dy, u, ex, ey, ez);
      Vector cx, cy, cu;
      raw_solve(ex, ey, ez, cx, cy, cu);
      dx += cx;
      dy += cy;
      u += cu;
    }
  }

 private:
  void raw_solve(const Vector& rx, const Vector& ry, const Vector& rzs, Vector& dx,
                 Vector& dy, Vector& u) const {
    const Vector rt = rx + sf_.G.transpose() * internal::apply_winv(sf_.K, *W_, rzs);
    if (sf_.A.rows() > 0) {
      const Vector Hr = llt_.solve(rt);
      dy = schur_.solve(sf_.A * Hr - ry);
      dx = Hr - HinvAt_ * dy;
    } else {
      dy.resize(0);
      dx = llt_.solve(rt);
    }
    u = internal::apply_winv(sf_.K, *W_, sf_.G * dx) - rzs;
  }

  void residual(const Vector& rx, const Vector& ry, const Vector& rzs, const Vector& dx,
                const Vector& dy, const Vector& u, Vector& ex, Vector& ey,
                Vector& ez) const {
    ex = rx - sf_.G.transpose() * internal::apply_winv(sf_.K, *W_, u);
    if (sf_.A.rows() > 0) {
      ex -= sf_.A.transpose() * dy;
      ey = ry - sf_.A * dx;
    } else {
      ey.resize(0);
    }
    ez = rzs - (internal::apply_winv(sf_.K, *W_, sf_.G * dx) - u);
  }

  const StandardForm& sf_;
  const Scaling* W_ = nullptr;
  std::vector<std::vector<std::pair<int, double>>> orth_rows_;
  std::vector<std::vector<int>> soc_support_;
  std::vector<Matrix> soc_blocks_;
  Matrix H_;
  Eigen::LLT<Matrix> llt_;
  Matrix HinvAt_;
  Eigen::LDLT<Matrix> schur_;
};

struct Iterate {
  Vector x, y, z, s;
  double tau = 1.0, kappa = 1.0;
};

struct Direction {
  Vector x, y, z, s;
  double tau = 0.0, kappa = 0.0;
};

struct Rhs {
  Vector x, y, z, s;
  double tau = 0.0, kappa = 0.0;
};

// Scaled solution of the system with right-hand side (-c, b, h).
struct BaseSolution {
  Vector x, y, u;
  Vector hs;  // W^{-1} h
};

struct Step {
  Direction dir;
  Vector ds_scaled;  // W^{-1} ds
  Vector u;          // W dz
};

// Solves the linearized homogeneous system for one right-hand side.
Step newton(const StandardForm& sf, const KktSolver& kkt, const Scaling& W,
            const Iterate& it, const BaseSolution& base, const Rhs& d) {
  Step st;
  const Vector lds = internal::jordan_div(sf.K, W.lambda, d.s);
  const Vector rzs = internal::apply_winv(sf.K, W, d.z) - lds;
  Vector x2, y2, u2;
  kkt.solve(d.x, d.y, rzs, x2, y2, u2);
  const double num = d.tau - d.kappa / it.tau - (sf.c.dot(x2) + sf.b.dot(y2) + base.hs.dot(u2));
  const double den = -it.kappa / it.tau + sf.c.dot(base.x) + sf.b.dot(base.y) + base.hs.dot(base.u);
  Direction& dir = st.dir;
  dir.tau = num / den;
  dir.x = x2 + dir.tau * base.x;
  dir.y = y2 + dir.tau * base.y;
  st.u = u2 + dir.tau * base.u;
  dir.z = internal::apply_winv(sf.K, W, st.u);
  st.ds_scaled = lds - st.u;
  dir.s = internal::apply_w(sf.K, W, st.ds_scaled);
  dir.kappa = (d.kappa - it.kappa * dir.tau) / it.tau;
  return st;
}

double step_length(const ConeSpace& K, const Iterate& it, const Direction& d) {
  double a = std::min(internal::max_step(K, it.s, d.s), internal::max_step(K, it.z, d.z));
  if (d.tau < 0.0) a = std::min(a, -it.tau / d.tau);
  if (d.kappa < 0.0) a = std::min(a, -it.kappa / d.kappa);
  return a;
}

struct Measures {
  double pres, dres, gap, relgap, pcost, dcost;
  double pinf = std::numeric_limits<double>::infinity();
  double dinf = std::numeric_limits<double>::infinity();
};

Measures measure(const StandardForm& sf, const Iterate& it, double nb, double nh, double nc) {
  Vector rx = sf.G.transpose() * it.z + sf.c * it.tau;
  double ry = 0.0;
  if (sf.A.rows() > 0) {
    rx += sf.A.transpose() * it.y;
    ry = (sf.A * it.x - sf.b * it.tau).norm();
  }
  const double rz = (it.s + sf.G * it.x - sf.h * it.tau).norm();
  Measures m;
  m.pres = std::max(ry / std::max(1.0, nb), rz / std::max(1.0, nh)) / it.tau;
  m.dres = rx.norm() / std::max(1.0, nc) / it.tau;
  m.gap = it.s.dot(it.z) / (it.tau * it.tau);
  m.pcost = sf.c.dot(it.x) / it.tau;
  m.dcost = -(sf.b.dot(it.y) + sf.h.dot(it.z)) / it.tau;
  if (m.pcost < 0.0) m.relgap = m.gap / -m.pcost;
  else if (m.dcost > 0.0) m.relgap = m.gap / m.dcost;
  else m.relgap = std::numeric_limits<double>::infinity();

  const double bz = sf.h.dot(it.z) + sf.b.dot(it.y);
  if (bz < 0.0) {
    Vector aty = sf.G.transpose() * it.z;
    if (sf.A.rows() > 0) aty += sf.A.transpose() * it.y;
    m.pinf = aty.norm() / std::max(1.0, nc) / -bz;
  }
  const double cx = sf.c.dot(it.x);
  if (cx < 0.0) {
    double ax = 0.0;
    if (sf.A.rows() > 0) ax = (sf.A * it.x).norm() / std::max(1.0, nb);
    const double gx = (sf.G * it.x + it.s).norm() / std::max(1.0, nh);
    m.dinf = std::max(ax, gx) / -cx;
  }
  return m;
}

}  // namespace

ConeSolution solve(const ConeProgram& prog, const SolverSettings& settings) {
  prog.validate();
  const StandardForm sf = to_standard_form(prog);
  const ConeSpace& K = sf.K;
  const Eigen::Index nv = sf.G.cols();
  const Eigen::Index p = sf.A.rows();
  const double nb = sf.b.norm(), nh = sf.h.norm(), nc = sf.c.norm();
  const double tol = settings.tol;
  KktSolver kkt(sf);

  Iterate it;
  {
    const Scaling I = internal::identity_scaling(K);
    kkt.factor(I);
    Vector x, y, u;
    kkt.solve(Vector::Zero(nv), sf.b, sf.h, x, y, u);
    it.x = x;
    it.s = -u;
    kkt.solve(-sf.c, Vector::Zero(p), Vector::Zero(K.m), x, y, u);
    it.y = y;
    it.z = u;
    internal::shift_interior(K, it.s);
    internal::shift_interior(K, it.z);
    it.tau = 1.0;
    it.kappa = 1.0;
  }

  ConeSolution sol;
  Iterate best = it;
  double best_score = std::numeric_limits<double>::infinity();
  KktResiduals best_kkt;
  const double deg = static_cast<double>(K.degree());
  bool done = false;
  int iter = 0;

  for (; iter <= settings.max_iter; ++iter) {
    const Measures ms = measure(sf, it, nb, nh, nc);
    if (settings.verbose)
      std::fprintf(stderr, "ipm %3d pres %.3e dres %.3e gap %.3e rel %.3e tau %.3e kap %.3e pc %.6e dc %.6e\n",
                   iter, ms.pres, ms.dres, ms.gap, ms.relgap, it.tau, it.kappa, ms.pcost, ms.dcost);
    const double score = std::max({ms.pres, ms.dres, std::min(ms.gap, ms.relgap)});
    if (score < best_score && std::isfinite(score)) {
      best_score = score;
      best = it;
      best_kkt = {ms.pres, ms.dres, ms.gap, ms.relgap};
    }
    if (ms.pres <= tol && ms.dres <= tol && (ms.gap <= tol || ms.relgap <= tol)) {
      sol.status = SolveStatus::kOptimal;
      best = it;
      best_kkt = {ms.pres, ms.dres, ms.gap, ms.relgap};
      done = true;
      break;
    }
    if (ms.pinf <= tol) {
      sol.status = SolveStatus::kInfeasible;
      best = it;
      done = true;
      break;
    }
    if (ms.dinf <= tol) {
      sol.status = SolveStatus::kInfeasible;
      sol.dual_infeasible = true;
      best = it;
      done = true;
      break;
    }
    if (iter == settings.max_iter) break;

    const double mu = (it.s.dot(it.z) + it.tau * it.kappa) / (deg + 1.0);
    const Scaling W = internal::nt_scaling(K, it.s, it.z);
    kkt.factor(W);
    BaseSolution base;
    base.hs = internal::apply_winv(K, W, sf.h);
    kkt.solve(-sf.c, sf.b, base.hs, base.x, base.y, base.u);

    Rhs r;
    r.x = -(sf.G.transpose() * it.z + sf.c * it.tau);
    if (p > 0) {
      r.x -= sf.A.transpose() * it.y;
      r.y = -(sf.A * it.x - sf.b * it.tau);
    } else {
      r.y.resize(0);
    }
    r.z = -(it.s + sf.G * it.x - sf.h * it.tau);
    r.tau = -(it.kappa + sf.c.dot(it.x) + sf.b.dot(it.y) + sf.h.dot(it.z));
    r.s = -internal::jordan_prod(K, W.lambda, W.lambda);
    r.kappa = -it.tau * it.kappa;

    const Step aff = newton(sf, kkt, W, it, base, r);
    const double alpha_aff = std::min(1.0, step_length(K, it, aff.dir));
    const double sigma = std::pow(std::max(0.0, 1.0 - alpha_aff), 3);

    Rhs rc;
    rc.x = (1.0 - sigma) * r.x;
    rc.y = (1.0 - sigma) * r.y;
    rc.z = (1.0 - sigma) * r.z;
    rc.tau = (1.0 - sigma) * r.tau;
    rc.s = r.s - internal::jordan_prod(K, aff.ds_scaled, aff.u) + sigma * mu * internal::identity(K);
    rc.kappa = r.kappa - aff.dir.tau * aff.dir.kappa + sigma * mu;

    const Direction dir = newton(sf, kkt, W, it, base, rc).dir;
    const double alpha = std::min(1.0, 0.99 * step_length(K, it, dir));
    if (!(alpha > 1e-12)) break;
    it.x += alpha * dir.x;
    if (p > 0) it.y += alpha * dir.y;
    it.z += alpha * dir.z;
    it.s += alpha * dir.s;
    it.tau += alpha * dir.tau;
    it.kappa += alpha * dir.kappa;
  }
  if (!done) sol.status = SolveStatus::kMaxIter;
  sol.iterations = std::min(iter, settings.max_iter);
  sol.kkt = best_kkt;

  // Infeasibility certificates are reported unnormalized.
  const double scale = sol.status == SolveStatus::kInfeasible ? 1.0 : 1.0 / best.tau;
  const Vector xr = best.x * scale;
  Vector x(prog.num_vars);
  if (sf.eliminated) {
    x(sf.keep) = xr;
    x(sf.drop) = sf.t - sf.T * xr;
  } else {
    x = xr;
  }
  sol.x = x;
  sol.objective_value = prog.c.dot(x);
  const VarRange th = prog.layout.theta;
  if (th.length > 0) sol.theta_block = x.segment(th.offset, th.length).cwiseMax(0.0);
  return sol;
}

}  // namespace gsmp
