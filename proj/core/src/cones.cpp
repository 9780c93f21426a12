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

#include "gsmp/internal/cones.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gsmp::internal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// J x with J = diag(1, -1, ..., -1).
Vector jmul(const Eigen::Ref<const Vector>& x) {
  Vector y = -x;
  y(0) = x(0);
  return y;
}

void soc_w(double eta, const Vector& wb, const Eigen::Ref<const Vector>& x,
           Eigen::Ref<Vector> out) {
  out = jmul(x);
  out = eta * (2.0 * wb.dot(x) * wb - out);
}

void soc_winv(double eta, const Vector& wb, const Eigen::Ref<const Vector>& x,
              Eigen::Ref<Vector> out) {
  const Vector jw = jmul(wb);
  const Vector jx = jmul(x);
  out = (2.0 * wb.dot(jx) * jw - jx) / eta;
}

double soc_step(const Eigen::Ref<const Vector>& u, const Eigen::Ref<const Vector>& d) {
  // Smallest positive root of (u0 + a d0)^2 - ||u1 + a d1||^2.
  const double a = d(0) * d(0) - d.tail(d.size() - 1).squaredNorm();
  const double b = u(0) * d(0) - u.tail(u.size() - 1).dot(d.tail(d.size() - 1));
  const double c = std::max(0.0, soc_det(u));
  const double disc = b * b - a * c;
  if (a < 0.0 || (b < 0.0 && disc >= 0.0)) {
    const double root = std::sqrt(std::max(0.0, disc));
    const double den = -b + root;
    if (den <= 0.0) return 0.0;
    return c / den;
  }
  return kInf;
}

}  // namespace

double soc_det(const Eigen::Ref<const Vector>& u) {
  const double r = u.tail(u.size() - 1).norm();
  return (u(0) - r) * (u(0) + r);
}

Scaling identity_scaling(const ConeSpace& K) {
  Scaling W;
  W.d = Vector::Ones(K.l);
  for (int d : K.soc_dim) {
    W.eta.push_back(1.0);
    Vector e = Vector::Zero(d);
    e(0) = 1.0;
    W.wbar.push_back(e);
  }
  W.lambda = identity(K);
  return W;
}

Scaling nt_scaling(const ConeSpace& K, const Vector& s, const Vector& z) {
  Scaling W;
  W.d.resize(K.l);
  W.lambda.resize(K.m);
  for (int i = 0; i < K.l; ++i) {
    W.d(i) = std::sqrt(s(i) / z(i));
    W.lambda(i) = std::sqrt(s(i) * z(i));
  }
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    const auto sj = s.segment(off, d);
    const auto zj = z.segment(off, d);
    const double sdet = std::sqrt(std::max(soc_det(sj), 1e-300));
    const double zdet = std::sqrt(std::max(soc_det(zj), 1e-300));
    const Vector sb = sj / sdet;
    const Vector zb = zj / zdet;
    const double gamma = std::sqrt(0.5 * (1.0 + sb.dot(zb)));
    // NT point wb has wb^T J wb = 1; W is the hyperbolic reflection through
    // v = (wb + e) / sqrt(2 (wb_0 + 1)), i.e. 2 v v^T - J.
    Vector wb = (sb + jmul(zb)) / (2.0 * gamma);
    wb(0) += 1.0;
    wb /= std::sqrt(2.0 * wb(0));
    const double eta = std::sqrt(sdet / zdet);
    W.eta.push_back(eta);
    W.wbar.push_back(std::move(wb));
    Vector lam(d);
    soc_w(eta, W.wbar.back(), zj, lam);
    W.lambda.segment(off, d) = lam;
  }
  return W;
}

Vector apply_w(const ConeSpace& K, const Scaling& W, const Vector& x) {
  Vector out(K.m);
  out.head(K.l) = W.d.cwiseProduct(x.head(K.l));
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    soc_w(W.eta[j], W.wbar[j], x.segment(off, d), out.segment(off, d));
  }
  return out;
}

Vector apply_winv(const ConeSpace& K, const Scaling& W, const Vector& x) {
  Vector out(K.m);
  out.head(K.l) = x.head(K.l).cwiseQuotient(W.d);
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    soc_winv(W.eta[j], W.wbar[j], x.segment(off, d), out.segment(off, d));
  }
  return out;
}

Vector apply_w2(const ConeSpace& K, const Scaling& W, const Vector& x) {
  return apply_w(K, W, apply_w(K, W, x));
}

Vector apply_winv2(const ConeSpace& K, const Scaling& W, const Vector& x) {
  return apply_winv(K, W, apply_winv(K, W, x));
}

Matrix soc_apply_winv_cols(double eta, const Vector& wbar, const Matrix& G) {
  // W^{-1} G = (2 Jw (w^T J G) - J G) / eta.
  Matrix JG = G;
  JG.bottomRows(G.rows() - 1) *= -1.0;
  const Vector jw = jmul(wbar);
  const Eigen::RowVectorXd wt = wbar.transpose() * JG;
  Matrix out = (2.0 * jw * wt - JG) / eta;
  return out;
}

Vector jordan_prod(const ConeSpace& K, const Vector& u, const Vector& v) {
  Vector out(K.m);
  out.head(K.l) = u.head(K.l).cwiseProduct(v.head(K.l));
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    const auto uj = u.segment(off, d);
    const auto vj = v.segment(off, d);
    out(off) = uj.dot(vj);
    out.segment(off + 1, d - 1) = uj(0) * vj.tail(d - 1) + vj(0) * uj.tail(d - 1);
  }
  return out;
}

Vector jordan_div(const ConeSpace& K, const Vector& lambda, const Vector& dvec) {
  Vector out(K.m);
  out.head(K.l) = dvec.head(K.l).cwiseQuotient(lambda.head(K.l));
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    const auto lj = lambda.segment(off, d);
    const auto dj = dvec.segment(off, d);
    const double det = soc_det(lj);
    const double x0 = (lj(0) * dj(0) - lj.tail(d - 1).dot(dj.tail(d - 1))) / det;
    out(off) = x0;
    out.segment(off + 1, d - 1) = (dj.tail(d - 1) - x0 * lj.tail(d - 1)) / lj(0);
  }
  return out;
}

Vector identity(const ConeSpace& K) {
  Vector e = Vector::Zero(K.m);
  e.head(K.l).setOnes();
  for (int off : K.soc_off) e(off) = 1.0;
  return e;
}

double max_step(const ConeSpace& K, const Vector& u, const Vector& du) {
  double a = kInf;
  for (int i = 0; i < K.l; ++i)
    if (du(i) < 0.0) a = std::min(a, -u(i) / du(i));
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    a = std::min(a, soc_step(u.segment(off, d), du.segment(off, d)));
  }
  return a;
}

void shift_interior(const ConeSpace& K, Vector& u) {
  double t = -kInf;
  for (int i = 0; i < K.l; ++i) t = std::max(t, -u(i));
  for (std::size_t j = 0; j < K.soc_dim.size(); ++j) {
    const int off = K.soc_off[j], d = K.soc_dim[j];
    t = std::max(t, u.segment(off + 1, d - 1).norm() - u(off));
  }
  if (K.m == 0) return;
  if (t >= -1e-8 * std::max(1.0, u.norm())) u += (1.0 + t) * identity(K);
}

}  // namespace gsmp::internal
