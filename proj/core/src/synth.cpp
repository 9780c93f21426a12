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

#include "gsmp/synth.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace gsmp {
namespace {

void add_noise(Vector& y, double noise_var, std::mt19937_64& rng) {
  std::normal_distribution<double> n01(0.0, 1.0);
  const double sd = std::sqrt(noise_var);
  for (Eigen::Index i = 0; i < y.size(); ++i) y(i) += sd * n01(rng);
}

}  // namespace

double sample_gp(const Matrix& K, Vector& f, std::uint64_t seed) {
  const Eigen::Index n = K.rows();
  const double scale = n > 0 ? K.diagonal().mean() : 1.0;
  double jitter = 1e-10 * scale;
  for (int attempt = 0; attempt < 12; ++attempt, jitter *= 10.0) {
    Matrix C = K;
    C.diagonal().array() += jitter;
    Eigen::LLT<Matrix> llt(C);
    if (llt.info() != Eigen::Success) continue;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> n01(0.0, 1.0);
    Vector z(n);
    for (Eigen::Index i = 0; i < n; ++i) z(i) = n01(rng);
    f = llt.matrixL() * z;
    return jitter;
  }
  throw FactorizationFailure("sampling covariance is not positive definite", K.diagonal().minCoeff());
}

double sm_kernel(const Vector& tau, const Matrix& modes, const Vector& alpha, double v) {
  constexpr double pi = std::numbers::pi;
  const double env = std::exp(-2.0 * pi * pi * v * tau.squaredNorm());
  double s = 0.0;
  for (Eigen::Index i = 0; i < modes.rows(); ++i)
    s += alpha(i) * std::cos(2.0 * pi * modes.row(i).dot(tau));
  return env * s;
}

SynthResult sparse_1d(const Sparse1dOptions& o) {
  if (o.n_train < 2) throw InvalidArgument("sparse_1d needs at least two training points");
  if (o.n_test < 0) throw InvalidArgument("negative test size");
  if (o.active.size() != o.active_weights.size()) throw InvalidArgument("active weights length mismatch");
  SynthResult r;
  r.kind = "sparse_1d";
  r.noise_var = o.noise_var;
  r.train.X = Vector::LinSpaced(o.n_train, 0.0, o.x_max);
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(0.0, o.x_max);
  r.test.X.resize(o.n_test, 1);
  for (int i = 0; i < o.n_test; ++i) r.test.X(i, 0) = unif(rng);

  r.truth_grid = build_grid(r.train, o.Q, GridSampling::kUniform, o.v, 0);
  r.truth_weights = Weights::Zero(o.Q);
  for (std::size_t k = 0; k < o.active.size(); ++k) {
    const int q = o.active[k];
    if (q < 0 || q >= o.Q) throw InvalidArgument("active index out of range");
    r.truth_weights(q) = o.active_weights[k];
  }
  r.truth_family = KernelFamily::kProduct;
  r.modes = r.truth_grid.mu;
  r.mode_var = o.v;

  Matrix Xall(o.n_train + o.n_test, 1);
  Xall << r.train.X, r.test.X;
  const Matrix K = cross_covariance(Xall, Xall, r.truth_grid, r.truth_weights, KernelFamily::kProduct);
  Vector f;
  r.jitter = sample_gp(K, f, o.seed ^ 0x5eed5eedULL);
  Vector y = f;
  std::mt19937_64 noise_rng(o.seed + 1);
  add_noise(y, o.noise_var, noise_rng);
  r.train.y = y.head(o.n_train);
  r.test.y = y.tail(o.n_test);
  return r;
}

SynthResult four_mode_2d(const FourModeOptions& o) {
  if (o.side < 2) throw InvalidArgument("lattice side must be >= 2");
  if (!(o.hi > o.lo)) throw InvalidArgument("lattice bounds must satisfy lo < hi");
  SynthResult r;
  r.kind = "four_mode_2d";
  r.noise_var = o.noise_var;
  const int n = o.side * o.side;
  const Vector ticks = Vector::LinSpaced(o.side, o.lo, o.hi);
  r.train.X.resize(n, 2);
  for (int i = 0; i < o.side; ++i)
    for (int j = 0; j < o.side; ++j) {
      r.train.X(i * o.side + j, 0) = ticks(i);
      r.train.X(i * o.side + j, 1) = ticks(j);
    }
  std::mt19937_64 rng(o.seed);
  std::uniform_real_distribution<double> unif(o.lo, o.hi);
  r.test.X.resize(o.n_test, 2);
  for (int i = 0; i < o.n_test; ++i) {
    r.test.X(i, 0) = unif(rng);
    r.test.X(i, 1) = unif(rng);
  }
  r.modes.resize(4, 2);
  r.modes << -o.m, -o.m, -o.m, o.m, o.m, -o.m, o.m, o.m;
  r.mode_var = o.mode_var;
  // The symmetric four-mode mixture is one product component at (m, m).
  r.truth_grid.P = 2;
  r.truth_grid.Q = 1;
  r.truth_grid.mu = Matrix::Constant(1, 2, std::fabs(o.m));
  r.truth_grid.var = Matrix::Constant(1, 2, o.mode_var);
  r.truth_weights = Weights::Ones(1);
  r.truth_family = KernelFamily::kProduct;

  Matrix Xall(n + o.n_test, 2);
  Xall << r.train.X, r.test.X;
  const Vector alpha = Vector::Constant(4, 0.25);
  Matrix K(Xall.rows(), Xall.rows());
  for (Eigen::Index i = 0; i < Xall.rows(); ++i)
    for (Eigen::Index j = 0; j <= i; ++j) {
      const Vector tau = (Xall.row(i) - Xall.row(j)).transpose();
      K(i, j) = K(j, i) = sm_kernel(tau, r.modes, alpha, o.mode_var);
    }
  Vector f;
  r.jitter = sample_gp(K, f, o.seed ^ 0x5eed5eedULL);
  Vector y = f;
  std::mt19937_64 noise_rng(o.seed + 1);
  add_noise(y, o.noise_var, noise_rng);
  r.train.y = y.head(n);
  r.test.y = y.tail(o.n_test);
  return r;
}

}  // namespace gsmp
