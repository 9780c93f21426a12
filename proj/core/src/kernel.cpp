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

#include "gsmp/kernel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace gsmp {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPiSq = 2.0 * kPi * kPi;

double normal_pdf(double x, double mean, double var) {
  const double d = x - mean;
  return std::exp(-0.5 * d * d / var) / std::sqrt(2.0 * kPi * var);
}

void check_dims(const GridSpec& grid, const Weights& w, Eigen::Index len) {
  if (w.size() != grid.Q) throw InvalidArgument("weights length != Q");
  if (len != grid.P) throw InvalidArgument("vector length != P");
}

}  // namespace

void GridSpec::validate() const {
  if (P < 1 || Q < 1) throw InvalidArgument("grid requires P >= 1 and Q >= 1");
  if (mu.rows() != Q || mu.cols() != P || var.rows() != Q || var.cols() != P)
    throw InvalidArgument("grid arrays must be Q x P");
  if ((mu.array() < 0.0).any() || !mu.allFinite())
    throw InvalidArgument("grid frequencies must be finite and >= 0");
  if ((var.array() <= 0.0).any() || !var.allFinite())
    throw InvalidArgument("grid variances must be finite and > 0");
}

void Dataset::validate() const {
  if (X.rows() < 1) throw DataError("dataset is empty");
  if (y.size() != X.rows()) throw DataError("X and y row counts differ");
  if (!X.allFinite() || !y.allFinite())
    throw DataError("dataset contains NaN or Inf");
}

Dataset Dataset::subset(const std::vector<int>& rows) const {
  Dataset out;
  out.X.resize(static_cast<Eigen::Index>(rows.size()), X.cols());
  out.y.resize(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out.X.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
    out.y(static_cast<Eigen::Index>(i)) = y(rows[i]);
  }
  return out;
}

std::vector<double> nyquist_bound(const Matrix& X) {
  std::vector<double> out(static_cast<std::size_t>(X.cols()));
  for (Eigen::Index p = 0; p < X.cols(); ++p) {
    std::vector<double> col(X.col(p).data(), X.col(p).data() + X.rows());
    std::sort(col.begin(), col.end());
    col.erase(std::unique(col.begin(), col.end()), col.end());
    if (col.size() < 2) throw ZeroSpacingError(static_cast<int>(p));
    double spacing = col[1] - col[0];
    for (std::size_t i = 2; i < col.size(); ++i)
      spacing = std::min(spacing, col[i] - col[i - 1]);
    out[static_cast<std::size_t>(p)] = 1.0 / (2.0 * spacing);
  }
  return out;
}

GridSpec build_grid(const Dataset& data, int Q, GridSampling sampling,
                    double v_const, std::uint64_t seed) {
  GridOptions opts;
  opts.Q = Q;
  opts.sampling = sampling;
  opts.v_const = v_const;
  opts.seed = seed;
  return build_grid(data, opts);
}

GridSpec build_grid(const Dataset& data, const GridOptions& opts) {
  if (opts.Q < 1) throw InvalidArgument("Q must be >= 1");
  if (!(opts.v_const > 0.0)) throw InvalidArgument("v_const must be > 0");
  std::vector<double> upper;
  if (opts.mu_max) {
    upper = *opts.mu_max;
    if (static_cast<Eigen::Index>(upper.size()) != data.X.cols())
      throw InvalidArgument("mu_max length != P");
  } else {
    upper = nyquist_bound(data.X);
  }
  GridSpec g;
  g.P = static_cast<int>(data.X.cols());
  g.Q = opts.Q;
  g.seed = opts.seed;
  g.mu.resize(g.Q, g.P);
  g.var = Matrix::Constant(g.Q, g.P, opts.v_const);
  if (opts.sampling == GridSampling::kUniform) {
    for (int q = 0; q < g.Q; ++q)
      for (int p = 0; p < g.P; ++p)
        g.mu(q, p) = (static_cast<double>(q + 1) / g.Q) * upper[p];
  } else {
    std::mt19937_64 rng(opts.seed);
    for (int p = 0; p < g.P; ++p) {
      std::uniform_real_distribution<double> u(0.0, upper[p]);
      for (int q = 0; q < g.Q; ++q) g.mu(q, p) = u(rng);
    }
  }
  g.validate();
  return g;
}

double sub_kernel(const GridSpec& grid, int q, const double* tau,
                  KernelFamily family) {
  if (family == KernelFamily::kProduct) {
    double v = 1.0;
    for (int p = 0; p < grid.P; ++p) {
      const double t = tau[p];
      v *= std::exp(-kTwoPiSq * t * t * grid.var(q, p)) *
           std::cos(2.0 * kPi * t * grid.mu(q, p));
    }
    return v;
  }
  double quad = 0.0;
  double phase = 0.0;
  for (int p = 0; p < grid.P; ++p) {
    quad += tau[p] * tau[p] * grid.var(q, p);
    phase += tau[p] * grid.mu(q, p);
  }
  return std::exp(-kTwoPiSq * quad) * std::cos(2.0 * kPi * phase);
}

double eval_gsmp(const Vector& tau, const GridSpec& grid, const Weights& w) {
  check_dims(grid, w, tau.size());
  double s = 0.0;
  for (int q = 0; q < grid.Q; ++q)
    if (w(q) != 0.0) s += w(q) * sub_kernel(grid, q, tau.data(), KernelFamily::kProduct);
  return s;
}

double eval_gsm_md(const Vector& tau, const GridSpec& grid, const Weights& w) {
  check_dims(grid, w, tau.size());
  double s = 0.0;
  for (int q = 0; q < grid.Q; ++q)
    if (w(q) != 0.0) s += w(q) * sub_kernel(grid, q, tau.data(), KernelFamily::kSum);
  return s;
}

double spectral_density(const Vector& omega, const GridSpec& grid,
                        const Weights& w) {
  check_dims(grid, w, omega.size());
  double s = 0.0;
  for (int q = 0; q < grid.Q; ++q) {
    double prod = w(q);
    for (int p = 0; p < grid.P && prod != 0.0; ++p) {
      const double m = grid.mu(q, p), v = grid.var(q, p);
      prod *= 0.5 * (normal_pdf(omega(p), m, v) + normal_pdf(omega(p), -m, v));
    }
    s += prod;
  }
  return s;
}

double spectral_density_gsm_md(const Vector& omega, const GridSpec& grid,
                               const Weights& w) {
  check_dims(grid, w, omega.size());
  double s = 0.0;
  for (int q = 0; q < grid.Q; ++q) {
    if (w(q) == 0.0) continue;
    double plus = 1.0, minus = 1.0;
    for (int p = 0; p < grid.P; ++p) {
      const double m = grid.mu(q, p), v = grid.var(q, p);
      plus *= normal_pdf(omega(p), m, v);
      minus *= normal_pdf(omega(p), -m, v);
    }
    s += 0.5 * w(q) * (plus + minus);
  }
  return s;
}

std::vector<Matrix> gram_matrices(const Dataset& data, const GridSpec& grid,
                                  const GramOptions& opts) {
  grid.validate();
  if (data.P() != grid.P) throw InvalidArgument("data dimension != grid P");
  const std::size_t n = static_cast<std::size_t>(data.n());
  const std::size_t bytes = n * n * static_cast<std::size_t>(grid.Q) * sizeof(double);
  if (bytes > opts.memory_cap_bytes)
    throw MemoryBudgetExceeded(bytes, opts.memory_cap_bytes);
  const int nn = data.n();
  std::vector<Matrix> out(static_cast<std::size_t>(grid.Q), Matrix(nn, nn));
  std::vector<double> tau(static_cast<std::size_t>(grid.P));
  for (int q = 0; q < grid.Q; ++q) {
    Matrix& K = out[static_cast<std::size_t>(q)];
    for (int j = 0; j < nn; ++j) {
      K(j, j) = 1.0;
      for (int i = j + 1; i < nn; ++i) {
        for (int p = 0; p < grid.P; ++p) tau[p] = data.X(i, p) - data.X(j, p);
        const double v = sub_kernel(grid, q, tau.data(), opts.family);
        K(i, j) = v;
        K(j, i) = v;
      }
    }
  }
  return out;
}

Matrix cross_covariance(const Matrix& Xa, const Matrix& Xb,
                        const GridSpec& grid, const Weights& w,
                        KernelFamily family) {
  if (Xa.cols() != grid.P || Xb.cols() != grid.P)
    throw InvalidArgument("input dimension != grid P");
  if (w.size() != grid.Q) throw InvalidArgument("weights length != Q");
  Matrix out = Matrix::Zero(Xa.rows(), Xb.rows());
  std::vector<double> tau(static_cast<std::size_t>(grid.P));
  for (Eigen::Index i = 0; i < Xa.rows(); ++i)
    for (Eigen::Index j = 0; j < Xb.rows(); ++j) {
      for (int p = 0; p < grid.P; ++p) tau[p] = Xa(i, p) - Xb(j, p);
      double s = 0.0;
      for (int q = 0; q < grid.Q; ++q)
        if (w(q) != 0.0) s += w(q) * sub_kernel(grid, q, tau.data(), family);
      out(i, j) = s;
    }
  return out;
}

namespace {

LowRankFactor eig_factor(const Matrix& K, int rank) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(K);
  const Eigen::Index n = K.rows();
  LowRankFactor f;
  f.eig_fallback = true;
  f.L.resize(n, rank);
  // Eigenvalues ascend; keep the largest `rank`, clipped at zero.
  for (int k = 0; k < rank; ++k) {
    const Eigen::Index idx = n - 1 - k;
    const double lam = std::max(0.0, es.eigenvalues()(idx));
    f.L.col(k) = es.eigenvectors().col(idx) * std::sqrt(lam);
  }
  const double tr = K.trace();
  f.residual_trace = tr > 0 ? (tr - f.L.squaredNorm()) / tr : 0.0;
  return f;
}

LowRankFactor pivoted_cholesky(const Matrix& K, const FactorOptions& opts) {
  const Eigen::Index n = K.rows();
  const int cap = static_cast<int>(std::min<Eigen::Index>(opts.rank, n));
  const double trace = K.trace();
  Vector d = K.diagonal();
  Matrix L(n, cap);
  int k = 0;
  for (; k < cap; ++k) {
    Eigen::Index piv;
    const double dmax = d.maxCoeff(&piv);
    if (opts.tol > 0.0 && d.sum() <= opts.tol * trace) break;
    if (!(dmax > 1e-15 * trace)) {
      // Exact rank requested but K is numerically deficient below it.
      if (opts.tol == 0.0) return eig_factor(K, cap);
      break;
    }
    Vector col = K.col(piv);
    if (k > 0) col.noalias() -= L.leftCols(k) * L.row(piv).leftCols(k).transpose();
    col /= std::sqrt(dmax);
    L.col(k) = col;
    d.array() -= col.array().square();
    d(piv) = 0.0;
    d = d.cwiseMax(0.0);
  }
  LowRankFactor f;
  f.L = L.leftCols(std::max(k, 1));
  if (k == 0) f.L.setZero();
  f.residual_trace = trace > 0 ? d.sum() / trace : 0.0;
  return f;
}

LowRankFactor rff_factor(const RffContext& ctx, const FactorOptions& opts) {
  const Matrix& X = *ctx.X;
  const GridSpec& g = *ctx.grid;
  const int r = std::max(1, opts.rank);
  std::mt19937_64 rng(opts.seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(ctx.q + 1)));
  std::normal_distribution<double> nrm(0.0, 1.0);
  std::uniform_real_distribution<double> uni(0.0, 2.0 * kPi);
  std::bernoulli_distribution coin(0.5);
  LowRankFactor f;
  f.L.resize(X.rows(), r);
  Vector omega(g.P);
  for (int k = 0; k < r; ++k) {
    const double shared = coin(rng) ? 1.0 : -1.0;
    for (int p = 0; p < g.P; ++p) {
      const double sign = ctx.family == KernelFamily::kProduct ? (coin(rng) ? 1.0 : -1.0) : shared;
      omega(p) = sign * g.mu(ctx.q, p) + std::sqrt(g.var(ctx.q, p)) * nrm(rng);
    }
    const double b = uni(rng);
    for (Eigen::Index i = 0; i < X.rows(); ++i)
      f.L(i, k) = std::sqrt(2.0 / r) * std::cos(2.0 * kPi * X.row(i).dot(omega) + b);
  }
  return f;
}

}  // namespace

LowRankFactor lowrank_factor(const Matrix& K, const FactorOptions& opts,
                             const RffContext* rff) {
  if (opts.rank < 1) throw InvalidArgument("rank must be >= 1");
  if (opts.method == FactorMethod::kRff) {
    if (!rff || !rff->X || !rff->grid)
      throw InvalidArgument("rff factor requires inputs and grid");
    LowRankFactor f = rff_factor(*rff, opts);
    const double tr = K.trace();
    f.residual_trace =
        tr > 0 ? (K - f.L * f.L.transpose()).trace() / tr : 0.0;
    return f;
  }
  return pivoted_cholesky(K, opts);
}

int KernelWorkspace::total_rank() const {
  int s = 0;
  for (const auto& L : lowrank) s += static_cast<int>(L.cols());
  return s;
}

KernelWorkspace build_workspace(const Dataset& data, const GridSpec& grid,
                                double noise_var,
                                const WorkspaceOptions& opts) {
  if (!(noise_var > 0.0)) throw InvalidArgument("noise variance must be > 0");
  KernelWorkspace ws;
  ws.noise_var = noise_var;
  ws.family = opts.gram.family;
  ws.grams = gram_matrices(data, grid, opts.gram);
  if (!opts.with_factors) return ws;
  ws.lowrank.reserve(ws.grams.size());
  for (int q = 0; q < grid.Q; ++q) {
    RffContext ctx{&data.X, &grid, q, opts.gram.family};
    LowRankFactor f = lowrank_factor(ws.grams[static_cast<std::size_t>(q)], opts.factor, &ctx);
    ws.lowrank.push_back(std::move(f.L));
    ws.eig_fallback.push_back(f.eig_fallback);
  }
  return ws;
}

}  // namespace gsmp
