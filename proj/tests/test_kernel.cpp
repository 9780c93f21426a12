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

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>

#include "fixtures.hpp"
#include "gsmp/kernel.hpp"
#include "oracles.hpp"

namespace gsmp {
namespace {

using testing::random_dataset;
using testing::random_grid;
using testing::random_weights;

constexpr double kPi = 3.14159265358979323846;

Dataset line(std::initializer_list<double> xs) {
  Dataset d;
  d.X.resize(static_cast<Eigen::Index>(xs.size()), 1);
  d.y = Vector::Zero(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) d.X(i++, 0) = x;
  return d;
}

double fourier_inverse(const std::function<double(const Vector&)>& density,
                       const GridSpec& g, const Vector& tau) {
  return oracle::fourier_inverse(density, g.mu, g.var, tau);
}

TEST(Grid, UniformExampleOnThreePoints) {
  const GridSpec g = build_grid(line({0.0, 0.5, 1.0}), 2, GridSampling::kUniform, 1e-3, 0);
  ASSERT_EQ(g.Q, 2);
  EXPECT_DOUBLE_EQ(g.mu(0, 0), 0.5);
  EXPECT_DOUBLE_EQ(g.mu(1, 0), 1.0);
  EXPECT_DOUBLE_EQ(g.var(0, 0), 1e-3);
}

TEST(Grid, SinglePointSitsOnTheBound) {
  const Dataset d = random_dataset(17, 3, 4);
  const GridSpec g = build_grid(d, 1, GridSampling::kUniform, 1e-3, 0);
  const std::vector<double> ub = nyquist_bound(d.X);
  for (int p = 0; p < 3; ++p) EXPECT_EQ(g.mu(0, p), ub[static_cast<std::size_t>(p)]);
}

TEST(Grid, RandomLatticeStaysInRangeAndReproduces) {
  Dataset d;
  d.X.resize(900, 2);
  d.y = Vector::Zero(900);
  for (int i = 0; i < 30; ++i)
    for (int j = 0; j < 30; ++j) {
      d.X(i * 30 + j, 0) = -4.0 + 8.0 * i / 29.0;
      d.X(i * 30 + j, 1) = -4.0 + 8.0 * j / 29.0;
    }
  const std::vector<double> ub = nyquist_bound(d.X);
  EXPECT_NEAR(ub[0], 29.0 / 16.0, 1e-12);
  const GridSpec a = build_grid(d, 100, GridSampling::kRandom, 1e-3, 99);
  const GridSpec b = build_grid(d, 100, GridSampling::kRandom, 1e-3, 99);
  const GridSpec c = build_grid(d, 100, GridSampling::kRandom, 1e-3, 100);
  EXPECT_TRUE((a.mu.array() >= 0.0).all());
  for (int p = 0; p < 2; ++p)
    EXPECT_TRUE((a.mu.col(p).array() <= ub[static_cast<std::size_t>(p)]).all());
  EXPECT_EQ(a.mu, b.mu);
  EXPECT_NE(a.mu, c.mu);
}

TEST(Grid, ExplicitUpperBoundOverridesNyquist) {
  GridOptions o;
  o.Q = 4;
  o.mu_max = std::vector<double>{2.0};
  const GridSpec g = build_grid(line({0.0, 0.1, 0.2}), o);
  EXPECT_DOUBLE_EQ(g.mu(3, 0), 2.0);
  EXPECT_DOUBLE_EQ(g.mu(0, 0), 0.5);
}

TEST(Grid, CoincidentInputsHaveNoBound) {
  Dataset d = random_dataset(5, 2, 1);
  d.X.col(1).setConstant(0.25);
  try {
    nyquist_bound(d.X);
    FAIL() << "expected ZeroSpacingError";
  } catch (const ZeroSpacingError& e) {
    EXPECT_EQ(e.dim(), 1);
  }
}

TEST(Grid, RejectsBadArguments) {
  const Dataset d = line({0.0, 1.0});
  EXPECT_THROW(build_grid(d, 0, GridSampling::kUniform, 1e-3, 0), InvalidArgument);
  EXPECT_THROW(build_grid(d, 3, GridSampling::kUniform, 0.0, 0), InvalidArgument);
  GridSpec g = random_grid(1, 2, 0);
  g.var(1, 0) = -1.0;
  EXPECT_THROW(g.validate(), InvalidArgument);
}

TEST(Kernel, ZeroLagIsTotalWeight) {
  const GridSpec g = random_grid(2, 5, 3);
  const Weights w = random_weights(5, 8);
  const Vector tau = Vector::Zero(2);
  EXPECT_NEAR(eval_gsmp(tau, g, w), w.sum(), 1e-14);
  EXPECT_NEAR(eval_gsm_md(tau, g, w), w.sum(), 1e-14);
  EXPECT_EQ(eval_gsmp(Vector::Constant(2, 0.7), g, Weights::Zero(5)), 0.0);
}

TEST(Kernel, ProductMatchesFourierInverseAtExampleLag) {
  GridSpec g;
  g.P = 2;
  g.Q = 1;
  g.mu = Matrix{{0.5, 0.25}};
  g.var = Matrix::Constant(1, 2, 0.001);
  const Weights w = Weights::Ones(1);
  const Vector tau{{1.0, 2.0}};
  const double quad = fourier_inverse(
      [&](const Vector& om) { return spectral_density(om, g, w); }, g, tau);
  EXPECT_NEAR(eval_gsmp(tau, g, w), quad, 1e-6);
}

TEST(Kernel, SumFamilyMatchesFourierInverse) {
  const GridSpec g = random_grid(2, 2, 21);
  const Weights w = random_weights(2, 22);
  const Vector tau{{0.8, -1.3}};
  const double quad = fourier_inverse(
      [&](const Vector& om) { return spectral_density_gsm_md(om, g, w); }, g, tau);
  EXPECT_NEAR(eval_gsm_md(tau, g, w), quad, 1e-6);
}

TEST(Kernel, FamiliesCoincideInOneDimension) {
  const GridSpec g = random_grid(1, 4, 5);
  const Weights w = random_weights(4, 6);
  for (double t : {-2.0, -0.3, 0.0, 0.45, 3.1}) {
    const Vector tau = Vector::Constant(1, t);
    EXPECT_NEAR(eval_gsmp(tau, g, w), eval_gsm_md(tau, g, w), 1e-14);
    EXPECT_NEAR(spectral_density(tau, g, w), spectral_density_gsm_md(tau, g, w), 1e-14);
  }
}

TEST(Density, EvenAndZeroForZeroWeights) {
  const GridSpec g = random_grid(2, 3, 9);
  const Weights w = random_weights(3, 10);
  const Vector om{{0.3, -0.7}};
  EXPECT_DOUBLE_EQ(spectral_density(om, g, w), spectral_density(-om, g, w));
  EXPECT_DOUBLE_EQ(spectral_density_gsm_md(om, g, w), spectral_density_gsm_md(-om, g, w));
  EXPECT_EQ(spectral_density(om, g, Weights::Zero(3)), 0.0);
}

TEST(Density, IntegratesToTotalWeight) {
  for (int P : {1, 2}) {
    const GridSpec g = random_grid(P, 3, 30 + P);
    const Weights w = random_weights(3, 40 + P);
    const double mass = fourier_inverse(
        [&](const Vector& om) { return spectral_density(om, g, w); }, g, Vector::Zero(P));
    EXPECT_NEAR(mass, w.sum(), 1e-3 * w.sum()) << "P=" << P;
  }
}

TEST(Kernel, EvenInTheLag) {
  const GridSpec g = random_grid(2, 3, 50);
  const Weights w = random_weights(3, 51);
  std::mt19937_64 rng(52);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int i = 0; i < 20; ++i) {
    const Vector tau{{u(rng), u(rng)}};
    EXPECT_EQ(eval_gsmp(tau, g, w), eval_gsmp(-tau, g, w));
    EXPECT_EQ(eval_gsm_md(tau, g, w), eval_gsm_md(-tau, g, w));
  }
}

TEST(Gram, WeightedSumIsPositiveSemidefinite) {
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const Dataset d = random_dataset(20, 2, 60 + seed);
    const GridSpec g = random_grid(2, 4, 70 + seed, 2.0);
    const auto K = gram_matrices(d, g);
    const Weights w = random_weights(4, 80 + seed);
    Matrix C = Matrix::Zero(20, 20);
    for (int q = 0; q < 4; ++q) {
      const Matrix& k = K[static_cast<std::size_t>(q)];
      EXPECT_LE((k - k.transpose()).norm(), 1e-12 * k.norm());
      const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(k).eigenvalues();
      EXPECT_GE(ev.minCoeff(), -1e-8 * ev.maxCoeff());
      C += w(q) * k;
    }
    const Vector ev = Eigen::SelfAdjointEigenSolver<Matrix>(C).eigenvalues();
    EXPECT_GE(ev.minCoeff(), -1e-8 * ev.maxCoeff()) << "seed " << seed;
  }
}

// Strict local maxima of f on a square lattice, ignoring the flat tails.
std::vector<Vector> lattice_maxima(const std::function<double(const Vector&)>& f, double half,
                                   double step) {
  const int m = static_cast<int>(std::lround(2.0 * half / step)) + 1;
  Matrix v(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) v(i, j) = f(Vector{{-half + i * step, -half + j * step}});
  const double floor = 1e-3 * v.maxCoeff();
  std::vector<Vector> out;
  for (int i = 1; i + 1 < m; ++i)
    for (int j = 1; j + 1 < m; ++j) {
      bool peak = v(i, j) > floor;
      for (int a = -1; a <= 1 && peak; ++a)
        for (int b = -1; b <= 1 && peak; ++b)
          if ((a || b) && v(i + a, j + b) >= v(i, j)) peak = false;
      if (peak) out.push_back(Vector{{-half + i * step, -half + j * step}});
    }
  return out;
}

bool has_peak_near(const std::vector<Vector>& peaks, const Vector& at) {
  for (const Vector& p : peaks)
    if ((p - at).cwiseAbs().maxCoeff() <= 0.05) return true;
  return false;
}

TEST(Density, ProductHasFourModesSumHasTwo) {
  GridSpec g;
  g.P = 2;
  g.Q = 1;
  g.mu = Matrix{{0.5, 0.3}};
  g.var = Matrix::Constant(1, 2, 0.005);
  const Weights w = Weights::Ones(1);
  const auto prod = lattice_maxima([&](const Vector& om) { return spectral_density(om, g, w); },
                                   1.0, 0.01);
  const auto sum = lattice_maxima(
      [&](const Vector& om) { return spectral_density_gsm_md(om, g, w); }, 1.0, 0.01);
  ASSERT_EQ(prod.size(), 4u);
  ASSERT_EQ(sum.size(), 2u);
  for (double a : {-1.0, 1.0})
    for (double b : {-1.0, 1.0}) EXPECT_TRUE(has_peak_near(prod, Vector{{0.5 * a, 0.3 * b}}));
  EXPECT_TRUE(has_peak_near(sum, Vector{{0.5, 0.3}}));
  EXPECT_TRUE(has_peak_near(sum, Vector{{-0.5, -0.3}}));
}

TEST(Gram, SinglePointIsOne) {
  const Dataset d = random_dataset(1, 2, 0);
  const auto K = gram_matrices(d, random_grid(2, 3, 1));
  ASSERT_EQ(K.size(), 3u);
  for (const Matrix& k : K) EXPECT_EQ(k, Matrix::Ones(1, 1));
}

TEST(Gram, DuplicatedRowGivesDuplicatedRowAndColumn) {
  Dataset d = random_dataset(6, 2, 2);
  d.X.row(4) = d.X.row(1);
  for (const Matrix& k : gram_matrices(d, random_grid(2, 3, 3))) {
    EXPECT_EQ(k.row(4), k.row(1));
    EXPECT_EQ(k.col(4), k.col(1));
  }
}

TEST(Gram, MatchesOneHotKernelEvaluation) {
  const Dataset d = random_dataset(5, 2, 11);
  const GridSpec g = random_grid(2, 4, 12);
  for (KernelFamily fam : {KernelFamily::kProduct, KernelFamily::kSum}) {
    GramOptions o;
    o.family = fam;
    const auto K = gram_matrices(d, g, o);
    for (int q = 0; q < 4; ++q) {
      Weights e = Weights::Zero(4);
      e(q) = 1.0;
      for (int i = 0; i < 5; ++i)
        for (int j = 0; j < 5; ++j) {
          const Vector tau = (d.X.row(i) - d.X.row(j)).transpose();
          const double ref = fam == KernelFamily::kProduct ? eval_gsmp(tau, g, e)
                                                           : eval_gsm_md(tau, g, e);
          EXPECT_NEAR(K[static_cast<std::size_t>(q)](i, j), ref, 1e-14);
        }
    }
  }
}

TEST(Gram, CrossCovarianceOfTrainingInputsIsWeightedSum) {
  const Dataset d = random_dataset(7, 1, 13);
  const GridSpec g = random_grid(1, 3, 14);
  const Weights w = random_weights(3, 15);
  const auto K = gram_matrices(d, g);
  const Matrix C = cross_covariance(d.X, d.X, g, w, KernelFamily::kProduct);
  Matrix ref = Matrix::Zero(7, 7);
  for (int q = 0; q < 3; ++q) ref += w(q) * K[static_cast<std::size_t>(q)];
  EXPECT_LT((C - ref).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(Gram, MemoryCapIsEnforced) {
  const Dataset d = random_dataset(40, 1, 16);
  GramOptions o;
  o.memory_cap_bytes = 40 * 40 * 3 * sizeof(double) - 1;
  try {
    gram_matrices(d, random_grid(1, 3, 17), o);
    FAIL() << "expected MemoryBudgetExceeded";
  } catch (const MemoryBudgetExceeded& e) {
    EXPECT_EQ(e.requested(), 40u * 40u * 3u * sizeof(double));
  }
  o.memory_cap_bytes += 1;
  EXPECT_NO_THROW(gram_matrices(d, random_grid(1, 3, 17), o));
}

TEST(LowRank, FarApartPointsReconstructIdentity) {
  const Dataset d = line({0.0, 10.0, 20.0, 30.0, 40.0, 50.0});
  GridSpec g;
  g.mu = Matrix::Constant(1, 1, 0.1);
  g.var = Matrix::Constant(1, 1, 1.0);
  const Matrix K = gram_matrices(d, g)[0];
  FactorOptions o;
  o.rank = 6;
  const LowRankFactor f = lowrank_factor(K, o);
  EXPECT_LT((f.L * f.L.transpose() - Matrix::Identity(6, 6)).cwiseAbs().maxCoeff(), 1e-6);
}

TEST(LowRank, FullRankIsExact) {
  const Dataset d = random_dataset(12, 2, 18);
  const Matrix K = gram_matrices(d, random_grid(2, 1, 19, 0.5, 0.05, 0.1))[0];
  FactorOptions o;
  o.rank = 12;
  o.tol = 0.0;
  const LowRankFactor f = lowrank_factor(K, o);
  EXPECT_LE((K - f.L * f.L.transpose()).norm(), 1e-8 * K.norm());
}

TEST(LowRank, HalfRankIsNearTruncatedSvd) {
  const Dataset d = line({0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0, 1.1, 1.2, 1.3,
                          1.4, 1.5, 1.6, 1.7, 1.8, 1.9});
  GridSpec g;
  g.mu = Matrix::Constant(1, 1, 0.3);
  g.var = Matrix::Constant(1, 1, 0.05);
  const Matrix K = gram_matrices(d, g)[0];
  FactorOptions o;
  o.rank = 10;
  o.tol = 0.0;
  const LowRankFactor f = lowrank_factor(K, o);
  ASSERT_EQ(f.L.cols(), 10);
  Eigen::JacobiSVD<Matrix> svd(K);
  const Vector sv = svd.singularValues();
  const double svd_err = sv.tail(10).norm();
  EXPECT_LE((K - f.L * f.L.transpose()).norm(), 10.0 * svd_err);
}

TEST(LowRank, DeficientMatrixFallsBackToEigen) {
  Dataset d = line({0.0, 0.0, 1.0, 1.0, 1.0});
  GridSpec g;
  g.mu = Matrix::Constant(1, 1, 0.2);
  g.var = Matrix::Constant(1, 1, 0.01);
  const Matrix K = gram_matrices(d, g)[0];
  FactorOptions o;
  o.rank = 4;
  o.tol = 0.0;
  const LowRankFactor f = lowrank_factor(K, o);
  EXPECT_TRUE(f.eig_fallback);
  EXPECT_EQ(f.L.cols(), 4);
  EXPECT_LT((K - f.L * f.L.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LowRank, ToleranceStopsEarly) {
  Dataset d = line({0.0, 0.0, 1.0, 1.0, 1.0});
  GridSpec g;
  g.mu = Matrix::Constant(1, 1, 0.2);
  g.var = Matrix::Constant(1, 1, 0.01);
  const Matrix K = gram_matrices(d, g)[0];
  FactorOptions o;
  o.rank = 5;
  const LowRankFactor f = lowrank_factor(K, o);
  EXPECT_FALSE(f.eig_fallback);
  EXPECT_EQ(f.L.cols(), 2);
  EXPECT_LT((K - f.L * f.L.transpose()).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(LowRank, RandomFeaturesApproximateTheKernel) {
  const Dataset d = random_dataset(8, 2, 23, 1.0);
  const GridSpec g = random_grid(2, 2, 24);
  for (KernelFamily fam : {KernelFamily::kProduct, KernelFamily::kSum}) {
    GramOptions go;
    go.family = fam;
    const Matrix K = gram_matrices(d, g, go)[1];
    FactorOptions o;
    o.method = FactorMethod::kRff;
    o.rank = 20000;
    o.seed = 5;
    RffContext ctx{&d.X, &g, 1, fam};
    const LowRankFactor f = lowrank_factor(K, o, &ctx);
    EXPECT_LT((K - f.L * f.L.transpose()).cwiseAbs().maxCoeff(), 0.06);
    EXPECT_THROW(lowrank_factor(K, o), InvalidArgument);
  }
}

TEST(Workspace, FactorsReproduceGrams) {
  const Dataset d = random_dataset(10, 1, 25);
  const GridSpec g = random_grid(1, 3, 26);
  const KernelWorkspace ws = testing::exact_workspace(d, g, 0.1);
  EXPECT_EQ(ws.n(), 10);
  EXPECT_EQ(ws.Q(), 3);
  for (int q = 0; q < 3; ++q) {
    const Matrix& L = ws.lowrank[static_cast<std::size_t>(q)];
    EXPECT_LT((ws.grams[static_cast<std::size_t>(q)] - L * L.transpose()).cwiseAbs().maxCoeff(),
              1e-9);
  }
  WorkspaceOptions o;
  o.with_factors = false;
  EXPECT_TRUE(build_workspace(d, g, 0.1, o).lowrank.empty());
  EXPECT_THROW(build_workspace(d, g, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace gsmp
