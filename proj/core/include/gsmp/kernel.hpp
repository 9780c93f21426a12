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

#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "gsmp/common.hpp"

namespace gsmp {

/// Frequency grid of a spectral mixture. mu and var are Q x P.
struct GridSpec {
  int P = 1;
  int Q = 1;
  Matrix mu;
  Matrix var;
  std::uint64_t seed = 0;

  /// Throws InvalidArgument when an invariant is broken.
  void validate() const;
};

/// Nonnegative mixture weights, one per grid point.
using Weights = Vector;

struct Dataset {
  Matrix X;  // n x P
  Vector y;  // n

  int n() const { return static_cast<int>(X.rows()); }
  int P() const { return static_cast<int>(X.cols()); }
  void validate() const;
  Dataset subset(const std::vector<int>& rows) const;
};

enum class GridSampling { kUniform, kRandom };

/// Mixture family. kProduct is the per-dimension product kernel; kSum is
/// the multi-dimensional baseline whose cross terms are not factorized.
enum class KernelFamily { kProduct, kSum };

struct GridOptions {
  int Q = 1;
  GridSampling sampling = GridSampling::kUniform;
  double v_const = 1e-3;
  std::uint64_t seed = 0;
  /// Overrides the per-dimension upper frequency when set.
  std::optional<std::vector<double>> mu_max;
};

/// Per-dimension Nyquist bound 1 / (2 * min spacing of distinct values).
std::vector<double> nyquist_bound(const Matrix& X);

GridSpec build_grid(const Dataset& data, int Q, GridSampling sampling,
                    double v_const, std::uint64_t seed);
GridSpec build_grid(const Dataset& data, const GridOptions& opts);

double eval_gsmp(const Vector& tau, const GridSpec& grid, const Weights& w);
double eval_gsm_md(const Vector& tau, const GridSpec& grid, const Weights& w);

/// Density of the product kernel, prefactor 1/2^P.
double spectral_density(const Vector& omega, const GridSpec& grid,
                        const Weights& w);
/// Density of the sum-form baseline: two modes per component at +-mu_q.
double spectral_density_gsm_md(const Vector& omega, const GridSpec& grid,
                               const Weights& w);

/// Unit-weight sub-kernel q at lag tau.
double sub_kernel(const GridSpec& grid, int q, const double* tau,
                  KernelFamily family);

struct GramOptions {
  KernelFamily family = KernelFamily::kProduct;
  std::size_t memory_cap_bytes = std::size_t{2} << 30;
};

std::vector<Matrix> gram_matrices(const Dataset& data, const GridSpec& grid,
                                  const GramOptions& opts = {});

/// Cross covariance sum_q theta_q k_q(Xa_i - Xb_j).
Matrix cross_covariance(const Matrix& Xa, const Matrix& Xb,
                        const GridSpec& grid, const Weights& w,
                        KernelFamily family);

enum class FactorMethod { kNystrom, kRff };

struct FactorOptions {
  FactorMethod method = FactorMethod::kNystrom;
  /// Hard cap on the number of columns.
  int rank = 50;
  /// Pivoted Cholesky stops once the residual trace falls below
  /// tol * trace(K). Zero forces exactly `rank` columns.
  double tol = 1e-12;
  std::uint64_t seed = 0;
};

struct LowRankFactor {
  Matrix L;  // n x r
  bool eig_fallback = false;
  /// Residual trace of K - L L^T divided by trace(K).
  double residual_trace = 0.0;
};

/// Inputs needed by the random-feature method, which samples the density
/// rather than reading K.
struct RffContext {
  const Matrix* X = nullptr;
  const GridSpec* grid = nullptr;
  int q = 0;
  KernelFamily family = KernelFamily::kProduct;
};

LowRankFactor lowrank_factor(const Matrix& K, const FactorOptions& opts,
                             const RffContext* rff = nullptr);

struct KernelWorkspace {
  std::vector<Matrix> grams;
  std::vector<Matrix> lowrank;
  std::vector<bool> eig_fallback;
  double noise_var = 1e-2;
  KernelFamily family = KernelFamily::kProduct;

  int n() const { return grams.empty() ? 0 : static_cast<int>(grams[0].rows()); }
  int Q() const { return static_cast<int>(grams.size()); }
  int total_rank() const;
};

struct WorkspaceOptions {
  GramOptions gram;
  FactorOptions factor;
  /// Prediction needs only the Gram matrices.
  bool with_factors = true;
};

KernelWorkspace build_workspace(const Dataset& data, const GridSpec& grid,
                                double noise_var,
                                const WorkspaceOptions& opts = {});

}  // namespace gsmp
