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

// Synthetic regression tasks drawn from known stationary kernels.

#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "gsmp/kernel.hpp"

namespace gsmp {

struct SynthResult {
  std::string kind;
  Dataset train;
  Dataset test;
  double noise_var = 0.0;
  /// Diagonal jitter that made the joint covariance factorizable.
  double jitter = 0.0;
  /// Known generating kernel in grid form when one exists.
  GridSpec truth_grid;
  Weights truth_weights;
  KernelFamily truth_family = KernelFamily::kProduct;
  /// Spectral modes (rows) of the generating density, for reporting.
  Matrix modes;
  double mode_var = 0.0;
};

/// Training inputs equally spaced on [0, x_max]; test inputs uniform on
/// the same interval. The truth is a product-family grid built from the
/// training inputs, with weight only on `active`.
struct Sparse1dOptions {
  int n_train = 200;
  int n_test = 100;
  int Q = 20;
  std::vector<int> active = {3, 8};
  std::vector<double> active_weights = {1.0, 1.0};
  double v = 1e-3;
  double noise_var = 1e-2;
  double x_max = 10.0;
  std::uint64_t seed = 0;
};

SynthResult sparse_1d(const Sparse1dOptions& opts);

/// Training inputs on a side x side lattice over [lo, hi]^2; test inputs
/// uniform in the square. Spectral density: equal-weight Gaussians at
/// (+-m, +-m) with covariance mode_var * I.
struct FourModeOptions {
  int side = 30;
  double lo = -4.0;
  double hi = 4.0;
  double m = 2.0;
  double mode_var = 1.0;
  double noise_var = 1e-2;
  int n_test = 100;
  std::uint64_t seed = 0;
};

SynthResult four_mode_2d(const FourModeOptions& opts);

/// Spectral mixture kernel sum_i alpha_i exp(-2 pi^2 v |tau|^2) cos(2 pi m_i^T tau)
/// with modes as rows.
double sm_kernel(const Vector& tau, const Matrix& modes, const Vector& alpha, double v);

/// Joint Gaussian draw with covariance K + noise_var I on the training
/// block. Returns the jitter used.
double sample_gp(const Matrix& K, Vector& f, std::uint64_t seed);

}  // namespace gsmp
