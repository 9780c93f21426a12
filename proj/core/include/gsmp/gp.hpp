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

#include <memory>
#include <mutex>

#include "gsmp/kernel.hpp"

namespace gsmp {

/// Relative jitter added to the diagonal before every factorization.
inline constexpr double kJitterFactor = 1e-10;

/// C(theta) = sum_q theta_q K_q + noise I, without jitter.
Matrix covariance(const Weights& w, const KernelWorkspace& ws);

/// One factorization of C(theta) and everything derived from it.
struct LikelihoodEval {
  double g = 0.0;       // y^T C^{-1} y
  double h = 0.0;       // -log det C
  double nll = 0.0;     // g - h
  double jitter = 0.0;  // added to the diagonal
  Matrix chol;          // lower Cholesky factor of C + jitter I
  Vector alpha;         // C^{-1} y
  Vector grad_h;        // -Tr(C^{-1} K_q); empty unless requested
  Vector grad_g;        // -alpha^T K_q alpha; empty unless requested
};

/// Factorizes C(w). Throws FactorizationFailure.
LikelihoodEval evaluate_likelihood(const Weights& w, const KernelWorkspace& ws,
                                   const Vector& y, bool with_gradients);

double nll(const Weights& w, const KernelWorkspace& ws, const Vector& y);

struct GHSplit {
  double g;
  double h;
};
GHSplit split_g_h(const Weights& w, const KernelWorkspace& ws, const Vector& y);

Vector grad_h(const Weights& w, const KernelWorkspace& ws);

/// Single-entry cache keyed on the exact bytes of theta.
class LikelihoodCache {
 public:
  LikelihoodCache(const KernelWorkspace& ws, Vector y)
      : ws_(&ws), y_(std::move(y)) {}

  std::shared_ptr<const LikelihoodEval> get(const Weights& w, bool with_gradients);
  const Vector& y() const { return y_; }
  const KernelWorkspace& workspace() const { return *ws_; }

 private:
  const KernelWorkspace* ws_;
  Vector y_;
  std::mutex mu_;
  Weights key_;
  std::size_t key_hash_ = 0;
  std::shared_ptr<const LikelihoodEval> value_;
};

struct GPModel {
  GridSpec grid;
  Weights weights;
  double noise_var = 1e-2;
  Dataset train;
  std::shared_ptr<const KernelWorkspace> workspace;
};

struct Posterior {
  Vector mean;
  Matrix cov;
};

Posterior predict(const GPModel& model, const Matrix& Xstar);

double mse(const Vector& pred, const Vector& truth);

}  // namespace gsmp
