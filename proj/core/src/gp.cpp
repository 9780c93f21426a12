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

#include "gsmp/gp.hpp"

#include <cmath>
#include <cstring>
#include <functional>
#include <string_view>

namespace gsmp {
namespace {

void check(const Weights& w, const KernelWorkspace& ws) {
  if (w.size() != ws.Q()) throw InvalidArgument("weights length != Q");
  if ((w.array() < 0.0).any()) throw InvalidArgument("weights must be >= 0");
}

}  // namespace

Matrix covariance(const Weights& w, const KernelWorkspace& ws) {
  check(w, ws);
  const int n = ws.n();
  Matrix C = Matrix::Identity(n, n) * ws.noise_var;
  for (int q = 0; q < ws.Q(); ++q)
    if (w(q) != 0.0) C.noalias() += w(q) * ws.grams[static_cast<std::size_t>(q)];
  return C;
}

LikelihoodEval evaluate_likelihood(const Weights& w, const KernelWorkspace& ws,
                                   const Vector& y, bool with_gradients) {
  if (y.size() != ws.n()) throw InvalidArgument("targets length != n");
  Matrix C = covariance(w, ws);
  LikelihoodEval e;
  e.jitter = kJitterFactor * C.diagonal().mean();
  C.diagonal().array() += e.jitter;
  Eigen::LLT<Matrix> llt(C);
  if (llt.info() != Eigen::Success)
    throw FactorizationFailure("covariance is not positive definite",
                               C.diagonal().minCoeff());
  e.chol = llt.matrixL();
  const Vector d = e.chol.diagonal();
  if (!(d.minCoeff() > 0.0) || !d.allFinite())
    throw FactorizationFailure("covariance factor has a nonpositive pivot", d.minCoeff());
  e.alpha = llt.solve(y);
  e.g = y.dot(e.alpha);
  e.h = -2.0 * d.array().log().sum();
  e.nll = e.g - e.h;
  if (with_gradients) {
    const int n = ws.n();
    Matrix Cinv = Matrix::Identity(n, n);
    llt.solveInPlace(Cinv);
    e.grad_h.resize(ws.Q());
    e.grad_g.resize(ws.Q());
    for (int q = 0; q < ws.Q(); ++q) {
      const Matrix& K = ws.grams[static_cast<std::size_t>(q)];
      // Both matrices are symmetric, so the trace is an entrywise sum.
      e.grad_h(q) = -Cinv.cwiseProduct(K).sum();
      e.grad_g(q) = -e.alpha.dot(K * e.alpha);
    }
  }
  return e;
}

double nll(const Weights& w, const KernelWorkspace& ws, const Vector& y) {
  return evaluate_likelihood(w, ws, y, false).nll;
}

GHSplit split_g_h(const Weights& w, const KernelWorkspace& ws, const Vector& y) {
  const LikelihoodEval e = evaluate_likelihood(w, ws, y, false);
  return {e.g, e.h};
}

Vector grad_h(const Weights& w, const KernelWorkspace& ws) {
  return evaluate_likelihood(w, ws, Vector::Zero(ws.n()), true).grad_h;
}

std::shared_ptr<const LikelihoodEval> LikelihoodCache::get(const Weights& w,
                                                           bool with_gradients) {
  const std::size_t hash = std::hash<std::string_view>{}(std::string_view(
      reinterpret_cast<const char*>(w.data()), sizeof(double) * static_cast<std::size_t>(w.size())));
  std::lock_guard<std::mutex> lock(mu_);
  if (value_ && hash == key_hash_ && key_.size() == w.size() &&
      std::memcmp(key_.data(), w.data(), sizeof(double) * static_cast<std::size_t>(w.size())) == 0 &&
      (!with_gradients || value_->grad_h.size() > 0))
    return value_;
  value_ = std::make_shared<LikelihoodEval>(evaluate_likelihood(w, *ws_, y_, with_gradients));
  key_ = w;
  key_hash_ = hash;
  return value_;
}

Posterior predict(const GPModel& model, const Matrix& Xstar) {
  if (Xstar.cols() != model.grid.P) throw InvalidArgument("test inputs have wrong dimension");
  if (!model.workspace) throw InvalidArgument("model has no workspace");
  const KernelWorkspace& ws = *model.workspace;
  const LikelihoodEval e = evaluate_likelihood(model.weights, ws, model.train.y, false);
  const Matrix Ksx = cross_covariance(Xstar, model.train.X, model.grid, model.weights, ws.family);
  const Matrix Kss = cross_covariance(Xstar, Xstar, model.grid, model.weights, ws.family);
  Posterior post;
  post.mean = Ksx * e.alpha;
  const auto L = e.chol.triangularView<Eigen::Lower>();
  const Matrix V = L.solve(Ksx.transpose());
  post.cov = Kss - V.transpose() * V;
  post.cov = 0.5 * (post.cov + post.cov.transpose());
  return post;
}

double mse(const Vector& pred, const Vector& truth) {
  if (pred.size() != truth.size()) throw InvalidArgument("mse: length mismatch");
  if (pred.size() == 0) throw InvalidArgument("mse: empty input");
  return (pred - truth).squaredNorm() / static_cast<double>(pred.size());
}

}  // namespace gsmp
