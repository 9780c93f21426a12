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

// Small random problem instances shared by the unit tests.

#pragma once

#include <random>
#include <vector>

#include "gsmp/kernel.hpp"

namespace gsmp::testing {

inline Dataset random_dataset(int n, int P, std::uint64_t seed, double scale = 3.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-scale, scale);
  std::normal_distribution<double> nrm(0.0, 1.0);
  Dataset d;
  d.X.resize(n, P);
  d.y.resize(n);
  for (int i = 0; i < n; ++i) {
    for (int p = 0; p < P; ++p) d.X(i, p) = u(rng);
    d.y(i) = nrm(rng);
  }
  return d;
}

inline GridSpec random_grid(int P, int Q, std::uint64_t seed, double mu_hi = 1.0,
                            double v_lo = 0.01, double v_hi = 0.1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> um(0.0, mu_hi), uv(v_lo, v_hi);
  GridSpec g;
  g.P = P;
  g.Q = Q;
  g.mu.resize(Q, P);
  g.var.resize(Q, P);
  for (int q = 0; q < Q; ++q)
    for (int p = 0; p < P; ++p) {
      g.mu(q, p) = um(rng);
      g.var(q, p) = uv(rng);
    }
  return g;
}

inline Weights random_weights(int Q, std::uint64_t seed, double hi = 1.0) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, hi);
  Weights w(Q);
  for (int q = 0; q < Q; ++q) w(q) = u(rng);
  return w;
}

/// Full-rank factors so the lifted programs are exact.
inline KernelWorkspace exact_workspace(const Dataset& d, const GridSpec& g, double noise) {
  WorkspaceOptions o;
  o.factor.rank = d.n();
  o.factor.tol = 0.0;
  return build_workspace(d, g, noise, o);
}

}  // namespace gsmp::testing
