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

// Jordan algebra and Nesterov-Todd scaling on a product of one
// nonnegative orthant (first l coordinates) and second-order cones.

#pragma once

#include <vector>

#include "gsmp/common.hpp"

namespace gsmp::internal {

struct ConeSpace {
  int l = 0;
  std::vector<int> soc_off;
  std::vector<int> soc_dim;
  int m = 0;
  int degree() const { return l + static_cast<int>(soc_dim.size()); }
};

/// W for the orthant is diag(d); for cone j it is eta_j (2 wbar wbar^T - J)
/// with wbar^T J wbar = 1.
/// lambda = W z = W^{-1} s.
struct Scaling {
  Vector d;
  std::vector<double> eta;
  std::vector<Vector> wbar;
  Vector lambda;
};

Scaling identity_scaling(const ConeSpace& K);
/// Requires s and z strictly interior.
Scaling nt_scaling(const ConeSpace& K, const Vector& s, const Vector& z);

Vector apply_w(const ConeSpace& K, const Scaling& W, const Vector& x);
Vector apply_winv(const ConeSpace& K, const Scaling& W, const Vector& x);
Vector apply_w2(const ConeSpace& K, const Scaling& W, const Vector& x);
Vector apply_winv2(const ConeSpace& K, const Scaling& W, const Vector& x);
/// W^{-1} applied to every column of a d x k block of one cone.
Matrix soc_apply_winv_cols(double eta, const Vector& wbar, const Matrix& G);

Vector jordan_prod(const ConeSpace& K, const Vector& u, const Vector& v);
/// Solves lambda o x = d for x.
Vector jordan_div(const ConeSpace& K, const Vector& lambda, const Vector& d);
Vector identity(const ConeSpace& K);

/// Largest alpha with u + alpha du in K (infinity if unbounded); u interior.
double max_step(const ConeSpace& K, const Vector& u, const Vector& du);
/// Shifts u along the identity until its smallest eigenvalue is at least 1.
void shift_interior(const ConeSpace& K, Vector& u);

/// J-determinant u_0^2 - ||u_1||^2 computed as a product of factors.
double soc_det(const Eigen::Ref<const Vector>& u);

}  // namespace gsmp::internal
