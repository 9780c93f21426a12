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

// Second-order cone programs for the block weight subproblems, and an
// interior-point solver for them.
//
// A program is
//   minimize    c^T x
//   subject to  A x = b
//               x_k >= 0            for k in nonneg
//               D_j x[members_j] + e_j in SOC(dim_j)   for every cone j
// where SOC(d) = { u in R^d : u_0 >= ||u_{1:}|| }.

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "gsmp/kernel.hpp"

namespace gsmp {

struct VarRange {
  int offset = 0;
  int length = 0;
};

struct SocConstraint {
  std::vector<int> members;
  Matrix D;  // dim x members.size()
  Vector e;  // dim
  int dim() const { return static_cast<int>(e.size()); }
};

/// Names the variable blocks of a weight subproblem.
struct VariableLayout {
  VarRange theta;
  VarRange z;   // z_0 then one per block member
  VarRange w0;  // rows of the frozen part
  std::vector<VarRange> w;
  std::optional<int> v;  // proximal epigraph variable
};

struct ConeProgram {
  int num_vars = 0;
  Vector c;
  Matrix A;
  Vector b;
  std::vector<int> nonneg;
  std::vector<SocConstraint> cones;
  VariableLayout layout;
  /// Columns whose restriction of A is square and invertible. The solver
  /// eliminates them before iterating.
  std::optional<VarRange> eliminate;

  /// Throws InvalidArgument if the program is malformed.
  void validate() const;
};

enum class SolveStatus { kOptimal, kMaxIter, kInfeasible };

const char* to_string(SolveStatus s);

struct KktResiduals {
  double primal = 0.0;
  double dual = 0.0;
  double gap = 0.0;
  double relgap = 0.0;
};

struct ConeSolution {
  Vector x;
  Vector theta_block;
  double objective_value = 0.0;
  SolveStatus status = SolveStatus::kMaxIter;
  /// Set with kInfeasible when the certificate proves dual infeasibility.
  bool dual_infeasible = false;
  KktResiduals kkt;
  int iterations = 0;
};

struct SolverSettings {
  double tol = 1e-8;
  int max_iter = 200;
  /// Prints one line of residuals per iteration to stderr.
  bool verbose = false;
};

ConeSolution solve(const ConeProgram& prog, const SolverSettings& settings = {});

/// Frozen covariance sum_{q not in block} theta_q K_q + noise I + jitter,
/// where the jitter matches evaluate_likelihood at theta.
Matrix frozen_covariance(const std::vector<int>& block, const Weights& theta,
                         const KernelWorkspace& ws);

/// min 1^T z - grad_h_block^T theta_block with the matrix-fractional term
/// lifted into rotated cones. Throws FactorizationFailure if the frozen
/// part is not positive definite.
ConeProgram build_block_socp(const std::vector<int>& block, const Weights& theta_t,
                             const KernelWorkspace& ws, const Vector& grad_h_block,
                             const Vector& y);

/// Same program with the given factor F (F F^T = frozen part).
ConeProgram build_block_socp_with_factor(const std::vector<int>& block,
                                         const Matrix& F, const KernelWorkspace& ws,
                                         const Vector& grad_h_block, const Vector& y);

/// Adds (lambda - grad_h)^T zeta + (rho/2) v with v >= ||zeta - theta||^2.
ConeProgram build_local_socp(const std::vector<int>& block, const Weights& zeta_frozen,
                             const Vector& theta_global_block, const Vector& dual_block,
                             double rho, const KernelWorkspace& ws,
                             const Vector& grad_h_block, const Vector& y);

/// Plain-text listing of the program, one section per constraint family.
void dump(const ConeProgram& prog, std::ostream& os);

}  // namespace gsmp
