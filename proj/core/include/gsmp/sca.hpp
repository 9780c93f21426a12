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

// Majorization-minimization of the negative log likelihood over the
// mixture weights, sequential (one block) or block-parallel.

#pragma once

#include <iosfwd>
#include <optional>
#include <vector>

#include "gsmp/conic.hpp"
#include "gsmp/gp.hpp"

namespace gsmp {

namespace internal {
class ThreadPool;
}

/// Disjoint contiguous blocks covering 0..Q-1. Every block has Q / s
/// members except the last, which also takes the remainder.
struct BlockPartition {
  int s = 1;
  std::vector<std::vector<int>> blocks;

  static BlockPartition make(int Q, int s);
  void validate(int Q) const;
};

enum class StepKind {
  kFull,      // Jacobi proposal accepted as is
  kDamped,    // a shorter step towards the proposal, no shorter than 1/s
  kRejected,  // neither lowered the objective; iterate kept
};

const char* to_string(StepKind k);

struct ScaIteration {
  int iteration = 0;
  Weights theta;  // iterate after this step
  double nll = 0.0;
  /// nll plus the proximal terms when present; equals nll otherwise.
  double objective = 0.0;
  double step_norm = 0.0;      // applied ||theta^{t+1} - theta^t||
  double proposal_norm = 0.0;  // ||Jacobi proposal - theta^t||
  /// Thread CPU seconds spent building and solving each block.
  std::vector<double> unit_times;
  double unit_time_max = 0.0;
  double wall_time = 0.0;
  StepKind kind = StepKind::kFull;
  /// Fraction of the proposal move applied; 0 when rejected.
  double step_scale = 1.0;
  /// Number of blocks whose solve did not report kOptimal.
  int inexact_blocks = 0;
};

struct ScaTrace {
  Weights initial_theta;
  double initial_nll = 0.0;
  double initial_objective = 0.0;
  std::vector<ScaIteration> iterations;
  bool converged = false;

  /// Columns: iteration,nll,step_norm,unit_time_max.
  void write_csv(std::ostream& os) const;
};

struct ScaResult {
  Weights theta;
  ScaTrace trace;
};

struct ScaSettings {
  int max_iter = 100;
  double step_tol = 1e-5;
  SolverSettings solver;
  /// Worker count for block solves; 0 uses one per hardware thread.
  int threads = 0;
};

/// g(theta) - h(theta_t) - grad_h(theta_t)^T (theta - theta_t).
double surrogate_value(const Weights& theta, const Weights& theta_t,
                       const KernelWorkspace& ws, const Vector& y);

ScaResult vanilla_sca(const Weights& init, const KernelWorkspace& ws, const Vector& y,
                      const ScaSettings& settings = {});

/// Jacobi scheme: every block is solved from the common iterate.
ScaResult dsca(const Weights& init, const KernelWorkspace& ws, const Vector& y,
               const BlockPartition& partition, const ScaSettings& settings = {});

/// Proximal consensus terms lambda^T (zeta - anchor) + rho/2 ||zeta - anchor||^2.
struct ProxTerm {
  Weights anchor;
  Vector lambda;
  double rho = 0.0;

  double value(const Weights& zeta) const;
};

/// Shared engine behind dsca and the local ADMM update. When a Jacobi
/// proposal raises the objective, steps of 1/2, 1/4, ... of the move are
/// tried down to 1/s. The 1/s step is the average of the block moves, which
/// cannot raise the surrogate: it is convex and majorizes.
ScaResult block_mm(const Weights& init, const KernelWorkspace& ws, const Vector& y,
                   const BlockPartition& partition, const ProxTerm* prox,
                   const ScaSettings& settings, internal::ThreadPool& pool);

}  // namespace gsmp
