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

// Consensus ADMM over N agents that each hold a private data partition
// and run block-parallel MM on their augmented local objective.

#pragma once

#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "gsmp/sca.hpp"
#include "gsmp/simnet.hpp"

namespace gsmp {

enum class PartitionScheme { kContiguous, kStrided, kRandom };

/// Disjoint row sets covering 0..n-1 whose sizes differ by at most one.
/// Each set is sorted ascending.
std::vector<std::vector<int>> partition_indices(int n, int N, PartitionScheme scheme,
                                                std::uint64_t seed);
std::vector<Dataset> partition_data(const Dataset& full, int N, PartitionScheme scheme,
                                    std::uint64_t seed);

struct AgentState {
  int id = 0;
  Dataset data;
  std::shared_ptr<const KernelWorkspace> ws;
  Weights zeta;
  Vector lambda;
  double rho = 1e-10;
  std::uint64_t tx_bits = 0;
  std::uint64_t rx_bits = 0;
};

/// Average of zeta_j + lambda_j / rho_j, clipped to the nonnegative orthant.
/// Sets *projected when the clip changed an entry.
Weights consensus_update(const std::vector<Weights>& zetas, const std::vector<Vector>& lambdas,
                         const std::vector<double>& rhos, bool* projected = nullptr);
Weights consensus_update(const std::vector<AgentState>& agents, bool* projected = nullptr);

struct LocalSettings {
  int s = 1;
  /// Inner MM passes per outer iteration.
  int max_iter = 1;
  double step_tol = 1e-5;
  SolverSettings solver;
};

struct LocalResult {
  Weights zeta;
  ScaTrace trace;
  /// The inner passes started from theta rather than from the previous zeta.
  bool started_at_theta = false;
};

/// Augmented local objective l(zeta; D_j) + lambda^T (zeta - theta) +
/// rho/2 ||zeta - theta||^2.
double augmented_objective(const AgentState& agent, const Weights& zeta, const Weights& theta);

/// Approximately minimizes the augmented local objective, starting from
/// whichever of the previous zeta and theta scores lower.
LocalResult local_update(const AgentState& agent, const Weights& theta,
                         const LocalSettings& settings, internal::ThreadPool& pool);
LocalResult local_update(const AgentState& agent, const Weights& theta,
                         const LocalSettings& settings);

/// lambda + rho (zeta - theta).
Vector dual_update(const Vector& lambda, double rho, const Weights& zeta, const Weights& theta);

/// Residual balancing. The duals are stored unscaled, so a change of rho
/// leaves lambda as is.
double adapt_rho(double rho, double primal, double dual, double mu = 10.0, double kappa = 2.0);

struct AdmmSettings {
  int max_outer = 50;
  double eps_abs = 1e-4;
  double eps_rel = 1e-3;
  double rho_init = 1e-10;
  bool adapt = true;
  double mu = 10.0;
  double kappa = 2.0;
  LocalSettings local;
  PartitionScheme scheme = PartitionScheme::kContiguous;
  std::uint64_t partition_seed = 0;
  double noise_var = 1e-2;
  WorkspaceOptions workspace;
};

struct AdmmIteration {
  int iteration = 0;
  Weights theta;             // consensus iterate
  Weights theta_sent;        // what the agents received
  std::vector<Weights> zetas;       // local iterates, as the agents hold them
  std::vector<Weights> zetas_sent;  // what the orchestrator received
  std::vector<Vector> lambdas;
  std::vector<Vector> lambdas_mirror;  // orchestrator's reconstruction
  std::vector<double> rhos;
  double primal_residual = 0.0;  // max_j ||zeta_j - theta||
  double dual_residual = 0.0;    // max_j rho_j ||theta^{t+1} - theta^t||
  double eps_primal = 0.0;
  double eps_dual = 0.0;
  std::vector<double> agent_nll;           // l(zeta_j; D_j)
  std::vector<double> agent_nll_at_theta;  // l(theta; D_j)
  double nll_proxy = 0.0;                  // sum of agent_nll
  double lagrangian = 0.0;
  bool projection_active = false;
  std::vector<double> unit_time_max;  // per agent
  std::vector<std::uint64_t> uplink_payload_bits;  // per agent
  std::uint64_t downlink_payload_bits = 0;
  double wall_time = 0.0;
};

struct AdmmTrace {
  std::vector<AdmmIteration> iterations;

  /// Columns: iteration,primal_residual,dual_residual,nll_proxy,wall_time.
  void write_csv(std::ostream& os) const;
};

struct AdmmResult {
  Weights theta;
  AdmmTrace trace;
  bool converged = false;
  GridSpec grid;
  std::shared_ptr<Bus> bus;
  std::vector<AgentState> agents;
};

/// Full-precision exchanges over the bus.
AdmmResult d2sca(const Dataset& full, const GridSpec& grid, int N, int s,
                 const AdmmSettings& settings = {});

namespace internal {

struct QuantOptions {
  double delta = 0.01;
  std::uint64_t seed = 0;
};

/// Shared outer loop; quantizes both directions when quant is set.
AdmmResult run_admm(const Dataset& full, const GridSpec& grid, int N, int s,
                    const AdmmSettings& settings, const QuantOptions* quant);

}  // namespace internal

}  // namespace gsmp
