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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gsmp/consensus.hpp"

namespace gsmp::cli {

enum class Algorithm { kSca, kDsca, kD2sca, kQd2sca };

const char* to_string(Algorithm a);

/// One training job. Counts left at 0 take data-dependent defaults.
struct RunConfig {
  std::string name;
  Algorithm algorithm = Algorithm::kSca;
  std::string train;
  std::string test;
  std::string out = ".";
  int Q = 0;  // 0: 500 for one input dimension, 100 P otherwise
  int s = 1;
  int N = 1;
  std::optional<double> delta;
  double sigma2 = 1e-2;
  GridSampling sampling = GridSampling::kUniform;
  std::uint64_t grid_seed = 0;
  double v_const = 1e-3;
  std::optional<double> mu_max;
  KernelFamily family = KernelFamily::kProduct;
  int rank = 50;
  int max_iter = 100;
  double step_tol = 1e-5;
  int max_outer = 50;
  double eps_abs = 1e-4;
  double eps_rel = 1e-3;
  double rho_init = 1e-10;
  int inner_iters = 1;
  PartitionScheme partition = PartitionScheme::kContiguous;
  std::uint64_t partition_seed = 0;
  std::uint64_t quant_seed = 0;
  int threads = 0;

  int resolved_Q(int P) const { return Q > 0 ? Q : (P == 1 ? 500 : 100 * P); }
};

/// Every key a config file or flag may set.
const std::vector<std::string>& config_keys();

/// Where each key was set, as a prefix for error messages ("file:line: ").
using KeyOrigins = std::map<std::string, std::string>;

/// Throws ConfigError on an unknown key, a malformed value, or a missing
/// algorithm-specific key. Errors about a key start with its origin.
RunConfig parse_run_config(const std::map<std::string, std::string>& kv,
                           const KeyOrigins& origins = {});

}  // namespace gsmp::cli
