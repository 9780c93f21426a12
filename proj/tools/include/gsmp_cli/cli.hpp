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
#include <iosfwd>

#include "gsmp/gp.hpp"
#include "gsmp_cli/run_config.hpp"

namespace gsmp::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitData = 2,
  kExitNotConverged = 3,
};

struct TrainOutcome {
  GPModel model;
  bool converged = false;
  /// Sum over outer iterations of the slowest unit's thread CPU seconds.
  double unit_time_max = 0.0;
  std::uint64_t uplink_payload_bits = 0;
  double wall_seconds = 0.0;
};

/// Trains on `data` and, when out_dir is nonempty, writes model.json and
/// the traces there.
TrainOutcome train(const RunConfig& cfg, const Dataset& data, const std::string& out_dir,
                   std::ostream& log);

/// Entry point of the executable; returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace gsmp::cli
