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

// Consensus ADMM with stochastically quantized exchanges.

#pragma once

#include "gsmp/consensus.hpp"
#include "gsmp/quantizer.hpp"

namespace gsmp {

/// Both directions carry lattice vectors of step delta. The duals never
/// travel: each side updates them from the quantized vectors it already
/// holds, so the mirrors agree bitwise. Draws are keyed by (seed, sender,
/// round, entry), with the orchestrator as stream 0 and agent j as j + 1.
AdmmResult qd2sca(const Dataset& full, const GridSpec& grid, int N, int s, double delta,
                  const AdmmSettings& settings = {}, std::uint64_t seed = 0);

}  // namespace gsmp
