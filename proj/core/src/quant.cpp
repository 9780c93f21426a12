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

#include "gsmp/quant.hpp"

namespace gsmp {

AdmmResult qd2sca(const Dataset& full, const GridSpec& grid, int N, int s, double delta,
                  const AdmmSettings& settings, std::uint64_t seed) {
  if (!(delta > 0.0)) throw InvalidArgument("delta must be > 0");
  const internal::QuantOptions q{delta, seed};
  return internal::run_admm(full, grid, N, s, settings, &q);
}

}  // namespace gsmp
