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

// Stochastic rounding onto the lattice {m * delta : m integer}.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "gsmp/kernel.hpp"

namespace gsmp {

struct Quantizer {
  double delta = 1.0;
  std::mt19937_64 rng;

  Quantizer(double delta, std::uint64_t seed);
};

/// Lattice index of x given a uniform draw u in [0, 1). Lattice points
/// map to themselves for every u.
std::int64_t quantize_index(double x, double delta, double u);

/// Unbiased: E[quantize(x)] = x and E[(quantize(x) - x)^2] <= delta^2 / 4.
double quantize(double x, Quantizer& qz);

struct QuantizedVector {
  std::vector<std::int64_t> indices;
  double delta = 1.0;
  std::int64_t min_index = 0;
  std::int64_t max_index = 0;

  /// Fills min_index and max_index from indices (both 0 when empty).
  static QuantizedVector from_indices(std::vector<std::int64_t> indices, double delta);

  int size() const { return static_cast<int>(indices.size()); }
  Vector decode() const;
};

QuantizedVector quantize_vector(const Weights& v, Quantizer& qz);

/// Draw for one entry, a pure function of its coordinates.
double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t round,
                     std::uint64_t entry);

/// Entry k uses keyed_uniform(seed, stream, round, k), so two parties that
/// agree on the coordinates reproduce each other's draws.
QuantizedVector quantize_vector_keyed(const Weights& v, double delta, std::uint64_t seed,
                                      std::uint64_t stream, std::uint64_t round);

/// Width of one packed index: max(1, ceil(log2(range + 1))).
int index_width(const QuantizedVector& qv);

/// Payload bits of the packed indices, d * index_width.
std::uint64_t bits_required(const QuantizedVector& qv);

/// 64 / log2((x_max - x_min) / delta + 1); 64 when the range is empty.
double saving_ratio(const Weights& v, double delta);
double saving_ratio(const Weights& v, const Quantizer& qz);

}  // namespace gsmp
