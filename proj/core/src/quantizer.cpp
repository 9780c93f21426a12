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

#include "gsmp/quantizer.hpp"

#include <bit>
#include <cmath>

namespace gsmp {
namespace {

constexpr double kMaxIndex = 4611686018427387904.0;  // 2^62

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

void check_delta(double delta) {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw InvalidArgument("delta must be finite and > 0");
}

}  // namespace

Quantizer::Quantizer(double d, std::uint64_t seed) : delta(d), rng(seed) { check_delta(d); }

std::int64_t quantize_index(double x, double delta, double u) {
  check_delta(delta);
  if (!std::isfinite(x)) throw InvalidArgument("cannot quantize a non-finite value");
  const double r = x / delta;
  if (!(std::fabs(r) < kMaxIndex)) throw InvalidArgument("value too large for the lattice");
  const double m = std::floor(r);
  const double p_up = r - m;
  return static_cast<std::int64_t>(m) + (u < p_up ? 1 : 0);
}

double quantize(double x, Quantizer& qz) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  return static_cast<double>(quantize_index(x, qz.delta, unif(qz.rng))) * qz.delta;
}

QuantizedVector QuantizedVector::from_indices(std::vector<std::int64_t> idx, double delta) {
  check_delta(delta);
  QuantizedVector qv;
  qv.delta = delta;
  qv.indices = std::move(idx);
  if (!qv.indices.empty()) {
    qv.min_index = qv.max_index = qv.indices.front();
    for (std::int64_t m : qv.indices) {
      qv.min_index = std::min(qv.min_index, m);
      qv.max_index = std::max(qv.max_index, m);
    }
  }
  return qv;
}

Vector QuantizedVector::decode() const {
  Vector v(size());
  for (int k = 0; k < size(); ++k)
    v(k) = static_cast<double>(indices[static_cast<std::size_t>(k)]) * delta;
  return v;
}

QuantizedVector quantize_vector(const Weights& v, Quantizer& qz) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<std::int64_t> idx(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k)
    idx[static_cast<std::size_t>(k)] = quantize_index(v(k), qz.delta, unif(qz.rng));
  return QuantizedVector::from_indices(std::move(idx), qz.delta);
}

double keyed_uniform(std::uint64_t seed, std::uint64_t stream, std::uint64_t round,
                     std::uint64_t entry) {
  std::uint64_t h = splitmix64(seed);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ round);
  h = splitmix64(h ^ entry);
  return static_cast<double>(h >> 11) * 0x1.0p-53;
}

QuantizedVector quantize_vector_keyed(const Weights& v, double delta, std::uint64_t seed,
                                      std::uint64_t stream, std::uint64_t round) {
  std::vector<std::int64_t> idx(static_cast<std::size_t>(v.size()));
  for (Eigen::Index k = 0; k < v.size(); ++k)
    idx[static_cast<std::size_t>(k)] =
        quantize_index(v(k), delta, keyed_uniform(seed, stream, round, static_cast<std::uint64_t>(k)));
  return QuantizedVector::from_indices(std::move(idx), delta);
}

int index_width(const QuantizedVector& qv) {
  if (qv.max_index < qv.min_index) throw InvalidArgument("max_index < min_index");
  const auto range = static_cast<std::uint64_t>(qv.max_index) - static_cast<std::uint64_t>(qv.min_index);
  return std::max(1, static_cast<int>(std::bit_width(range)));
}

std::uint64_t bits_required(const QuantizedVector& qv) {
  return static_cast<std::uint64_t>(qv.size()) * static_cast<std::uint64_t>(index_width(qv));
}

double saving_ratio(const Weights& v, double delta) {
  check_delta(delta);
  if (v.size() == 0) return 64.0;
  const double range = v.maxCoeff() - v.minCoeff();
  if (!(range > 0.0)) return 64.0;
  return 64.0 / std::log2(range / delta + 1.0);
}

double saving_ratio(const Weights& v, const Quantizer& qz) { return saving_ratio(v, qz.delta); }

}  // namespace gsmp
