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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "gsmp/quantizer.hpp"

namespace gsmp {
namespace {

TEST(Quantize, LatticePointsAreFixed) {
  Quantizer qz(0.25, 1);
  for (int m = -8; m <= 8; ++m)
    for (int k = 0; k < 50; ++k) EXPECT_EQ(quantize(m * 0.25, qz), m * 0.25);
  for (double u : {0.0, 0.3, 0.999999}) EXPECT_EQ(quantize_index(-1.5, 0.5, u), -3);
}

TEST(Quantize, MidpointIsAFairCoin) {
  EXPECT_EQ(quantize_index(0.5, 1.0, 0.49), 1);
  EXPECT_EQ(quantize_index(0.5, 1.0, 0.5), 0);
  Quantizer qz(1.0, 2);
  int ones = 0;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const double q = quantize(0.5, qz);
    ASSERT_TRUE(q == 0.0 || q == 1.0);
    ones += q == 1.0;
  }
  // Binomial(1e5, 1/2) has standard deviation 158.
  EXPECT_NEAR(ones, draws / 2, 3 * 158);
}

TEST(Quantize, UnbiasedWithBoundedVariance) {
  Quantizer qz(1.0, 3);
  const int draws = 100000;
  double sum = 0.0, sq = 0.0;
  for (int k = 0; k < draws; ++k) {
    const double e = quantize(0.3, qz) - 0.3;
    sum += e;
    sq += e * e;
  }
  EXPECT_LE(std::fabs(sum / draws), 3.0 * 0.5 / std::sqrt(draws));
  EXPECT_LE(sq / draws, 0.25);
}

TEST(Quantize, RejectsBadInputs) {
  EXPECT_THROW(Quantizer(0.0, 0), InvalidArgument);
  EXPECT_THROW(Quantizer(-1.0, 0), InvalidArgument);
  EXPECT_THROW(quantize_index(std::nan(""), 1.0, 0.5), InvalidArgument);
  EXPECT_THROW(quantize_index(1e300, 1e-12, 0.5), InvalidArgument);
}

TEST(Vector, LatticeVectorRoundTrips) {
  Quantizer qz(0.5, 4);
  const Weights v{{0.0, 0.5, 1.0, -2.5, 3.0}};
  const QuantizedVector qv = quantize_vector(v, qz);
  EXPECT_EQ(qv.decode(), v);
  EXPECT_EQ(qv.min_index, -5);
  EXPECT_EQ(qv.max_index, 6);
}

TEST(Vector, FineLatticeIsNearlyExact) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  Weights v(50);
  for (int k = 0; k < 50; ++k) v(k) = u(rng);
  Quantizer qz(1e-12, 6);
  EXPECT_LE((quantize_vector(v, qz).decode() - v).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Vector, ErrorBelowOneStep) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  Quantizer qz(0.1, 8);
  for (int trial = 0; trial < 100; ++trial) {
    Weights v(30);
    for (int k = 0; k < 30; ++k) v(k) = u(rng);
    EXPECT_LT((quantize_vector(v, qz).decode() - v).cwiseAbs().maxCoeff(), 0.1);
  }
}

TEST(Vector, KeyedDrawsArePureFunctions) {
  const Weights v = Weights::LinSpaced(20, 0.0, 1.9);
  const QuantizedVector a = quantize_vector_keyed(v, 0.3, 11, 2, 5);
  const QuantizedVector b = quantize_vector_keyed(v, 0.3, 11, 2, 5);
  EXPECT_EQ(a.indices, b.indices);
  const double u = keyed_uniform(11, 2, 5, 3);
  EXPECT_EQ(u, keyed_uniform(11, 2, 5, 3));
  EXPECT_GE(u, 0.0);
  EXPECT_LT(u, 1.0);
  EXPECT_NE(u, keyed_uniform(11, 2, 6, 3));
  EXPECT_NE(u, keyed_uniform(11, 3, 5, 3));
  EXPECT_NE(u, keyed_uniform(12, 2, 5, 3));
  EXPECT_EQ(a.indices[3], quantize_index(v(3), 0.3, u));
}

TEST(Vector, KeyedDrawsAreUniform) {
  // Kolmogorov-Smirnov distance of 1e4 draws; the 0.1% critical value is 0.0195.
  std::vector<double> u;
  for (std::uint64_t k = 0; k < 10000; ++k) u.push_back(keyed_uniform(1, 0, k / 100, k % 100));
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i)
    ks = std::max({ks, std::fabs(u[i] - static_cast<double>(i) / u.size()),
                   std::fabs(u[i] - static_cast<double>(i + 1) / u.size())});
  EXPECT_LT(ks, 0.0195);
}

TEST(Bits, WidthFollowsTheRange) {
  EXPECT_EQ(index_width(QuantizedVector::from_indices({0, 1, 2}, 0.5)), 2);
  EXPECT_EQ(index_width(QuantizedVector::from_indices({3, 3}, 0.5)), 1);
  EXPECT_EQ(index_width(QuantizedVector::from_indices({-7, 8}, 1.0)), 4);
  EXPECT_EQ(index_width(QuantizedVector::from_indices({0, 16}, 1.0)), 5);
  std::vector<std::int64_t> idx(500, 0);
  idx[17] = 15;
  const QuantizedVector qv = QuantizedVector::from_indices(idx, 1.0);
  EXPECT_EQ(bits_required(qv), 2000u);
  EXPECT_EQ(bits_required(QuantizedVector::from_indices({}, 1.0)), 0u);
}

TEST(Bits, SavingRatioExamples) {
  EXPECT_DOUBLE_EQ(saving_ratio(Weights{{0.0, 15.0, 3.0}}, 1.0), 16.0);
  EXPECT_DOUBLE_EQ(saving_ratio(Weights{{1.0, 3.5}}, 2.5), 64.0);
  EXPECT_DOUBLE_EQ(saving_ratio(Weights{{2.0, 2.0}}, 0.1), 64.0);
  Quantizer qz(1.0, 0);
  EXPECT_DOUBLE_EQ(saving_ratio(Weights{{0.0, 15.0}}, qz), 16.0);
  EXPECT_THROW(saving_ratio(Weights{{0.0, 1.0}}, 0.0), InvalidArgument);
}

}  // namespace
}  // namespace gsmp
