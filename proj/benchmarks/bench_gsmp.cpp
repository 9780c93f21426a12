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

#include <benchmark/benchmark.h>

#include <random>

#include "gsmp/conic.hpp"
#include "gsmp/gp.hpp"
#include "gsmp/quantizer.hpp"
#include "gsmp/sca.hpp"
#include "gsmp/simnet.hpp"
#include "gsmp/synth.hpp"

namespace gsmp {
namespace {

SynthResult task(int n, int Q) {
  Sparse1dOptions o;
  o.n_train = n;
  o.Q = Q;
  o.active = {1, Q - 2};
  return sparse_1d(o);
}

void BM_GramMatrices(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SynthResult s = task(n, 20);
  for (auto _ : state) benchmark::DoNotOptimize(gram_matrices(s.train, s.truth_grid));
  state.SetItemsProcessed(state.iterations() * n * n * 20);
}
BENCHMARK(BM_GramMatrices)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

void BM_Likelihood(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const SynthResult s = task(n, 20);
  const KernelWorkspace ws = build_workspace(s.train, s.truth_grid, s.noise_var);
  const Weights w = Weights::Constant(20, 0.1);
  for (auto _ : state) benchmark::DoNotOptimize(evaluate_likelihood(w, ws, s.train.y, true));
}
BENCHMARK(BM_Likelihood)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond);

// One block program, block size given by the argument, on n = 100, Q = 20.
void BM_BlockSolve(benchmark::State& state) {
  const int b = static_cast<int>(state.range(0));
  const SynthResult s = task(100, 20);
  WorkspaceOptions wo;
  wo.factor.rank = 20;
  const KernelWorkspace ws = build_workspace(s.train, s.truth_grid, s.noise_var, wo);
  const Weights t = Weights::Constant(20, 0.1);
  const Vector gh = grad_h(t, ws);
  std::vector<int> block;
  Vector ghb(b);
  for (int k = 0; k < b; ++k) {
    block.push_back(k);
    ghb(k) = gh(k);
  }
  const ConeProgram prog = build_block_socp(block, t, ws, ghb, s.train.y);
  for (auto _ : state) benchmark::DoNotOptimize(solve(prog));
}
BENCHMARK(BM_BlockSolve)->Arg(1)->Arg(5)->Arg(20)->Unit(benchmark::kMillisecond);

void BM_DscaIteration(benchmark::State& state) {
  const int blocks = static_cast<int>(state.range(0));
  const SynthResult s = task(100, 20);
  WorkspaceOptions wo;
  wo.factor.rank = 20;
  const KernelWorkspace ws = build_workspace(s.train, s.truth_grid, s.noise_var, wo);
  ScaSettings st;
  st.max_iter = 1;
  st.threads = blocks;
  const BlockPartition part = BlockPartition::make(20, blocks);
  for (auto _ : state)
    benchmark::DoNotOptimize(dsca(Weights::Constant(20, 0.1), ws, s.train.y, part, st));
}
BENCHMARK(BM_DscaIteration)->Arg(1)->Arg(4)->Arg(10)->Unit(benchmark::kMillisecond);

void BM_CodecRoundTrip(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 2.0);
  Weights v(d);
  for (int k = 0; k < d; ++k) v(k) = u(rng);
  const Payload p = quantize_vector_keyed(v, 0.01, 3, 1, 0);
  for (auto _ : state) {
    const std::vector<std::uint8_t> bytes = encode(p);
    benchmark::DoNotOptimize(decode(bytes));
  }
  state.SetItemsProcessed(state.iterations() * d);
}
BENCHMARK(BM_CodecRoundTrip)->Arg(20)->Arg(500)->Arg(10000);

}  // namespace
}  // namespace gsmp

BENCHMARK_MAIN();
