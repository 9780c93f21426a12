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

#include "gsmp/sca.hpp"

#include <algorithm>
#include <chrono>
#include <ostream>
#include <string>

#include "gsmp/internal/thread_pool.hpp"

namespace gsmp {

BlockPartition BlockPartition::make(int Q, int s) {
  if (Q < 1) throw InvalidArgument("partition needs Q >= 1");
  if (s < 1 || s > Q) throw InvalidArgument("block count must be in [1, Q]");
  BlockPartition p;
  p.s = s;
  const int base = Q / s;
  int next = 0;
  for (int i = 0; i < s; ++i) {
    const int len = (i + 1 == s) ? Q - next : base;
    std::vector<int> b(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) b[static_cast<std::size_t>(k)] = next + k;
    next += len;
    p.blocks.push_back(std::move(b));
  }
  return p;
}

void BlockPartition::validate(int Q) const {
  if (static_cast<int>(blocks.size()) != s) throw InvalidArgument("partition size != s");
  std::vector<int> seen(static_cast<std::size_t>(Q), 0);
  for (const auto& b : blocks) {
    if (b.empty()) throw InvalidArgument("partition has an empty block");
    for (int q : b) {
      if (q < 0 || q >= Q) throw InvalidArgument("partition index out of range");
      if (seen[static_cast<std::size_t>(q)]++) throw InvalidArgument("partition blocks overlap");
    }
  }
  for (int c : seen)
    if (c == 0) throw InvalidArgument("partition does not cover every weight");
}

const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::kFull: return "full";
    case StepKind::kDamped: return "damped";
    case StepKind::kRejected: return "rejected";
  }
  return "unknown";
}

void ScaTrace::write_csv(std::ostream& os) const {
  const auto prec = os.precision(17);
  os << "iteration,nll,step_norm,unit_time_max\n";
  for (const auto& it : iterations)
    os << it.iteration << "," << it.nll << "," << it.step_norm << "," << it.unit_time_max << "\n";
  os.precision(prec);
}

double surrogate_value(const Weights& theta, const Weights& theta_t,
                       const KernelWorkspace& ws, const Vector& y) {
  const LikelihoodEval at = evaluate_likelihood(theta_t, ws, y, true);
  const LikelihoodEval e = evaluate_likelihood(theta, ws, y, false);
  return e.g - at.h - at.grad_h.dot(theta - theta_t);
}

double ProxTerm::value(const Weights& zeta) const {
  const Vector d = zeta - anchor;
  return lambda.dot(d) + 0.5 * rho * d.squaredNorm();
}

namespace {

struct BlockOutcome {
  Vector theta_block;
  double cpu = 0.0;
  bool optimal = false;
};

struct Point {
  Weights theta;
  LikelihoodEval eval;
  double objective = 0.0;
};

Point evaluate(Weights theta, const KernelWorkspace& ws, const Vector& y,
               const ProxTerm* prox) {
  Point p;
  p.eval = evaluate_likelihood(theta, ws, y, true);
  p.objective = p.eval.nll + (prox ? prox->value(theta) : 0.0);
  p.theta = std::move(theta);
  return p;
}

Vector slice(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

}  // namespace

ScaResult block_mm(const Weights& init, const KernelWorkspace& ws, const Vector& y,
                   const BlockPartition& partition, const ProxTerm* prox,
                   const ScaSettings& settings, internal::ThreadPool& pool) {
  const int Q = ws.Q();
  if (init.size() != Q) throw InvalidArgument("initial weights length != Q");
  if ((init.array() < 0.0).any()) throw InvalidArgument("initial weights must be >= 0");
  if (settings.max_iter < 1) throw InvalidArgument("max_iter must be >= 1");
  partition.validate(Q);
  if (prox) {
    if (prox->anchor.size() != Q || prox->lambda.size() != Q)
      throw InvalidArgument("proximal term length != Q");
    if (!(prox->rho > 0.0)) throw InvalidArgument("penalty must be > 0");
  }

  ScaResult res;
  Point cur = evaluate(init, ws, y, prox);
  res.trace.initial_theta = init;
  res.trace.initial_nll = cur.eval.nll;
  res.trace.initial_objective = cur.objective;

  const int s = partition.s;
  for (int t = 0; t < settings.max_iter; ++t) {
    const auto wall0 = std::chrono::steady_clock::now();
    std::vector<BlockOutcome> out(static_cast<std::size_t>(s));
    pool.parallel_for(s, [&](int i) {
      const double c0 = internal::thread_cpu_seconds();
      const std::vector<int>& block = partition.blocks[static_cast<std::size_t>(i)];
      const Vector gh = slice(cur.eval.grad_h, block);
      const ConeProgram prog =
          prox ? build_local_socp(block, cur.theta, slice(prox->anchor, block),
                                  slice(prox->lambda, block), prox->rho, ws, gh, y)
               : build_block_socp(block, cur.theta, ws, gh, y);
      const ConeSolution sol = solve(prog, settings.solver);
      if (sol.status == SolveStatus::kInfeasible)
        throw Error("block " + std::to_string(i) + " subproblem reported infeasible");
      BlockOutcome& o = out[static_cast<std::size_t>(i)];
      // Interior-point iterates sit strictly inside; clip round-off only.
      o.theta_block = sol.theta_block.cwiseMax(0.0);
      o.optimal = sol.status == SolveStatus::kOptimal;
      o.cpu = internal::thread_cpu_seconds() - c0;
    });

    ScaIteration rec;
    rec.iteration = t + 1;
    Weights proposal = cur.theta;
    for (int i = 0; i < s; ++i) {
      const auto& block = partition.blocks[static_cast<std::size_t>(i)];
      const BlockOutcome& o = out[static_cast<std::size_t>(i)];
      for (std::size_t k = 0; k < block.size(); ++k)
        proposal(block[k]) = o.theta_block(static_cast<Eigen::Index>(k));
      rec.unit_times.push_back(o.cpu);
      if (!o.optimal) ++rec.inexact_blocks;
    }
    rec.unit_time_max = *std::max_element(rec.unit_times.begin(), rec.unit_times.end());
    rec.proposal_norm = (proposal - cur.theta).norm();

    Point next = evaluate(proposal, ws, y, prox);
    rec.kind = StepKind::kFull;
    if (!(next.objective <= cur.objective)) {
      rec.kind = StepKind::kRejected;
      // Halve towards the anchor; the last trial is exactly 1/s.
      const double floor = 1.0 / static_cast<double>(s);
      for (double a = 0.5; s > 1; a *= 0.5) {
        const double alpha = std::max(a, floor);
        Weights damped = (cur.theta + alpha * (proposal - cur.theta)).cwiseMax(0.0);
        Point alt = evaluate(std::move(damped), ws, y, prox);
        if (alt.objective <= cur.objective) {
          next = std::move(alt);
          rec.kind = StepKind::kDamped;
          rec.step_scale = alpha;
          break;
        }
        if (alpha == floor) break;
      }
    }
    if (rec.kind == StepKind::kRejected) {
      next = cur;
      rec.step_scale = 0.0;
    }

    rec.step_norm = (next.theta - cur.theta).norm();
    cur = std::move(next);
    rec.theta = cur.theta;
    rec.nll = cur.eval.nll;
    rec.objective = cur.objective;
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    res.trace.iterations.push_back(std::move(rec));

    const ScaIteration& last = res.trace.iterations.back();
    if (last.kind == StepKind::kRejected) {
      // No accepted move exists from here; a proposal this small counts.
      res.trace.converged = last.proposal_norm <= settings.step_tol;
      break;
    }
    if (last.step_norm <= settings.step_tol) {
      res.trace.converged = true;
      break;
    }
  }
  res.theta = cur.theta;
  return res;
}

ScaResult dsca(const Weights& init, const KernelWorkspace& ws, const Vector& y,
               const BlockPartition& partition, const ScaSettings& settings) {
  internal::ThreadPool pool(settings.threads > 0 ? std::min(settings.threads, partition.s) : 0);
  return block_mm(init, ws, y, partition, nullptr, settings, pool);
}

ScaResult vanilla_sca(const Weights& init, const KernelWorkspace& ws, const Vector& y,
                      const ScaSettings& settings) {
  return dsca(init, ws, y, BlockPartition::make(ws.Q(), 1), settings);
}

}  // namespace gsmp
