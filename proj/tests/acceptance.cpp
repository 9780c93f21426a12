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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Pass criterion numbers as arguments to run a subset.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "gsmp/conic.hpp"
#include "gsmp/consensus.hpp"
#include "gsmp/gp.hpp"
#include "gsmp/quant.hpp"
#include "gsmp/quantizer.hpp"
#include "gsmp/sca.hpp"
#include "gsmp/synth.hpp"
#include "oracles.hpp"

namespace gsmp {
namespace {

using testing::exact_workspace;
using testing::random_dataset;
using testing::random_grid;
using testing::random_weights;

struct Verdict {
  bool pass = true;
  std::string detail;
};

// Collects the first failure message and the worst observed margins.
class Checker {
 public:
  void require(bool ok, const std::string& what) {
    if (!ok && first_.empty()) first_ = what;
    pass_ = pass_ && ok;
  }
  void note(const std::string& s) { notes_ += (notes_.empty() ? "" : "; ") + s; }
  Verdict verdict() const {
    return {pass_, first_.empty() ? notes_ : first_ + " [" + notes_ + "]"};
  }

 private:
  bool pass_ = true;
  std::string first_, notes_;
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

Vector slice(const Vector& v, const std::vector<int>& idx) {
  Vector out(static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out(static_cast<Eigen::Index>(k)) = v(idx[k]);
  return out;
}

bool monotone(const ScaTrace& tr, double slack, double* worst) {
  double prev = tr.initial_nll;
  bool ok = true;
  for (const auto& it : tr.iterations) {
    *worst = std::max(*worst, it.nll - prev);
    ok = ok && it.nll <= prev + slack;
    prev = it.nll;
  }
  return ok;
}

double test_mse(const SynthResult& s, const Weights& w, const GridSpec& grid) {
  GPModel m;
  m.grid = grid;
  m.weights = w;
  m.noise_var = s.noise_var;
  m.train = s.train;
  m.workspace = std::make_shared<const KernelWorkspace>(build_workspace(s.train, grid, s.noise_var));
  return mse(predict(m, s.test.X).mean, s.test.y);
}

// Surrogate touches and majorizes l, and shares its gradient at the anchor.
Verdict criterion1() {
  Checker c;
  std::mt19937_64 rng(101);
  std::uniform_int_distribution<int> un(2, 8), uq(1, 6), up(1, 2);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double worst_touch = 0.0, worst_major = -INFINITY, worst_grad = 0.0;
  for (int inst = 0; inst < 50; ++inst) {
    const int n = un(rng), Q = uq(rng), P = up(rng);
    const Dataset d = random_dataset(n, P, 1000 + inst);
    const double noise = 0.05 + 0.5 * std::fabs(u(rng));
    const KernelWorkspace ws = exact_workspace(d, random_grid(P, Q, 2000 + inst), noise);
    Weights t = random_weights(Q, 3000 + inst);
    t.array() += 0.05;
    const double l = nll(t, ws, d.y);
    const double touch = std::fabs(surrogate_value(t, t, ws, d.y) - l) / std::fabs(l);
    worst_touch = std::max(worst_touch, touch);
    c.require(touch <= 1e-10, "touching " + sci(touch) + " at instance " + std::to_string(inst));

    for (int k = 0; k < 100; ++k) {
      Weights w = t;
      const double scale = k < 50 ? 0.2 : 2.0;
      for (int q = 0; q < Q; ++q) w(q) = std::max(0.0, w(q) + scale * u(rng));
      const double gap = nll(w, ws, d.y) - surrogate_value(w, t, ws, d.y);
      worst_major = std::max(worst_major, gap);
      c.require(gap <= 1e-9, "majorization gap " + sci(gap) + " at instance " + std::to_string(inst));
    }

    const LikelihoodEval e = evaluate_likelihood(t, ws, d.y, true);
    const Vector grad = e.grad_g - e.grad_h;
    Vector fd_sur(Q), fd_l(Q);
    for (int q = 0; q < Q; ++q) {
      const double h = 1e-5 * std::max(1.0, t(q));
      Weights a = t, b = t;
      a(q) += h;
      b(q) -= h;
      fd_sur(q) = (surrogate_value(a, t, ws, d.y) - surrogate_value(b, t, ws, d.y)) / (2 * h);
      fd_l(q) = (nll(a, ws, d.y) - nll(b, ws, d.y)) / (2 * h);
    }
    const double scale = std::max(1.0, fd_l.cwiseAbs().maxCoeff());
    const double err = std::max((fd_sur - fd_l).cwiseAbs().maxCoeff(),
                                (grad - fd_l).cwiseAbs().maxCoeff()) / scale;
    worst_grad = std::max(worst_grad, err);
    c.require(err <= 1e-4, "gradient mismatch " + sci(err) + " at instance " + std::to_string(inst));
  }
  c.note("touch " + sci(worst_touch) + ", max l - surrogate " + sci(worst_major) +
         ", gradient rel " + sci(worst_grad));
  return c.verdict();
}

// Block program optimum against projected gradient on the dense surrogate.
Verdict criterion2() {
  Checker c;
  std::mt19937_64 rng(202);
  std::uniform_int_distribution<int> un(3, 10), ub(1, 3);
  double worst_obj = 0.0, worst_schur = 0.0;
  for (int inst = 0; inst < 20; ++inst) {
    const int n = un(rng), b = ub(rng), Q = b + 2;
    const double noise = 0.1;
    const Dataset d = random_dataset(n, 1, 4000 + inst);
    const KernelWorkspace ws = exact_workspace(d, random_grid(1, Q, 5000 + inst), noise);
    const Weights tt = random_weights(Q, 6000 + inst);
    std::vector<int> block(static_cast<std::size_t>(b));
    for (int k = 0; k < b; ++k) block[static_cast<std::size_t>(k)] = (inst + 2 * k) % Q;
    std::sort(block.begin(), block.end());
    block.erase(std::unique(block.begin(), block.end()), block.end());
    const Vector gh_full = grad_h(tt, ws);
    const Vector gh = slice(gh_full, block);
    const ConeProgram prog = build_block_socp(block, tt, ws, gh, d.y);
    const ConeSolution sol = solve(prog);
    c.require(sol.status == SolveStatus::kOptimal,
              std::string("solver status ") + to_string(sol.status) + " at instance " + std::to_string(inst));

    auto full = [&](const oracle::Vec& x) {
      Weights w = tt;
      for (std::size_t k = 0; k < block.size(); ++k) w(block[k]) = x(static_cast<Eigen::Index>(k));
      return w;
    };
    auto f = [&](const oracle::Vec& x) {
      return oracle::dense_nll(oracle::dense_cov(ws.grams, full(x), noise), d.y).g - gh.dot(x);
    };
    auto grad = [&](const oracle::Vec& x) {
      const oracle::Mat C = oracle::dense_cov(ws.grams, full(x), noise);
      const oracle::Vec a = C.fullPivLu().solve(d.y);
      oracle::Vec g(x.size());
      for (std::size_t k = 0; k < block.size(); ++k)
        g(static_cast<Eigen::Index>(k)) = -a.dot(ws.grams[static_cast<std::size_t>(block[k])] * a) -
                                          gh(static_cast<Eigen::Index>(k));
      return g;
    };
    const oracle::Vec x_pg = oracle::projected_gradient(f, grad, slice(tt, block), 100000, 1e-6);
    const double ref = f(x_pg);
    const double obj_err = std::fabs(sol.objective_value - ref) / std::max(1.0, std::fabs(ref));
    worst_obj = std::max(worst_obj, obj_err);
    c.require(obj_err <= 1e-4, "objective gap " + sci(obj_err) + " at instance " + std::to_string(inst));

    const double z = sol.x.segment(prog.layout.z.offset, prog.layout.z.length).sum();
    const double g_star = oracle::dense_nll(oracle::dense_cov(ws.grams, full(sol.theta_block), noise), d.y).g;
    const double schur = std::fabs(z - g_star) / std::fabs(g_star);
    worst_schur = std::max(worst_schur, schur);
    c.require(schur <= 1e-5, "Schur gap " + sci(schur) + " at instance " + std::to_string(inst));
  }
  c.note("objective rel " + sci(worst_obj) + ", Schur rel " + sci(worst_schur));
  return c.verdict();
}

// Monotone descent to a vanishing step on the 1-D task.
Verdict criterion3() {
  Checker c;
  const SynthResult s = sparse_1d(Sparse1dOptions{});
  const KernelWorkspace ws = build_workspace(s.train, s.truth_grid, s.noise_var);
  ScaSettings st;
  st.max_iter = 100;
  const Weights init = Weights::Ones(20);
  std::vector<std::pair<std::string, ScaResult>> runs;
  runs.emplace_back("sca", vanilla_sca(init, ws, s.train.y, st));
  for (int blocks : {1, 2, 4})
    runs.emplace_back("dsca s=" + std::to_string(blocks),
                      dsca(init, ws, s.train.y, BlockPartition::make(20, blocks), st));
  for (const auto& [name, r] : runs) {
    double worst = -INFINITY;
    c.require(monotone(r.trace, 1e-9, &worst), name + " increased l by " + sci(worst));
    const double step = r.trace.iterations.back().step_norm;
    c.require(step <= 1e-5, name + " final step " + sci(step));
    c.note(name + ": " + std::to_string(r.trace.iterations.size()) + " its, step " + sci(step));
  }
  return c.verdict();
}

// s = 1 is vanilla SCA; more blocks cut the slowest unit's time.
Verdict criterion4() {
  Checker c;
  Sparse1dOptions o;
  o.n_train = 100;
  o.Q = 40;
  o.active = {6, 16};
  const SynthResult s = sparse_1d(o);
  WorkspaceOptions wo;
  wo.factor.rank = 20;
  const KernelWorkspace ws = build_workspace(s.train, s.truth_grid, s.noise_var, wo);
  ScaSettings st;
  st.max_iter = 100;
  st.threads = 10;
  const Weights init = Weights::Ones(40);
  const ScaResult van = vanilla_sca(init, ws, s.train.y, st);
  std::vector<double> times, nlls;
  for (int blocks : {1, 4, 10}) {
    const ScaResult r = dsca(init, ws, s.train.y, BlockPartition::make(40, blocks), st);
    if (blocks == 1) {
      bool same = r.trace.iterations.size() == van.trace.iterations.size() && r.theta == van.theta;
      for (std::size_t k = 0; same && k < r.trace.iterations.size(); ++k)
        same = r.trace.iterations[k].theta == van.trace.iterations[k].theta &&
               r.trace.iterations[k].nll == van.trace.iterations[k].nll;
      c.require(same, "s=1 differs from vanilla SCA");
    }
    double t = 0.0;
    for (const auto& it : r.trace.iterations) t += it.unit_time_max;
    times.push_back(t);
    nlls.push_back(r.trace.iterations.back().nll);
    c.note("s=" + std::to_string(blocks) + ": " + std::to_string(r.trace.iterations.size()) +
           " its, unit time " + sci(t) + " s, nll " + sci(nlls.back()));
  }
  c.require(times[0] > times[1] && times[1] > times[2], "unit time not strictly decreasing");
  const auto [lo, hi] = std::minmax_element(nlls.begin(), nlls.end());
  const double spread = (*hi - *lo) / std::fabs(*lo);
  c.require(spread <= 0.01, "nll spread " + sci(spread));
  c.note("nll spread " + sci(spread));
  return c.verdict();
}

// Product kernel against the sum-family baseline on a four-mode truth.
Verdict criterion5() {
  Checker c;
  FourModeOptions fo;
  fo.side = 20;
  fo.lo = -1.0;
  fo.hi = 1.0;
  fo.m = 2.0;
  fo.mode_var = 0.01;
  fo.n_test = 50;
  fo.seed = 5;
  const SynthResult s = four_mode_2d(fo);
  GridOptions go;
  go.Q = 50;
  go.sampling = GridSampling::kRandom;
  go.v_const = 0.01;
  go.seed = 7;
  go.mu_max = std::vector<double>{3.0, 3.0};
  const GridSpec grid = build_grid(s.train, go);
  ScaSettings st;
  st.max_iter = 100;
  const BlockPartition part = BlockPartition::make(50, 10);
  double final_nll[2];
  Weights learned[2];
  for (int f = 0; f < 2; ++f) {
    WorkspaceOptions wo;
    wo.gram.family = f == 0 ? KernelFamily::kProduct : KernelFamily::kSum;
    wo.factor.rank = 40;
    const KernelWorkspace ws = build_workspace(s.train, grid, s.noise_var, wo);
    const ScaResult r = dsca(Weights::Constant(50, 0.02), ws, s.train.y, part, st);
    learned[f] = r.theta;
    final_nll[f] = r.trace.iterations.back().nll;
  }
  double near = 0.0;
  for (int q = 0; q < 50; ++q)
    if (std::hypot(grid.mu(q, 0) - 2.0, grid.mu(q, 1) - 2.0) <= 0.5) near += learned[0](q);
  const double frac = near / learned[0].sum();
  c.require(final_nll[0] <= final_nll[1], "product nll " + sci(final_nll[0]) + " above baseline " +
                                              sci(final_nll[1]));
  c.require(frac >= 0.6, "mass at true modes " + sci(frac));
  c.note("nll product " + sci(final_nll[0]) + " vs sum " + sci(final_nll[1]) + ", mass at modes " +
         sci(frac));
  return c.verdict();
}

AdmmSettings consensus_settings(const SynthResult& s) {
  AdmmSettings st;
  st.noise_var = s.noise_var;
  st.max_outer = 100;
  st.eps_abs = 1e-4;
  st.eps_rel = 2e-4;
  return st;
}

// Two agents reach consensus without losing predictive accuracy.
Verdict criterion6() {
  Checker c;
  const SynthResult s = sparse_1d(Sparse1dOptions{});
  const AdmmSettings st = consensus_settings(s);
  const AdmmResult one = d2sca(s.train, s.truth_grid, 1, 1, st);
  const AdmmResult two = d2sca(s.train, s.truth_grid, 2, 1, st);
  const AdmmIteration& last = two.trace.iterations.back();
  double spread = 0.0;
  for (const Weights& z : last.zetas) spread = std::max(spread, (z - last.theta).norm());
  const double m1 = test_mse(s, one.theta, s.truth_grid);
  const double m2 = test_mse(s, two.theta, s.truth_grid);
  c.require(spread <= 1e-3, "consensus gap " + sci(spread));
  c.require(m2 <= 1.5 * m1, "mse ratio " + sci(m2 / m1));
  c.note(std::to_string(two.trace.iterations.size()) + " rounds, gap " + sci(spread) + ", mse N=1 " +
         sci(m1) + ", N=2 " + sci(m2));
  return c.verdict();
}

// Stochastic rounding is unbiased with variance at most delta^2 / 4.
Verdict criterion7() {
  Checker c;
  constexpr int kDraws = 100000;
  double worst_bias = 0.0, worst_mse = -INFINITY;
  for (double delta : {0.1, 1.0}) {
    Quantizer qz(delta, 77);
    for (int k = -10; k <= 10; ++k) {
      const double x = 0.5 * k + 0.0137 * delta;
      double sum = 0.0, sq = 0.0, sq_err = 0.0, sq_err2 = 0.0;
      for (int i = 0; i < kDraws; ++i) {
        const double v = quantize(x, qz);
        const double e2 = (v - x) * (v - x);
        sum += v;
        sq += v * v;
        sq_err += e2;
        sq_err2 += e2 * e2;
      }
      const double mean = sum / kDraws;
      const double var = std::max(0.0, sq / kDraws - mean * mean);
      const double se = std::sqrt(var / kDraws);
      const double emse = sq_err / kDraws;
      const double se_mse = std::sqrt(std::max(0.0, sq_err2 / kDraws - emse * emse) / kDraws);
      const double bias = std::fabs(mean - x);
      worst_bias = std::max(worst_bias, se > 0 ? bias / se : 0.0);
      worst_mse = std::max(worst_mse, emse - delta * delta / 4.0);
      c.require(bias <= 3.0 * se + 1e-15, "bias " + sci(bias) + " at x=" + sci(x));
      c.require(emse <= delta * delta / 4.0 + 3.0 * se_mse, "mse " + sci(emse) + " at x=" + sci(x));
    }
  }
  c.note("worst bias " + sci(worst_bias) + " stderr, worst mse - delta^2/4 " + sci(worst_mse));
  return c.verdict();
}

// Fine lattice is D2SCA; coarse lattice stays unbiased on average.
Verdict criterion8() {
  Checker c;
  Sparse1dOptions o;
  o.n_train = 60;
  o.Q = 10;
  o.active = {2, 6};
  o.seed = 8;
  const SynthResult s = sparse_1d(o);
  {
    AdmmSettings st;
    st.noise_var = s.noise_var;
    st.max_outer = 30;
    const AdmmResult a = d2sca(s.train, s.truth_grid, 2, 1, st);
    const AdmmResult b = qd2sca(s.train, s.truth_grid, 2, 1, 1e-12, st, 3);
    double worst = 0.0;
    const std::size_t T = std::min(a.trace.iterations.size(), b.trace.iterations.size());
    c.require(a.trace.iterations.size() == b.trace.iterations.size(), "round counts differ");
    for (std::size_t t = 0; t < T; ++t) {
      const AdmmIteration& x = a.trace.iterations[t];
      const AdmmIteration& y = b.trace.iterations[t];
      worst = std::max(worst, (x.theta - y.theta).cwiseAbs().maxCoeff());
      for (int j = 0; j < 2; ++j) worst = std::max(worst, (x.zetas[j] - y.zetas[j]).cwiseAbs().maxCoeff());
    }
    c.require(worst <= 1e-6, "fine lattice deviates by " + sci(worst));
    c.note("fine lattice deviation " + sci(worst) + " over " + std::to_string(T) + " rounds");
  }
  {
    constexpr int kReplicas = 30, kRounds = 10;
    AdmmSettings st;
    st.noise_var = s.noise_var;
    st.max_outer = kRounds;
    // Negative tolerances: a lattice round can hit zero residuals exactly.
    st.eps_abs = -1.0;
    st.eps_rel = 0.0;
    st.adapt = false;
    st.rho_init = 1.0;
    const AdmmResult ref = d2sca(s.train, s.truth_grid, 2, 1, st);
    std::vector<std::vector<Vector>> sum(kRounds, std::vector<Vector>(2, Vector::Zero(10)));
    auto sq = sum;
    for (int r = 0; r < kReplicas; ++r) {
      const AdmmResult q = qd2sca(s.train, s.truth_grid, 2, 1, 0.1, st, 1000 + r);
      if (q.trace.iterations.size() != static_cast<std::size_t>(kRounds))
        return {false, "replica stopped after " + std::to_string(q.trace.iterations.size()) + " rounds"};
      for (int t = 0; t < kRounds; ++t)
        for (int j = 0; j < 2; ++j) {
          const Vector& z = q.trace.iterations[t].zetas[j];
          sum[t][j] += z;
          sq[t][j] += z.cwiseProduct(z).matrix();
        }
    }
    double worst = 0.0;
    for (int t = 0; t < kRounds; ++t)
      for (int j = 0; j < 2; ++j) {
        const Vector mean = sum[t][j] / kReplicas;
        const Vector var = ((sq[t][j] / kReplicas).array() - mean.array().square()).max(0.0).matrix() *
                           (kReplicas / (kReplicas - 1.0));
        const double se = std::sqrt(var.sum() / kReplicas);
        const double dev = (mean - ref.trace.iterations[t].zetas[j]).norm();
        const double ratio = se > 0.0 ? dev / se : (dev == 0.0 ? 0.0 : INFINITY);
        worst = std::max(worst, ratio);
        c.require(ratio <= 3.0, "round " + std::to_string(t + 1) + " agent " + std::to_string(j) +
                                    ": mean off by " + sci(ratio) + " standard errors");
      }
    c.note("replica mean within " + sci(worst) + " standard errors");
  }
  return c.verdict();
}

// Uplink bits follow the codec width and the savings formula.
Verdict criterion9() {
  Checker c;
  Sparse1dOptions o;
  o.n_train = 60;
  o.Q = 10;
  o.active = {2, 6};
  o.seed = 9;
  const SynthResult s = sparse_1d(o);
  AdmmSettings st;
  st.noise_var = s.noise_var;
  st.max_outer = 20;
  std::vector<double> totals;
  int rounds_checked = 0;
  double worst_ratio = 0.0;
  for (double delta : {0.001, 0.01, 0.1}) {
    const AdmmResult r = qd2sca(s.train, s.truth_grid, 2, 1, delta, st, 4);
    double total = 0.0;
    for (const AdmmIteration& it : r.trace.iterations)
      for (int j = 0; j < 2; ++j) {
        const Weights& z = it.zetas_sent[j];
        const double span = std::round((z.maxCoeff() - z.minCoeff()) / delta);
        const auto width = static_cast<std::uint64_t>(std::max(1.0, std::ceil(std::log2(span + 1.0))));
        const std::uint64_t expect = 10u * width;
        c.require(it.uplink_payload_bits[j] == expect,
                  "round " + std::to_string(it.iteration) + ": " + std::to_string(it.uplink_payload_bits[j]) +
                      " bits, expected " + std::to_string(expect));
        const double ratio = (64.0 * 10.0) / static_cast<double>(it.uplink_payload_bits[j]);
        const double formula = saving_ratio(z, delta);
        // Rounding the width up can only lower the realized ratio, by less than one bit.
        const bool within = span == 0.0 ? ratio == 64.0
                                        : ratio <= formula * (1 + 1e-12) &&
                                              ratio > 64.0 / (std::log2(span + 1.0) + 1.0);
        worst_ratio = std::max(worst_ratio, std::fabs(ratio - formula) / formula);
        c.require(within, "payload ratio " + sci(ratio) + " vs formula " + sci(formula));
        total += static_cast<double>(it.uplink_payload_bits[j]);
        ++rounds_checked;
      }
    totals.push_back(total / static_cast<double>(r.trace.iterations.size()));
    c.note("delta " + sci(delta) + ": " + sci(totals.back()) + " bits/round");
  }
  c.require(totals[0] > totals[1] && totals[1] > totals[2], "bits per round not decreasing in delta");
  c.require(totals[0] < 2 * 64.0 * 10.0, "quantized rounds not below full precision");
  c.note(std::to_string(rounds_checked) + " uplinks checked, ratio vs formula within " + sci(worst_ratio));
  return c.verdict();
}

// Kernels are the Fourier transforms of their spectral densities.
Verdict criterion10() {
  Checker c;
  std::mt19937_64 rng(1010);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  double worst = 0.0;
  int checked = 0;
  for (int P : {1, 2})
    for (int Q : {1, 2, 3}) {
      const GridSpec g = random_grid(P, Q, 100 * P + Q);
      const Weights w = random_weights(Q, 200 * P + Q);
      for (int k = 0; k < 20; ++k) {
        Vector tau(P);
        for (int p = 0; p < P; ++p) tau(p) = u(rng);
        const double quad = oracle::fourier_inverse(
            [&](const Vector& om) { return spectral_density(om, g, w); }, g.mu, g.var, tau);
        const double err = std::fabs(eval_gsmp(tau, g, w) - quad);
        worst = std::max(worst, err);
        ++checked;
        c.require(err <= 1e-5, "P=" + std::to_string(P) + " Q=" + std::to_string(Q) + " error " + sci(err));
      }
    }
  c.note(std::to_string(checked) + " lags, worst error " + sci(worst));
  return c.verdict();
}

}  // namespace
}  // namespace gsmp

int main(int argc, char** argv) {
  const std::vector<std::function<gsmp::Verdict()>> criteria = {
      gsmp::criterion1, gsmp::criterion2, gsmp::criterion3, gsmp::criterion4, gsmp::criterion5,
      gsmp::criterion6, gsmp::criterion7, gsmp::criterion8, gsmp::criterion9, gsmp::criterion10};
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::stoi(argv[i]));
  if (which.empty())
    for (int k = 1; k <= static_cast<int>(criteria.size()); ++k) which.push_back(k);
  int failures = 0;
  for (int k : which) {
    const auto t0 = std::chrono::steady_clock::now();
    gsmp::Verdict v;
    try {
      v = criteria.at(static_cast<std::size_t>(k - 1))();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("Criterion %d: %s (%.1f s) %s\n", k, v.pass ? "PASS" : "FAIL", secs, v.detail.c_str());
    std::fflush(stdout);
    failures += v.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
