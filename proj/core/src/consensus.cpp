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

#include "gsmp/consensus.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

#include "gsmp/internal/thread_pool.hpp"

namespace gsmp {

std::vector<std::vector<int>> partition_indices(int n, int N, PartitionScheme scheme,
                                                std::uint64_t seed) {
  if (N < 1) throw InvalidArgument("need at least one agent");
  if (N > n) throw InvalidArgument("more agents (" + std::to_string(N) + ") than samples (" +
                                   std::to_string(n) + ")");
  std::vector<std::vector<int>> parts(static_cast<std::size_t>(N));
  if (scheme == PartitionScheme::kStrided) {
    for (int i = 0; i < n; ++i) parts[static_cast<std::size_t>(i % N)].push_back(i);
    return parts;
  }
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  if (scheme == PartitionScheme::kRandom) {
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const int base = n / N;
  const int extra = n % N;
  std::size_t next = 0;
  for (int j = 0; j < N; ++j) {
    const int len = base + (j < extra ? 1 : 0);
    auto& p = parts[static_cast<std::size_t>(j)];
    p.assign(order.begin() + static_cast<std::ptrdiff_t>(next),
             order.begin() + static_cast<std::ptrdiff_t>(next + static_cast<std::size_t>(len)));
    std::sort(p.begin(), p.end());
    next += static_cast<std::size_t>(len);
  }
  return parts;
}

std::vector<Dataset> partition_data(const Dataset& full, int N, PartitionScheme scheme,
                                    std::uint64_t seed) {
  full.validate();
  std::vector<Dataset> out;
  for (const auto& rows : partition_indices(full.n(), N, scheme, seed)) out.push_back(full.subset(rows));
  return out;
}

Weights consensus_update(const std::vector<Weights>& zetas, const std::vector<Vector>& lambdas,
                         const std::vector<double>& rhos, bool* projected) {
  const std::size_t N = zetas.size();
  if (N == 0) throw InvalidArgument("consensus over zero agents");
  if (lambdas.size() != N || rhos.size() != N) throw InvalidArgument("agent state lengths differ");
  const Eigen::Index Q = zetas[0].size();
  Vector sum = Vector::Zero(Q);
  for (std::size_t j = 0; j < N; ++j) {
    if (zetas[j].size() != Q || lambdas[j].size() != Q) throw InvalidArgument("agent vector length != Q");
    if (!(rhos[j] > 0.0)) throw InvalidArgument("penalty must be > 0");
    sum += zetas[j] + lambdas[j] / rhos[j];
  }
  const Vector avg = sum / static_cast<double>(N);
  const Weights theta = avg.cwiseMax(0.0);
  if (projected) *projected = (avg.array() < 0.0).any();
  return theta;
}

Weights consensus_update(const std::vector<AgentState>& agents, bool* projected) {
  std::vector<Weights> z;
  std::vector<Vector> l;
  std::vector<double> r;
  for (const auto& a : agents) {
    z.push_back(a.zeta);
    l.push_back(a.lambda);
    r.push_back(a.rho);
  }
  return consensus_update(z, l, r, projected);
}

double augmented_objective(const AgentState& agent, const Weights& zeta, const Weights& theta) {
  const ProxTerm prox{theta, agent.lambda, agent.rho};
  return nll(zeta, *agent.ws, agent.data.y) + prox.value(zeta);
}

LocalResult local_update(const AgentState& agent, const Weights& theta,
                         const LocalSettings& settings, internal::ThreadPool& pool) {
  try {
    if (!agent.ws) throw InvalidArgument("agent has no workspace");
    const ProxTerm prox{theta, agent.lambda, agent.rho};
    LocalResult out;
    const double at_zeta = augmented_objective(agent, agent.zeta, theta);
    const double at_theta = augmented_objective(agent, theta, theta);
    out.started_at_theta = at_theta < at_zeta;
    ScaSettings inner;
    inner.max_iter = settings.max_iter;
    inner.step_tol = settings.step_tol;
    inner.solver = settings.solver;
    ScaResult r = block_mm(out.started_at_theta ? theta : agent.zeta, *agent.ws, agent.data.y,
                           BlockPartition::make(agent.ws->Q(), settings.s), &prox, inner, pool);
    out.zeta = std::move(r.theta);
    out.trace = std::move(r.trace);
    return out;
  } catch (const Error& e) {
    throw Error("agent " + std::to_string(agent.id) + ": " + e.what());
  }
}

LocalResult local_update(const AgentState& agent, const Weights& theta,
                         const LocalSettings& settings) {
  internal::ThreadPool pool(settings.s);
  return local_update(agent, theta, settings, pool);
}

Vector dual_update(const Vector& lambda, double rho, const Weights& zeta, const Weights& theta) {
  return lambda + rho * (zeta - theta);
}

double adapt_rho(double rho, double primal, double dual, double mu, double kappa) {
  if (primal > mu * dual) return rho * kappa;
  if (dual > mu * primal) return rho / kappa;
  return rho;
}

void AdmmTrace::write_csv(std::ostream& os) const {
  const auto prec = os.precision(17);
  os << "iteration,primal_residual,dual_residual,nll_proxy,wall_time\n";
  for (const auto& it : iterations)
    os << it.iteration << "," << it.primal_residual << "," << it.dual_residual << ","
       << it.nll_proxy << "," << it.wall_time << "\n";
  os.precision(prec);
}

AdmmResult d2sca(const Dataset& full, const GridSpec& grid, int N, int s,
                 const AdmmSettings& settings) {
  return internal::run_admm(full, grid, N, s, settings, nullptr);
}

namespace internal {
namespace {

Weights as_vector(const Payload& p) {
  if (const auto* w = std::get_if<Weights>(&p)) return *w;
  return std::get<QuantizedVector>(p).decode();
}

Payload make_payload(const Weights& v, const QuantOptions* quant, std::uint64_t stream, int round) {
  if (!quant) return v;
  return quantize_vector_keyed(v, quant->delta, quant->seed, stream, static_cast<std::uint64_t>(round));
}

// What the orchestrator knows about one agent.
struct Mirror {
  Weights zeta;
  Vector lambda;
  double rho = 0.0;
};

}  // namespace

AdmmResult run_admm(const Dataset& full, const GridSpec& grid, int N, int s,
                    const AdmmSettings& settings, const QuantOptions* quant) {
  grid.validate();
  if (full.P() != grid.P) throw InvalidArgument("data dimension != grid dimension");
  if (settings.max_outer < 1) throw InvalidArgument("max_outer must be >= 1");
  if (!(settings.rho_init > 0.0)) throw InvalidArgument("initial penalty must be > 0");
  if (s < 1 || s > grid.Q) throw InvalidArgument("block count must be in [1, Q]");
  const int Q = grid.Q;
  const std::vector<Dataset> parts =
      partition_data(full, N, settings.scheme, settings.partition_seed);

  AdmmResult res;
  res.grid = grid;
  res.bus = std::make_shared<Bus>(N);
  Bus& bus = *res.bus;
  LocalSettings local = settings.local;
  local.s = s;

  std::vector<AgentState>& agents = res.agents;
  std::vector<Weights> last_theta(static_cast<std::size_t>(N), Weights::Zero(Q));
  std::vector<std::unique_ptr<ThreadPool>> pools;
  for (int j = 0; j < N; ++j) {
    AgentState a;
    a.id = j;
    a.data = parts[static_cast<std::size_t>(j)];
    a.ws = std::make_shared<const KernelWorkspace>(
        build_workspace(a.data, grid, settings.noise_var, settings.workspace));
    a.zeta = Weights::Zero(Q);
    a.lambda = Vector::Zero(Q);
    a.rho = settings.rho_init;
    agents.push_back(std::move(a));
    pools.push_back(std::make_unique<ThreadPool>(s));
  }
  std::vector<Mirror> mirror(static_cast<std::size_t>(N),
                             Mirror{Weights::Zero(Q), Vector::Zero(Q), settings.rho_init});
  ThreadPool agent_pool(N);
  Weights theta_sent_prev = Weights::Zero(Q);
  const double sqrtQ = std::sqrt(static_cast<double>(Q));

  for (int t = 0; t < settings.max_outer; ++t) {
    const auto wall0 = std::chrono::steady_clock::now();
    AdmmIteration rec;
    rec.iteration = t + 1;
    {
      std::vector<Weights> z;
      std::vector<Vector> l;
      std::vector<double> r;
      for (const auto& m : mirror) {
        z.push_back(m.zeta);
        l.push_back(m.lambda);
        r.push_back(m.rho);
      }
      rec.theta = consensus_update(z, l, r, &rec.projection_active);
    }
    const Payload down = make_payload(rec.theta, quant, 0, t);
    rec.theta_sent = as_vector(down);
    for (int j = 0; j < N; ++j) {
      const Receipt rc = bus.send({MessageKind::kThetaDown, kOrchestrator, j, t, down, 0});
      rec.downlink_payload_bits += rc.payload_bits;
    }

    rec.zetas.resize(static_cast<std::size_t>(N));
    rec.agent_nll.resize(static_cast<std::size_t>(N));
    rec.agent_nll_at_theta.resize(static_cast<std::size_t>(N));
    rec.unit_time_max.resize(static_cast<std::size_t>(N));
    rec.uplink_payload_bits.resize(static_cast<std::size_t>(N));
    agent_pool.parallel_for(N, [&](int j) {
      AgentState& a = agents[static_cast<std::size_t>(j)];
      std::vector<Message> inbox = bus.poll(j, t);
      if (inbox.size() != 1 || inbox[0].kind != MessageKind::kThetaDown)
        throw ProtocolError("agent " + std::to_string(j) + " expected one theta_down in round " +
                            std::to_string(t));
      a.rx_bits += payload_bits(inbox[0].payload);
      const Weights theta = as_vector(inbox[0].payload);
      LocalResult lr = local_update(a, theta, local, *pools[static_cast<std::size_t>(j)]);
      a.zeta = lr.zeta;
      const Payload up = make_payload(a.zeta, quant, static_cast<std::uint64_t>(j) + 1, t);
      const Weights zeta_sent = as_vector(up);
      Weights& prev = last_theta[static_cast<std::size_t>(j)];
      const double r = (zeta_sent - theta).norm();
      const double d = a.rho * (theta - prev).norm();
      a.lambda = dual_update(a.lambda, a.rho, zeta_sent, theta);
      if (settings.adapt) a.rho = adapt_rho(a.rho, r, d, settings.mu, settings.kappa);
      prev = theta;
      const Receipt rc = bus.send({MessageKind::kZetaUp, j, kOrchestrator, t, up, 0});
      a.tx_bits += rc.payload_bits;

      const auto js = static_cast<std::size_t>(j);
      rec.zetas[js] = a.zeta;
      rec.agent_nll[js] = lr.trace.iterations.empty() ? lr.trace.initial_nll
                                                       : lr.trace.iterations.back().nll;
      rec.agent_nll_at_theta[js] = nll(theta, *a.ws, a.data.y);
      double unit = 0.0;
      for (const auto& it : lr.trace.iterations) unit += it.unit_time_max;
      rec.unit_time_max[js] = unit;
      rec.uplink_payload_bits[js] = rc.payload_bits;
    });

    std::vector<Message> inbox = bus.poll(kOrchestrator, t);
    if (static_cast<int>(inbox.size()) != N)
      throw ProtocolError("orchestrator expected " + std::to_string(N) + " zeta_up messages");
    std::vector<bool> heard(static_cast<std::size_t>(N), false);
    rec.zetas_sent.resize(static_cast<std::size_t>(N));
    double zeta_norm_max = rec.theta.norm();
    double lambda_norm_max = 0.0;
    for (Message& m : inbox) {
      if (m.kind != MessageKind::kZetaUp || heard[static_cast<std::size_t>(m.sender)])
        throw ProtocolError("unexpected uplink message from agent " + std::to_string(m.sender));
      heard[static_cast<std::size_t>(m.sender)] = true;
      Mirror& mi = mirror[static_cast<std::size_t>(m.sender)];
      mi.zeta = as_vector(m.payload);
      const double r = (mi.zeta - rec.theta_sent).norm();
      const double d = mi.rho * (rec.theta_sent - theta_sent_prev).norm();
      mi.lambda = dual_update(mi.lambda, mi.rho, mi.zeta, rec.theta_sent);
      rec.primal_residual = std::max(rec.primal_residual, r);
      rec.dual_residual = std::max(rec.dual_residual, d);
      if (settings.adapt) mi.rho = adapt_rho(mi.rho, r, d, settings.mu, settings.kappa);
      rec.zetas_sent[static_cast<std::size_t>(m.sender)] = mi.zeta;
      zeta_norm_max = std::max(zeta_norm_max, mi.zeta.norm());
      lambda_norm_max = std::max(lambda_norm_max, mi.lambda.norm());
    }
    theta_sent_prev = rec.theta_sent;

    for (int j = 0; j < N; ++j) {
      const auto js = static_cast<std::size_t>(j);
      const AgentState& a = agents[js];
      rec.lambdas.push_back(a.lambda);
      rec.lambdas_mirror.push_back(mirror[js].lambda);
      rec.rhos.push_back(a.rho);
      rec.nll_proxy += rec.agent_nll[js];
      const ProxTerm prox{rec.theta, a.lambda, a.rho};
      rec.lagrangian += rec.agent_nll[js] + prox.value(a.zeta);
    }
    rec.eps_primal = sqrtQ * settings.eps_abs + settings.eps_rel * zeta_norm_max;
    rec.eps_dual = sqrtQ * settings.eps_abs + settings.eps_rel * lambda_norm_max;
    rec.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - wall0).count();
    const bool done = rec.primal_residual <= rec.eps_primal && rec.dual_residual <= rec.eps_dual;
    res.trace.iterations.push_back(std::move(rec));
    if (done) {
      res.converged = true;
      break;
    }
  }

  const auto& its = res.trace.iterations;
  if (res.converged) {
    res.theta = its.back().theta;
  } else {
    // Best consensus iterate by the block-diagonal likelihood.
    std::size_t best = 0;
    double best_val = INFINITY;
    for (std::size_t k = 0; k < its.size(); ++k) {
      double v = 0.0;
      for (double x : its[k].agent_nll_at_theta) v += x;
      if (v < best_val) {
        best_val = v;
        best = k;
      }
    }
    res.theta = its[best].theta;
  }
  return res;
}

}  // namespace internal
}  // namespace gsmp
