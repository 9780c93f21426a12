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

#include "gsmp_cli/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "gsmp/io.hpp"
#include "gsmp/quant.hpp"
#include "gsmp/synth.hpp"
#include "json.hpp"

namespace gsmp::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::json;

class NotConverged : public Error {
 public:
  using Error::Error;
};

std::ofstream open_out(const fs::path& p) {
  std::ofstream os(p);
  if (!os) throw DataError("cannot write " + p.string());
  return os;
}

json vec_json(const Vector& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

json mat_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) rows.push_back(vec_json(M.row(i).transpose()));
  return rows;
}

GridSpec make_grid(const RunConfig& cfg, const Dataset& data) {
  GridOptions g;
  g.Q = cfg.resolved_Q(data.P());
  g.sampling = cfg.sampling;
  g.v_const = cfg.v_const;
  g.seed = cfg.grid_seed;
  if (cfg.mu_max) g.mu_max = std::vector<double>(static_cast<std::size_t>(data.P()), *cfg.mu_max);
  return build_grid(data, g);
}

WorkspaceOptions workspace_options(const RunConfig& cfg) {
  WorkspaceOptions w;
  w.gram.family = cfg.family;
  w.factor.rank = cfg.rank;
  return w;
}

}  // namespace

TrainOutcome train(const RunConfig& cfg, const Dataset& data, const std::string& out_dir,
                   std::ostream& log) {
  data.validate();
  const auto t0 = std::chrono::steady_clock::now();
  TrainOutcome res;
  const GridSpec grid = make_grid(cfg, data);
  const WorkspaceOptions wopts = workspace_options(cfg);
  auto ws = std::make_shared<const KernelWorkspace>(build_workspace(data, grid, cfg.sigma2, wopts));
  Weights theta;
  if (cfg.algorithm == Algorithm::kSca || cfg.algorithm == Algorithm::kDsca) {
    ScaSettings st;
    st.max_iter = cfg.max_iter;
    st.step_tol = cfg.step_tol;
    st.threads = cfg.threads;
    const int s = cfg.algorithm == Algorithm::kSca ? 1 : cfg.s;
    ScaResult r = dsca(Weights::Zero(grid.Q), *ws, data.y, BlockPartition::make(grid.Q, s), st);
    theta = r.theta;
    res.converged = r.trace.converged;
    for (const auto& it : r.trace.iterations) res.unit_time_max += it.unit_time_max;
    if (!out_dir.empty()) {
      std::ofstream os = open_out(fs::path(out_dir) / "trace.csv");
      r.trace.write_csv(os);
    }
    log << to_string(cfg.algorithm) << ": " << r.trace.iterations.size() << " iterations, nll "
        << std::setprecision(10)
        << (r.trace.iterations.empty() ? r.trace.initial_nll : r.trace.iterations.back().nll)
        << (res.converged ? "" : " (not converged)") << "\n";
  } else {
    AdmmSettings st;
    st.max_outer = cfg.max_outer;
    st.eps_abs = cfg.eps_abs;
    st.eps_rel = cfg.eps_rel;
    st.rho_init = cfg.rho_init;
    st.local.max_iter = cfg.inner_iters;
    st.local.step_tol = cfg.step_tol;
    st.scheme = cfg.partition;
    st.partition_seed = cfg.partition_seed;
    st.noise_var = cfg.sigma2;
    st.workspace = wopts;
    AdmmResult r = cfg.algorithm == Algorithm::kD2sca
                       ? d2sca(data, grid, cfg.N, cfg.s, st)
                       : qd2sca(data, grid, cfg.N, cfg.s, *cfg.delta, st, cfg.quant_seed);
    theta = r.theta;
    res.converged = r.converged;
    for (const auto& it : r.trace.iterations) {
      double m = 0.0;
      for (double u : it.unit_time_max) m = std::max(m, u);
      res.unit_time_max += m;
    }
    for (int j = 0; j < cfg.N; ++j) res.uplink_payload_bits += r.bus->sent_stats(j, kOrchestrator).payload_bits;
    if (!out_dir.empty()) {
      std::ofstream os = open_out(fs::path(out_dir) / "trace.csv");
      r.trace.write_csv(os);
      std::ofstream ls = open_out(fs::path(out_dir) / "links.csv");
      r.bus->write_csv(ls);
    }
    log << to_string(cfg.algorithm) << ": " << r.trace.iterations.size() << " outer iterations, primal residual "
        << std::setprecision(6) << r.trace.iterations.back().primal_residual
        << (res.converged ? "" : " (not converged)") << "\n";
  }
  res.model = GPModel{grid, theta, cfg.sigma2, data, ws};
  if (!out_dir.empty()) save_model(fs::path(out_dir) / "model.json", res.model);
  res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

namespace {

void write_predictions(const fs::path& path, const Dataset& test, const Posterior& post) {
  std::ofstream os = open_out(path);
  os.precision(17);
  for (int p = 0; p < test.P(); ++p) os << "x" << p + 1 << ",";
  os << "y,mean,var\n";
  for (int i = 0; i < test.n(); ++i) {
    for (int p = 0; p < test.P(); ++p) os << test.X(i, p) << ",";
    os << test.y(i) << "," << post.mean(i) << "," << post.cov(i, i) << "\n";
  }
}

int cmd_synth(const std::string& kind, int n, int n_test, double noise, std::uint64_t seed,
              const std::string& out_dir, const FourModeOptions& fm_base, const Sparse1dOptions& sp_base,
              std::ostream& out) {
  SynthResult r;
  if (kind == "four_mode_2d") {
    FourModeOptions o = fm_base;
    const int side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(n))));
    if (side * side != n) throw ConfigError("four_mode_2d needs a perfect-square n, got " + std::to_string(n));
    o.side = side;
    o.n_test = n_test;
    o.noise_var = noise;
    o.seed = seed;
    r = four_mode_2d(o);
  } else if (kind == "sparse_1d") {
    Sparse1dOptions o = sp_base;
    o.n_train = n;
    o.n_test = n_test;
    o.noise_var = noise;
    o.seed = seed;
    r = sparse_1d(o);
  } else {
    throw ConfigError("unknown synth kind '" + kind + "'");
  }
  fs::create_directories(out_dir);
  write_csv(fs::path(out_dir) / "train.csv", r.train);
  write_csv(fs::path(out_dir) / "test.csv", r.test);
  json meta = {{"kind", r.kind},
               {"seed", seed},
               {"noise_var", r.noise_var},
               {"jitter", r.jitter},
               {"modes", mat_json(r.modes)},
               {"mode_var", r.mode_var},
               {"truth", {{"family", to_string(r.truth_family)},
                          {"mu", mat_json(r.truth_grid.mu)},
                          {"var", mat_json(r.truth_grid.var)},
                          {"weights", vec_json(r.truth_weights)}}}};
  std::ofstream os = open_out(fs::path(out_dir) / "truth.json");
  os << meta.dump(1) << "\n";
  out << "wrote " << r.train.n() << " training and " << r.test.n() << " test rows to " << out_dir
      << " (jitter " << r.jitter << ")\n";
  return kExitOk;
}

// Flags override the file; origins name the file line or flag of each key.
RunConfig load_run_config(const std::string& path, const std::map<std::string, std::string>& flags) {
  std::map<std::string, std::string> kv;
  std::map<std::string, int> lines;
  if (!path.empty()) kv = read_config(fs::path(path), &lines);
  KeyOrigins origins;
  for (const auto& [k, line] : lines) origins[k] = path + ":" + std::to_string(line) + ": ";
  for (const auto& [k, v] : flags) {
    kv[k] = v;
    origins[k] = "--" + k + ": ";
  }
  return parse_run_config(kv, origins);
}

void add_key_flags(CLI::App* cmd, std::map<std::string, std::string>& flags) {
  for (const auto& key : config_keys())
    cmd->add_option_function<std::string>(
        "--" + key, [&flags, key](const std::string& v) { flags[key] = v; },
        "Overrides config key '" + key + "'");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gaussian-process regression with grid spectral mixture kernels"};
  app.require_subcommand(1);

  std::string synth_kind = "sparse_1d", synth_out = ".";
  int synth_n = 200, synth_n_test = 100;
  double synth_noise = 1e-2;
  std::uint64_t synth_seed = 0;
  FourModeOptions fm;
  Sparse1dOptions sp;
  auto* synth = app.add_subcommand("synth", "Draw a synthetic dataset");
  synth->add_option("--kind", synth_kind, "four_mode_2d or sparse_1d")->check(CLI::IsMember({"four_mode_2d", "sparse_1d"}));
  synth->add_option("--n", synth_n, "Training rows (a perfect square for four_mode_2d)")->check(CLI::PositiveNumber);
  synth->add_option("--n-test", synth_n_test, "Test rows")->check(CLI::NonNegativeNumber);
  synth->add_option("--noise", synth_noise, "Noise variance")->check(CLI::PositiveNumber);
  synth->add_option("--seed", synth_seed, "Random seed");
  synth->add_option("--out", synth_out, "Output directory");
  synth->add_option("--lo", fm.lo, "four_mode_2d: lattice lower bound");
  synth->add_option("--hi", fm.hi, "four_mode_2d: lattice upper bound");
  synth->add_option("--mode", fm.m, "four_mode_2d: mode coordinate m of (+-m, +-m)");
  synth->add_option("--mode-var", fm.mode_var, "four_mode_2d: mode variance")->check(CLI::PositiveNumber);
  synth->add_option("--x-max", sp.x_max, "sparse_1d: input range [0, x_max]")->check(CLI::PositiveNumber);
  synth->add_option("--Q", sp.Q, "sparse_1d: truth grid size")->check(CLI::PositiveNumber);

  std::string train_config;
  std::map<std::string, std::string> train_flags;
  auto* trn = app.add_subcommand("train", "Learn mixture weights");
  trn->add_option("--config", train_config, "Config file of key = value lines");
  add_key_flags(trn, train_flags);

  std::string pred_model, pred_test, pred_out = "predictions.csv";
  auto* prd = app.add_subcommand("predict", "Predict with a saved model");
  prd->add_option("--model", pred_model, "Model file")->required();
  prd->add_option("--test", pred_test, "Test CSV")->required();
  prd->add_option("--out", pred_out, "Predictions CSV");

  std::vector<std::string> bench_configs;
  std::string bench_out;
  std::map<std::string, std::string> bench_flags;
  auto* bch = app.add_subcommand("bench", "Train and score several configs");
  bch->add_option("--config", bench_configs, "Config files, one row each")->required();
  bch->add_option("--table", bench_out, "Also write the table to this CSV");
  add_key_flags(bch, bench_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (synth->parsed())
      return cmd_synth(synth_kind, synth_n, synth_n_test, synth_noise, synth_seed, synth_out, fm, sp, out);

    if (trn->parsed()) {
      const RunConfig cfg = load_run_config(train_config, train_flags);
      const Dataset data = read_csv(fs::path(cfg.train));
      fs::create_directories(cfg.out);
      const TrainOutcome r = train(cfg, data, cfg.out, out);
      if (!cfg.test.empty()) {
        const Dataset test = read_csv(fs::path(cfg.test));
        out << "test mse " << std::setprecision(10) << mse(predict(r.model, test.X).mean, test.y) << "\n";
      }
      if (!r.converged) throw NotConverged("stopping rule not met within the iteration budget");
      return kExitOk;
    }

    if (prd->parsed()) {
      const GPModel model = load_model(fs::path(pred_model));
      const Dataset test = read_csv(fs::path(pred_test));
      if (test.P() != model.grid.P) throw DataError(pred_test + ": input dimension does not match the model");
      const Posterior post = predict(model, test.X);
      write_predictions(pred_out, test, post);
      out << "mse " << std::setprecision(10) << mse(post.mean, test.y) << "\n";
      return kExitOk;
    }

    // bench
    std::ostringstream table;
    table << "name,algorithm,mse,unit_time_max,uplink_bits,converged\n";
    bool all_converged = true;
    for (const auto& path : bench_configs) {
      RunConfig cfg = load_run_config(path, bench_flags);
      if (cfg.test.empty()) throw ConfigError(path + ": bench needs key 'test'");
      if (cfg.name.empty()) cfg.name = fs::path(path).stem().string();
      const Dataset data = read_csv(fs::path(cfg.train));
      const Dataset test = read_csv(fs::path(cfg.test));
      std::ostringstream log;
      const TrainOutcome r = train(cfg, data, "", log);
      all_converged = all_converged && r.converged;
      table << cfg.name << "," << to_string(cfg.algorithm) << "," << std::setprecision(10)
            << mse(predict(r.model, test.X).mean, test.y) << "," << r.unit_time_max << ","
            << r.uplink_payload_bits << "," << (r.converged ? 1 : 0) << "\n";
    }
    out << table.str();
    if (!bench_out.empty()) {
      std::ofstream os = open_out(bench_out);
      os << table.str();
    }
    return all_converged ? kExitOk : kExitNotConverged;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const NotConverged& e) {
    err << "not converged: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
}

}  // namespace gsmp::cli
