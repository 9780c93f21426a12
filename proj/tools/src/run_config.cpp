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

#include "gsmp_cli/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <utility>

namespace gsmp::cli {
namespace {

// A bad value, tagged with its key so the caller can name where it was set.
struct KeyError : ConfigError {
  KeyError(std::string k, const std::string& what) : ConfigError(what), key(std::move(k)) {}
  std::string key;
};

double to_double(const std::string& key, const std::string& v) {
  double x = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size() || !std::isfinite(x))
    throw KeyError(key, "key '" + key + "': expected a number, got '" + v + "'");
  return x;
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  std::int64_t x = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (v.empty() || ec != std::errc() || p != v.data() + v.size())
    throw KeyError(key, "key '" + key + "': expected an integer, got '" + v + "'");
  return x;
}

int to_count(const std::string& key, const std::string& v) {
  const std::int64_t x = to_int(key, v);
  if (x < 1 || x > 1'000'000'000) throw KeyError(key, "key '" + key + "' must be >= 1");
  return static_cast<int>(x);
}

double to_positive(const std::string& key, const std::string& v) {
  const double x = to_double(key, v);
  if (!(x > 0.0)) throw KeyError(key, "key '" + key + "' must be > 0");
  return x;
}

std::uint64_t to_seed(const std::string& key, const std::string& v) {
  const std::int64_t x = to_int(key, v);
  if (x < 0) throw KeyError(key, "key '" + key + "' must be >= 0");
  return static_cast<std::uint64_t>(x);
}

RunConfig parse_known(const std::map<std::string, std::string>& kv) {
  RunConfig c;
  auto get = [&](const char* k) -> const std::string* {
    auto it = kv.find(k);
    return it == kv.end() ? nullptr : &it->second;
  };
  if (auto v = get("algorithm")) {
    if (*v == "sca") c.algorithm = Algorithm::kSca;
    else if (*v == "dsca") c.algorithm = Algorithm::kDsca;
    else if (*v == "d2sca") c.algorithm = Algorithm::kD2sca;
    else if (*v == "qd2sca") c.algorithm = Algorithm::kQd2sca;
    else throw KeyError("algorithm", "unknown algorithm '" + *v + "'");
  }
  if (auto v = get("name")) c.name = *v;
  if (auto v = get("train")) c.train = *v;
  if (auto v = get("test")) c.test = *v;
  if (auto v = get("out")) c.out = *v;
  if (auto v = get("Q")) c.Q = to_count("Q", *v);
  if (auto v = get("s")) c.s = to_count("s", *v);
  if (auto v = get("N")) c.N = to_count("N", *v);
  if (auto v = get("delta")) c.delta = to_positive("delta", *v);
  if (auto v = get("sigma2")) c.sigma2 = to_positive("sigma2", *v);
  if (auto v = get("sampling")) {
    if (*v == "uniform") c.sampling = GridSampling::kUniform;
    else if (*v == "random") c.sampling = GridSampling::kRandom;
    else throw KeyError("sampling", "unknown sampling '" + *v + "'");
  }
  if (auto v = get("grid_seed")) c.grid_seed = to_seed("grid_seed", *v);
  if (auto v = get("v_const")) c.v_const = to_positive("v_const", *v);
  if (auto v = get("mu_max")) c.mu_max = to_positive("mu_max", *v);
  if (auto v = get("family")) {
    if (*v == "gsmp") c.family = KernelFamily::kProduct;
    else if (*v == "gsm_md") c.family = KernelFamily::kSum;
    else throw KeyError("family", "unknown family '" + *v + "'");
  }
  if (auto v = get("rank")) c.rank = to_count("rank", *v);
  if (auto v = get("max_iter")) c.max_iter = to_count("max_iter", *v);
  if (auto v = get("step_tol")) c.step_tol = to_positive("step_tol", *v);
  if (auto v = get("max_outer")) c.max_outer = to_count("max_outer", *v);
  if (auto v = get("eps_abs")) c.eps_abs = to_positive("eps_abs", *v);
  if (auto v = get("eps_rel")) c.eps_rel = to_positive("eps_rel", *v);
  if (auto v = get("rho_init")) c.rho_init = to_positive("rho_init", *v);
  if (auto v = get("inner_iters")) c.inner_iters = to_count("inner_iters", *v);
  if (auto v = get("partition")) {
    if (*v == "contiguous") c.partition = PartitionScheme::kContiguous;
    else if (*v == "strided") c.partition = PartitionScheme::kStrided;
    else if (*v == "random") c.partition = PartitionScheme::kRandom;
    else throw KeyError("partition", "unknown partition '" + *v + "'");
  }
  if (auto v = get("partition_seed")) c.partition_seed = to_seed("partition_seed", *v);
  if (auto v = get("quant_seed")) c.quant_seed = to_seed("quant_seed", *v);
  if (auto v = get("threads")) c.threads = to_count("threads", *v);

  if (c.train.empty()) throw ConfigError("missing key 'train'");
  const bool distributed = c.algorithm == Algorithm::kD2sca || c.algorithm == Algorithm::kQd2sca;
  if (distributed && !get("N")) throw KeyError("algorithm", "algorithm " + std::string(to_string(c.algorithm)) + " requires key 'N'");
  if (c.algorithm == Algorithm::kQd2sca && !c.delta) throw KeyError("algorithm", "algorithm qd2sca requires key 'delta'");
  if (c.algorithm == Algorithm::kSca && c.s != 1) throw KeyError("s", "algorithm sca runs one block; use dsca for s > 1");
  return c;
}

}  // namespace

const char* to_string(Algorithm a) {
  switch (a) {
    case Algorithm::kSca: return "sca";
    case Algorithm::kDsca: return "dsca";
    case Algorithm::kD2sca: return "d2sca";
    case Algorithm::kQd2sca: return "qd2sca";
  }
  return "unknown";
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys = {
      "name",      "algorithm", "train",       "test",        "out",          "Q",
      "s",         "N",         "delta",       "sigma2",      "sampling",     "grid_seed",
      "v_const",   "mu_max",    "family",      "rank",        "max_iter",     "step_tol",
      "max_outer", "eps_abs",   "eps_rel",     "rho_init",    "inner_iters",  "partition",
      "partition_seed", "quant_seed", "threads"};
  return keys;
}

RunConfig parse_run_config(const std::map<std::string, std::string>& kv,
                           const KeyOrigins& origins) {
  auto origin = [&](const std::string& k) {
    auto it = origins.find(k);
    return it == origins.end() ? std::string() : it->second;
  };
  const auto& keys = config_keys();
  for (const auto& [k, v] : kv)
    if (std::find(keys.begin(), keys.end(), k) == keys.end())
      throw ConfigError(origin(k) + "unknown key '" + k + "'");
  try {
    return parse_known(kv);
  } catch (const KeyError& e) {
    throw ConfigError(origin(e.key) + e.what());
  }
}

}  // namespace gsmp::cli
