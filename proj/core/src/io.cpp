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

#include "gsmp/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace gsmp {
namespace {

using json = nlohmann::json;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_commas(const std::string& line) {
  std::vector<std::string> out;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string where(const std::string& source, int line) {
  return source + ":" + std::to_string(line) + ": ";
}

double parse_number(const std::string& cell, const std::string& source, int line) {
  double v = 0.0;
  const char* b = cell.data();
  const char* e = b + cell.size();
  if (!cell.empty() && *b == '+') ++b;
  const auto [ptr, ec] = std::from_chars(b, e, v);
  if (cell.empty() || ec != std::errc() || ptr != e)
    throw DataError(where(source, line) + "not a number: '" + cell + "'");
  if (!std::isfinite(v)) throw DataError(where(source, line) + "non-finite value '" + cell + "'");
  return v;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open " + path.string());
  return is;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream os(path);
  if (!os) throw DataError("cannot write " + path.string());
  return os;
}

json matrix_json(const Matrix& M) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    json r = json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) r.push_back(M(i, j));
    rows.push_back(std::move(r));
  }
  return rows;
}

Matrix json_matrix(const json& j, Eigen::Index cols) {
  Matrix M(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (j[i].size() != static_cast<std::size_t>(cols)) throw DataError("model matrix row has wrong length");
    for (Eigen::Index c = 0; c < cols; ++c)
      M(static_cast<Eigen::Index>(i), c) = j[i][static_cast<std::size_t>(c)].get<double>();
  }
  return M;
}

Vector json_vector(const json& j) {
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  return v;
}

}  // namespace

Dataset read_csv(std::istream& is, const std::string& source) {
  std::string line;
  int lineno = 0;
  if (!std::getline(is, line)) throw DataError(source + ": empty file");
  ++lineno;
  const std::vector<std::string> header = split_commas(line);
  if (header.size() < 2) throw DataError(where(source, 1) + "need at least one feature and y");
  const int P = static_cast<int>(header.size()) - 1;
  for (int p = 0; p < P; ++p)
    if (header[static_cast<std::size_t>(p)] != "x" + std::to_string(p + 1))
      throw DataError(where(source, 1) + "expected column 'x" + std::to_string(p + 1) + "', got '" +
                      header[static_cast<std::size_t>(p)] + "'");
  if (header.back() != "y") throw DataError(where(source, 1) + "last column must be 'y'");

  std::vector<double> vals;
  int rows = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split_commas(line);
    if (static_cast<int>(cells.size()) != P + 1)
      throw DataError(where(source, lineno) + "expected " + std::to_string(P + 1) + " fields, got " +
                      std::to_string(cells.size()));
    for (const auto& c : cells) vals.push_back(parse_number(c, source, lineno));
    ++rows;
  }
  if (rows == 0) throw DataError(source + ": no data rows");
  Dataset d;
  d.X.resize(rows, P);
  d.y.resize(rows);
  for (int i = 0; i < rows; ++i) {
    for (int p = 0; p < P; ++p) d.X(i, p) = vals[static_cast<std::size_t>(i * (P + 1) + p)];
    d.y(i) = vals[static_cast<std::size_t>(i * (P + 1) + P)];
  }
  return d;
}

Dataset read_csv(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  return read_csv(is, path.string());
}

void write_csv(std::ostream& os, const Dataset& data) {
  const auto prec = os.precision(17);
  for (int p = 0; p < data.P(); ++p) os << "x" << p + 1 << ",";
  os << "y\n";
  for (int i = 0; i < data.n(); ++i) {
    for (int p = 0; p < data.P(); ++p) os << data.X(i, p) << ",";
    os << data.y(i) << "\n";
  }
  os.precision(prec);
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream os = open_out(path);
  write_csv(os, data);
}

std::map<std::string, std::string> read_config(std::istream& is, const std::string& source,
                                               std::map<std::string, int>* key_lines) {
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError(where(source, lineno) + "expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const std::string value = trim(t.substr(eq + 1));
    if (key.empty()) throw ConfigError(where(source, lineno) + "empty key");
    if (!out.emplace(key, value).second)
      throw ConfigError(where(source, lineno) + "duplicate key '" + key + "'");
    if (key_lines) (*key_lines)[key] = lineno;
  }
  return out;
}

std::map<std::string, std::string> read_config(const std::filesystem::path& path,
                                               std::map<std::string, int>* key_lines) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open " + path.string());
  return read_config(is, path.string(), key_lines);
}

const char* to_string(KernelFamily f) { return f == KernelFamily::kProduct ? "gsmp" : "gsm_md"; }

KernelFamily parse_family(const std::string& s) {
  if (s == "gsmp") return KernelFamily::kProduct;
  if (s == "gsm_md") return KernelFamily::kSum;
  throw ConfigError("unknown kernel family '" + s + "'");
}

void save_model(std::ostream& os, const GPModel& model) {
  json j;
  j["format"] = "gsmp-model";
  j["version"] = 1;
  j["family"] = to_string(model.workspace ? model.workspace->family : KernelFamily::kProduct);
  j["grid"] = {{"P", model.grid.P},
               {"Q", model.grid.Q},
               {"seed", model.grid.seed},
               {"mu", matrix_json(model.grid.mu)},
               {"var", matrix_json(model.grid.var)}};
  j["weights"] = std::vector<double>(model.weights.data(), model.weights.data() + model.weights.size());
  j["noise_var"] = model.noise_var;
  j["train"] = {{"X", matrix_json(model.train.X)},
                {"y", std::vector<double>(model.train.y.data(), model.train.y.data() + model.train.y.size())}};
  os << j.dump(1) << "\n";
}

void save_model(const std::filesystem::path& path, const GPModel& model) {
  std::ofstream os = open_out(path);
  save_model(os, model);
}

GPModel load_model(std::istream& is, const std::string& source) {
  json j;
  try {
    is >> j;
  } catch (const json::exception& e) {
    throw DataError(source + ": " + e.what());
  }
  try {
    if (j.at("format") != "gsmp-model") throw DataError(source + ": not a model file");
    GPModel m;
    const json& g = j.at("grid");
    m.grid.P = g.at("P").get<int>();
    m.grid.Q = g.at("Q").get<int>();
    m.grid.seed = g.at("seed").get<std::uint64_t>();
    m.grid.mu = json_matrix(g.at("mu"), m.grid.P);
    m.grid.var = json_matrix(g.at("var"), m.grid.P);
    m.grid.validate();
    m.weights = json_vector(j.at("weights"));
    m.noise_var = j.at("noise_var").get<double>();
    m.train.X = json_matrix(j.at("train").at("X"), m.grid.P);
    m.train.y = json_vector(j.at("train").at("y"));
    m.train.validate();
    WorkspaceOptions opts;
    opts.gram.family = parse_family(j.at("family").get<std::string>());
    opts.with_factors = false;
    m.workspace = std::make_shared<const KernelWorkspace>(build_workspace(m.train, m.grid, m.noise_var, opts));
    return m;
  } catch (const json::exception& e) {
    throw DataError(source + ": " + e.what());
  } catch (const InvalidArgument& e) {
    throw DataError(source + ": " + e.what());
  }
}

GPModel load_model(const std::filesystem::path& path) {
  std::ifstream is = open_in(path);
  return load_model(is, path.string());
}

}  // namespace gsmp
