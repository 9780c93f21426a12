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

// Files: CSV datasets, flat key = value configs, and model documents.
//
// CSV: a header row x1,...,xP,y then one sample per row, decimal point,
// no missing values.

#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>

#include "gsmp/gp.hpp"

namespace gsmp {

/// Throws DataError naming the source and line on any schema violation.
Dataset read_csv(std::istream& is, const std::string& source = "<stream>");
Dataset read_csv(const std::filesystem::path& path);
void write_csv(std::ostream& os, const Dataset& data);
void write_csv(const std::filesystem::path& path, const Dataset& data);

/// Lines of `key = value`; blank lines and lines starting with # are
/// skipped. Throws ConfigError on a malformed line or a repeated key.
/// When key_lines is set it receives the line of every key.
std::map<std::string, std::string> read_config(std::istream& is,
                                               const std::string& source = "<stream>",
                                               std::map<std::string, int>* key_lines = nullptr);
std::map<std::string, std::string> read_config(const std::filesystem::path& path,
                                               std::map<std::string, int>* key_lines = nullptr);

/// Grid, weights, noise variance, kernel family and training data.
void save_model(std::ostream& os, const GPModel& model);
void save_model(const std::filesystem::path& path, const GPModel& model);
/// Rebuilds the Gram matrices of the stored training data.
GPModel load_model(std::istream& is, const std::string& source = "<stream>");
GPModel load_model(const std::filesystem::path& path);

const char* to_string(KernelFamily f);
KernelFamily parse_family(const std::string& s);

}  // namespace gsmp
