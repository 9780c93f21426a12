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

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace gsmp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs have zero spacing in some dimension, so no Nyquist bound exists.
class ZeroSpacingError : public Error {
 public:
  explicit ZeroSpacingError(int dim)
      : Error("all inputs coincide in dimension " + std::to_string(dim)),
        dim_(dim) {}
  int dim() const { return dim_; }

 private:
  int dim_;
};

/// The covariance is not positive definite even after jitter.
class FactorizationFailure : public Error {
 public:
  FactorizationFailure(const std::string& what, double min_diag)
      : Error(what), min_diag_(min_diag) {}
  double min_diag() const { return min_diag_; }

 private:
  double min_diag_;
};

/// Gram storage would exceed the configured memory budget.
class MemoryBudgetExceeded : public Error {
 public:
  MemoryBudgetExceeded(std::size_t requested, std::size_t budget)
      : Error("gram storage of " + std::to_string(requested) +
              " bytes exceeds budget of " + std::to_string(budget)),
        requested_(requested),
        budget_(budget) {}
  std::size_t requested() const { return requested_; }
  std::size_t budget() const { return budget_; }

 private:
  std::size_t requested_;
  std::size_t budget_;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// Message-bus misuse: duplicate, out-of-order, or misrouted message.
class ProtocolError : public Error {
 public:
  using Error::Error;
};

/// Malformed or truncated wire payload.
class DecodeError : public Error {
 public:
  using Error::Error;
};

/// Malformed config, unknown key, or reserved key misuse.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Malformed or inconsistent data files.
class DataError : public Error {
 public:
  using Error::Error;
};

}  // namespace gsmp
