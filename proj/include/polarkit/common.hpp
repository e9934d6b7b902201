/*
 * Copyright 2026 The polarkit Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace polarkit {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;
using PointList = std::vector<Vec>;

/// Base of every error raised by the toolkit.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input: bad body data, bad parameters, failed preconditions.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

/// The requested operation is not implemented for this representation or dimension.
class Unsupported : public Error {
 public:
  using Error::Error;
};

/// A configured resource budget would be exceeded.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

/// Numeric comparison knobs shared by all modules.
struct Tolerances {
  double abs = 1e-9;  // absolute tolerance for geometric predicates
  double eta = 1e-6;  // slack when testing inequalities from the theory
};

}  // namespace polarkit
