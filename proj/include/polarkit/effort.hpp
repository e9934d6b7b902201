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

#include "polarkit/common.hpp"

#include <cstddef>
#include <cstdint>
#include <string>

namespace polarkit {

/// Work budgets and tolerances shared by the counting operations.
struct Effort {
  Tolerances tol;
  /// Maximum number of grid cells (or nodes) a single grid may hold.
  std::size_t grid_budget = 2'000'000;
  /// Packing: exact maximum independent set when the candidate count is at most this.
  std::size_t packing_exact_cutoff = 400;
  /// Covering: exact set cover after dominance reduction within these sizes.
  std::size_t cover_exact_elements = 60;
  std::size_t cover_exact_candidates = 400;
  /// Search-node cap for the branch-and-bound solvers.
  std::size_t exact_node_budget = 200'000;
  /// Cap on candidate x template work in one cover search level.
  std::size_t pair_budget = 20'000'000;
  /// Finest grid level tried by the cover search: cell radius >= rho / 2^finest_level.
  int finest_level = 6;
  /// Local minimax refinement of covers: random restarts and iterations per restart.
  int refine_restarts = 8;
  int refine_iterations = 40;
  /// Relative stopping width of the entropy-number bisection.
  double bisect_tol = 0.05;
  int max_bisect_steps = 40;
  /// Randomised restarts of the separation greedy.
  int restarts = 16;
  std::uint64_t seed = 0;
  int threads = 1;
};

enum class LogLevel { Quiet = 0, Warning = 1, Info = 2 };

void set_log_level(LogLevel level);
LogLevel log_level();
/// Each distinct warning text is printed once per process.
void log_warning(const std::string& message);
void log_info(const std::string& message);

}  // namespace polarkit
