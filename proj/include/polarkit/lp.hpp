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

namespace polarkit::lp {

/// minimize c.x  subject to  A_ub x <= b_ub,  A_eq x = b_eq,  x >= 0.
///
/// Empty matrices are allowed for either constraint block; column counts must
/// agree with c.
struct Problem {
  Vec c;
  Mat A_ub;
  Vec b_ub;
  Mat A_eq;
  Vec b_eq;
};

enum class Status { Optimal, Infeasible, Unbounded, IterationLimit };

struct Result {
  Status status = Status::Infeasible;
  double value = 0.0;
  Vec x;
};

/// Dense two-phase simplex with Bland's rule (lowest-index entering column,
/// lowest-index leaving basic variable on ratio ties). Intended for the small
/// programs that show up at desk scale (tens of rows and columns).
Result solve(const Problem& problem, double tol = 1e-11);

const char* to_string(Status status);

}  // namespace polarkit::lp
