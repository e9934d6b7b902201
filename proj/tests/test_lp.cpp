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

#include "polarkit/lp.hpp"

#include <doctest.h>

#include <random>

using namespace polarkit;

TEST_CASE("textbook minimisation with inequality constraints") {
  // min -x1 + x2  s.t. -4x1 - x2 <= -5, x1 - 4x2 <= -3, 2x1 - x2 <= 8
  lp::Problem p;
  p.c = Vec(2);
  p.c << -1, 1;
  p.A_ub = Mat(3, 2);
  p.A_ub << -4, -1, 1, -4, 2, -1;
  p.b_ub = Vec(3);
  p.b_ub << -5, -3, 8;
  const auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::Optimal);
  // Optimum at the intersection of 2x1 - x2 = 8 and x1 - 4x2 = -3.
  CHECK(r.x(0) == doctest::Approx(5.0));
  CHECK(r.x(1) == doctest::Approx(2.0));
  CHECK(r.value == doctest::Approx(-3.0));
}

TEST_CASE("equality constraints and infeasibility") {
  lp::Problem p;
  p.c = Vec::Ones(2);
  p.A_eq = Mat(1, 2);
  p.A_eq << 1, 1;
  p.b_eq = Vec::Constant(1, 3.0);
  auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.value == doctest::Approx(3.0));

  p.A_ub = Mat(1, 2);
  p.A_ub << 1, 1;
  p.b_ub = Vec::Constant(1, 2.0);
  r = lp::solve(p);
  CHECK(r.status == lp::Status::Infeasible);
}

TEST_CASE("unbounded objective is reported") {
  lp::Problem p;
  p.c = Vec::Constant(1, -1.0);
  p.A_ub = Mat::Constant(1, 1, -1.0);
  p.b_ub = Vec::Constant(1, 1.0);
  CHECK(lp::solve(p).status == lp::Status::Unbounded);
}

TEST_CASE("degenerate redundant equalities are handled") {
  lp::Problem p;
  p.c = Vec(3);
  p.c << 1, 2, 3;
  p.A_eq = Mat(2, 3);
  p.A_eq << 1, 1, 1, 2, 2, 2;
  p.b_eq = Vec(2);
  p.b_eq << 1, 2;
  const auto r = lp::solve(p);
  REQUIRE(r.status == lp::Status::Optimal);
  CHECK(r.value == doctest::Approx(1.0));
}

TEST_CASE("random box-constrained programs match the vertex oracle") {
  // max c.x over [0,u]^n equals sum of positive c_i u_i: solved as min -c.x.
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 1 + trial % 5;
    lp::Problem p;
    p.c = Vec(n);
    Vec u(n);
    for (int i = 0; i < n; ++i) {
      p.c(i) = U(rng);
      u(i) = 0.5 + std::abs(U(rng));
    }
    p.A_ub = Mat::Identity(n, n);
    p.b_ub = u;
    double oracle = 0.0;
    for (int i = 0; i < n; ++i) oracle += std::min(0.0, p.c(i)) * u(i);
    const auto r = lp::solve(p);
    REQUIRE(r.status == lp::Status::Optimal);
    CHECK(r.value == doctest::Approx(oracle).epsilon(1e-9));
  }
}
