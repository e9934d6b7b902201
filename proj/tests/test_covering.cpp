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

#include "polarkit/covering.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace polarkit;

namespace {

ConvexBody interval(double a) { return ConvexBody::box(Vec::Constant(1, a)); }

Effort quick() {
  Effort e;
  e.finest_level = 5;
  e.refine_restarts = 2;
  return e;
}

bool contains(const EntropyBracket& b, double v) { return b.lo <= v && v <= b.hi; }

}  // namespace

TEST_CASE("covering examples") {
  const auto effort = quick();
  std::mt19937_64 rng(1);
  for (const auto& K : testing::body_zoo(rng, 2)) {
    const auto b = covering_bracket(K, K, effort);
    CHECK(b.lo == 1);
    CHECK(b.hi == 1);
    const auto r = covering_restricted_bracket(K, K, effort);
    CHECK(r.hi == 1);
  }
  const auto b1 = covering_bracket(interval(3), interval(1), effort);
  CHECK(b1.lo == 3);
  CHECK(b1.hi == 3);
  CHECK(verify_count_bracket(interval(3), interval(1), b1));
  const auto r1 = covering_restricted_bracket(interval(3), interval(1), effort);
  CHECK(r1.lo == 3);
  CHECK(r1.hi == 3);
  for (const auto& c : r1.hi_certificate->centers) CHECK(std::abs(c[0]) <= 3.0 + 1e-12);

  const auto K2 = ConvexBody::cube(2, 2.0), T2 = ConvexBody::cube(2, 1.0);
  const auto b2 = covering_bracket(K2, T2, effort);
  CHECK(b2.lo == 4);
  CHECK(b2.hi == 4);
  CHECK(verify_count_bracket(K2, T2, b2));
}

TEST_CASE("interval covering numbers are ceil(a)") {
  const auto effort = quick();
  for (double a : {1.0, 1.5, 2.0, 2.5, 4.0, 5.0}) {
    const auto b = covering_bracket(interval(a), interval(1), effort);
    CHECK(b.lo == static_cast<std::size_t>(std::ceil(a)));
    CHECK(b.hi == b.lo);
  }
}

TEST_CASE("brackets are sound and verify on random pairs") {
  std::mt19937_64 rng(4);
  const auto effort = quick();
  const auto zoo = testing::body_zoo(rng, 2);
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    const auto& K = zoo[i];
    const auto& T = zoo[(i + 1) % zoo.size()].scaled(0.6);
    const auto b = covering_bracket(K, T, effort);
    CHECK(b.lo <= b.hi);
    CHECK(verify_count_bracket(K, T, b));
    const auto r = covering_restricted_bracket(K, T, effort);
    CHECK(verify_count_bracket(K, T, r));
    // N'(K, 2T) <= N(K, T) <= N'(K, T), compared through the brackets.
    const auto r2 = covering_bracket_at(K, T, 2.0 * (1.0 + effort.tol.eta), true, effort);
    CHECK(r2.lo <= b.hi);
    CHECK(b.lo <= r.hi);
  }
}

TEST_CASE("tampered brackets are refuted") {
  const auto effort = quick();
  const auto K = interval(3), T = interval(1);
  auto b = covering_bracket(K, T, effort);
  auto fewer = b;
  fewer.hi_certificate->centers.pop_back();
  fewer.hi = 2;
  CHECK_FALSE(verify_count_bracket(K, T, fewer));
  auto higher = b;
  higher.lo = 4;
  higher.hi = 4;
  CHECK_FALSE(verify_count_bracket(K, T, higher));
}

TEST_CASE("entropy examples") {
  const auto effort = quick();
  std::mt19937_64 rng(2);
  for (const auto& K : testing::body_zoo(rng, 2)) CHECK(contains(entropy_bracket(K, K, 0, effort), 1.0));
  const auto e = entropy_bracket(interval(4), interval(1), 2, effort);
  CHECK(contains(e, 1.0));
  CHECK(e.hi / e.lo <= 1.0 + effort.bisect_tol + 1e-9);
  // Fractional indices are floored.
  const auto f = entropy_bracket(interval(4), interval(1), 2.7, effort);
  CHECK(f.lo == e.lo);
  CHECK(f.hi == e.hi);
}

TEST_CASE("interval entropy sequence matches a 2^-k") {
  const auto effort = quick();
  for (double a : {1.0, 3.0}) {
    const auto seq = entropy_sequence(interval(a), interval(1), 6, effort, "interval");
    for (int k = 0; k <= 6; ++k) {
      const auto& b = seq.at(k);
      INFO("a = " << a << " k = " << k << " [" << b.lo << ", " << b.hi << "]");
      CHECK(contains(b, a * std::ldexp(1.0, -k)));
      CHECK(b.hi / b.lo <= 1.0 + effort.bisect_tol + 1e-9);
    }
  }
}

TEST_CASE("entropy sequences are monotone and K = T has e_0 = 1") {
  auto effort = quick();
  std::mt19937_64 rng(9);
  const auto zoo = testing::body_zoo(rng, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    const auto seq = entropy_sequence(zoo[i], zoo[i + 2], 4, effort);
    for (int k = 1; k <= 4; ++k) {
      CHECK(seq.at(k).hi <= seq.at(k - 1).hi);
      CHECK(seq.at(k).lo <= seq.at(k - 1).lo);
      CHECK(seq.at(k).lo <= seq.at(k).hi);
    }
    const auto self = entropy_sequence(zoo[i], zoo[i], 3, effort);
    CHECK(contains(self.at(0), 1.0));
    for (int k = 0; k <= 3; ++k) CHECK(self.at(k).lo <= 1.0);
  }
}

TEST_CASE("entropy sequence does not depend on the thread count") {
  auto effort = quick();
  const auto K = ConvexBody::ellipsoid((Mat(2, 2) << 1, 0.2, 0.2, 0.5).finished());
  const auto T = ConvexBody::unit_lp_ball(2, 1.0);
  const auto one = entropy_sequence(K, T, 4, effort);
  effort.threads = 3;
  const auto three = entropy_sequence(K, T, 4, effort);
  for (int k = 0; k <= 4; ++k) {
    CHECK(one.at(k).lo == three.at(k).lo);
    CHECK(one.at(k).hi == three.at(k).hi);
  }
}

TEST_CASE("tail check") {
  // Analytic interval sequence e_k = a 2^-k passes for k >= 3.
  EntropySequence seq;
  seq.dim = 1;
  for (int k = 0; k <= 10; ++k) {
    EntropyBracket b;
    b.k = k;
    b.lo = b.hi = 4.0 * std::ldexp(1.0, -k);
    seq.k_values.push_back(k);
    seq.brackets.push_back(b);
  }
  for (const auto& row : tail_check(seq, 1)) {
    CHECK(row.pass);
    CHECK(row.tight);
  }
  // A constant sequence eventually violates it.
  auto flat = seq;
  for (auto& b : flat.brackets) b.lo = b.hi = 1.0;
  const auto rows = tail_check(flat, 1);
  CHECK(std::any_of(rows.begin(), rows.end(), [](const TailRow& r) { return !r.pass; }));
  CHECK_FALSE(rows.back().pass);
  // Too short a range is rejected.
  auto shortseq = seq;
  shortseq.k_values.resize(3);
  shortseq.brackets.resize(3);
  CHECK_THROWS_AS(tail_check(shortseq, 1), InvalidArgument);
}

TEST_CASE("ellipsoid pair in the plane passes the tail check") {
  auto effort = quick();
  const auto K = ConvexBody::ellipsoid((Mat(2, 2) << 1.0, 0.0, 0.0, 4.0).finished());
  const auto T = ConvexBody::ellipsoid((Mat(2, 2) << 2.0, 0.5, 0.5, 1.0).finished());
  const auto seq = entropy_sequence(K, T, 8, effort, "ellipses");
  for (const auto& row : tail_check(seq, 2)) CHECK(row.pass);
  const auto csv = entropy_csv({seq});
  CHECK(csv.rfind("pair_id,k,e_lo,e_hi,cover_lo,cover_hi,flags\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 10);
}

TEST_CASE("volumetric bound for covering T by eps T") {
  auto effort = quick();
  for (int n = 1; n <= 2; ++n) {
    for (const auto& T : {ConvexBody::euclidean_ball(n), ConvexBody::unit_lp_ball(n, 1.0), ConvexBody::cube(n, 1.0)}) {
      for (double eps : {0.5, 1.0, 2.0}) {
        const auto b = covering_bracket_at(T, T, eps, false, effort);
        CHECK(static_cast<double>(b.hi) <= std::pow(1.0 + 2.0 / eps, n));
      }
    }
  }
}

TEST_CASE("sub-multiplicativity through composed certificates") {
  auto effort = quick();
  const auto K = ConvexBody::cube(2, 2.0);
  const auto T = ConvexBody::euclidean_ball(2);
  const auto Tp = ConvexBody::unit_lp_ball(2, 1.0);
  const double r1 = 1.5, r2 = 1.2;
  const auto direct = covering_bracket_at(K, T, r1 * r2, false, effort);
  const auto outer = covering_bracket_at(K, Tp.scaled(r1), 1.0, false, effort);
  const auto inner = covering_bracket_at(Tp.scaled(r1), T, r1 * r2, false, effort);
  CHECK(direct.lo <= outer.hi * inner.hi);
  // Composing the two certificates gives an explicit cover of K by r1 r2 T.
  PointList composed;
  for (const auto& a : outer.hi_certificate->centers)
    for (const auto& b : inner.hi_certificate->centers) composed.push_back(a + b);
  CHECK(certify_cover(K, T, composed, r1 * r2, 0.05, direct.hi_certificate->spacing / 4));
}
