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

#include "polarkit/nets.hpp"

#include "test_support.hpp"

#include <doctest.h>

using namespace polarkit;

namespace {

ConvexBody interval(double a) { return ConvexBody::box(Vec::Constant(1, a)); }

PointList pts1(std::initializer_list<double> xs) {
  PointList out;
  for (double x : xs) out.push_back(Vec::Constant(1, x));
  return out;
}

}  // namespace

TEST_CASE("grid spacing examples") {
  const auto sq = ConvexBody::cube(2, 1.0);
  const auto g = grid_candidates(sq, sq, 0.5);
  CHECK(g.max_spacing() <= 1.0);
  CHECK(g.cell_radius_T <= 0.5);
  const bool has_origin = std::any_of(g.points.begin(), g.points.end(), [](const Vec& p) { return p.norm() == 0; });
  CHECK(has_origin);

  const auto g1 = grid_candidates(interval(3), interval(1), 0.1);
  CHECK(g1.max_spacing() <= 0.2);
  CHECK(g1.points.size() >= 31);
  CHECK(g1.cell_radius_T <= 0.1);
}

TEST_CASE("halving the target at least halves the cell radius") {
  std::mt19937_64 rng(3);
  for (const auto& K : testing::body_zoo(rng, 2)) {
    const auto T = ConvexBody::euclidean_ball(2);
    double target = 0.4;
    double prev = grid_candidates(K, T, target).cell_radius_T;
    for (int i = 0; i < 3; ++i) {
      target /= 2;
      const double r = grid_candidates(K, T, target).cell_radius_T;
      CHECK(r <= prev / 2 + 1e-12);
      CHECK(r <= target);
      prev = r;
    }
  }
}

TEST_CASE("grid budget is enforced") {
  const auto K = ConvexBody::cube(3, 1.0);
  CHECK_THROWS_AS(grid_candidates(K, K, 1e-3, 1000), BudgetExceeded);
}

TEST_CASE("every point of K is near a retained grid point") {
  std::mt19937_64 rng(11);
  const auto T = ConvexBody::unit_lp_ball(2, 1.0);
  for (const auto& K : testing::body_zoo(rng, 2)) {
    const auto g = grid_candidates(K, T, 0.1);
    std::uniform_real_distribution<double> U(-1, 1);
    const Vec w = K.bounding_half_widths();
    for (int s = 0; s < 50; ++s) {
      Vec x(2);
      x << U(rng) * w[0], U(rng) * w[1];
      if (K.gauge(x) > 1) continue;
      double best = 1e9;
      for (const auto& p : g.points) best = std::min(best, T.gauge(x - p));
      CHECK(best <= g.cell_radius_T + 1e-12);
    }
  }
}

TEST_CASE("build_net examples") {
  const auto I = interval(1);
  const auto g = grid_candidates(I, I, 0.01);
  const auto big = build_net(I, I, 2.5, g);
  REQUIRE(big.size() == 1);
  CHECK(big[0].norm() == 0.0);

  const auto net = build_net(I, I, 0.5, g);
  CHECK(net.size() >= 2);
  CHECK(net.size() <= 3);
  for (const auto& c : net) CHECK(I.gauge(c) <= 1.0);
  // It is a true 0.5-net of [-1, 1].
  for (double x = -1.0; x <= 1.0; x += 0.001) {
    double best = 1e9;
    for (const auto& c : net) best = std::min(best, std::abs(x - c[0]));
    CHECK(best <= 0.5 + 1e-9);
  }
  CHECK_THROWS_AS(build_net(I, I, 0.01, g), InvalidArgument);
}

TEST_CASE("net size is monotone in delta and dominates the 2 delta packing") {
  std::mt19937_64 rng(5);
  const auto disk = ConvexBody::euclidean_ball(2);
  std::vector<std::pair<ConvexBody, ConvexBody>> pairs = {
      {interval(1), interval(1)}, {ConvexBody::cube(2, 1.0), ConvexBody::cube(2, 1.0)}, {disk, disk},
      {ConvexBody::unit_lp_ball(2, 1.0), disk}};
  for (const auto& [K, T] : pairs) {
    const auto g = grid_candidates(K, T, 0.03);
    std::size_t prev = std::numeric_limits<std::size_t>::max();
    for (double delta : {0.25, 0.5, 1.0, 2.0}) {
      const auto net = build_net(K, T, delta, g);
      CHECK(net.size() <= prev);
      prev = net.size();
      const auto pack = max_packing(K, T, 2 * delta, g, 400);
      CHECK(pack.size() <= net.size());
    }
  }
}

TEST_CASE("packing examples") {
  const auto I = interval(1);
  const auto g = grid_candidates(I, I, 0.01);
  CHECK(max_packing(I, I, 2.5, g, 400).size() == 1);
  const auto p = max_packing(I, I, 1.0, g, 400);
  CHECK(p.size() == 2);
  for (std::size_t i = 0; i < p.size(); ++i)
    for (std::size_t j = i + 1; j < p.size(); ++j) CHECK(std::abs(p[i][0] - p[j][0]) > 1.0);
  // Exhaustive over the three-point grid {-1, 0, 1}: gaps of exactly 1 are not separated.
  CHECK(pack_points(I, pts1({-1, 0, 1}), 1.0, 400).points.size() == 2);
  CHECK(pack_points(I, pts1({-1, 0, 1}), 1.0, 400).optimal);
}

TEST_CASE("packing is monotone in eps") {
  std::mt19937_64 rng(8);
  for (const auto& K : testing::body_zoo(rng, 2)) {
    const auto T = ConvexBody::euclidean_ball(2);
    const auto g = grid_candidates(K, T, 0.2);
    const auto a = max_packing(K, T, 0.5, g, 400).size();
    const auto b = max_packing(K, T, 1.0, g, 400).size();
    CHECK(a >= b);
  }
}

TEST_CASE("certify_cover examples") {
  const auto K = interval(3), T = interval(1);
  const auto g = grid_candidates(K, T, 0.05);
  CHECK(certify_cover(K, T, pts1({-2, 0, 2}), 1.0, 0.05, g));
  CHECK_FALSE(certify_cover(K, T, pts1({-2, 2}), 1.0, 0.05, g));
  CHECK_FALSE(certify_cover(K, T, {}, 1.0, 0.05, g));
  CHECK(certify_cover(K, T, pts1({0}), 3.0, 0.05, g));
  CHECK_FALSE(certify_cover(K, T, pts1({0}), 2.9, 0.05, g));
  CHECK_THROWS_AS(certify_cover(K, T, pts1({0}), 3.0, 1.0, g), InvalidArgument);
  // Monotone in the centre set and in rho.
  CHECK(certify_cover(K, T, pts1({-2, 0, 2, 0.3}), 1.0, 0.05, g));
  CHECK(certify_cover(K, T, pts1({-2, 0, 2}), 1.2, 0.05, g));
  // Misaligned centres need subdivision of the lattice cells.
  CHECK(certify_cover(K, T, pts1({-2.01, 0.013, 2.011}), 1.02, 0.01, g));
}

TEST_CASE("certify_cover in the plane") {
  const auto disk = ConvexBody::euclidean_ball(2);
  const auto sq = ConvexBody::cube(2, 1.0);
  const auto g = grid_candidates(disk, sq, 0.05);
  PointList origin{Vec::Zero(2)};
  CHECK(certify_cover(disk, sq, origin, 1.0, 0.05, g));
  CHECK_FALSE(certify_cover(sq, disk, origin, 1.0, 0.05, g));
  CHECK(certify_cover(sq, disk, origin, std::sqrt(2.0), 0.05, g));
  // Four quarter squares cover [-1, 1]^2.
  PointList four;
  for (double x : {-0.5, 0.5})
    for (double y : {-0.5, 0.5}) four.push_back((Vec(2) << x, y).finished());
  CHECK(certify_cover(sq, sq, four, 0.5, 0.05, g));
  four.pop_back();
  CHECK_FALSE(certify_cover(sq, sq, four, 0.5, 0.05, g));
}

TEST_CASE("search_cover finds tight interval and square covers") {
  Effort effort;
  const auto r1 = search_cover(interval(3), interval(1), 1.0, false, effort, 3);
  REQUIRE(r1.centers);
  CHECK(r1.centers->size() == 3);
  CHECK(certify_cover(interval(3), interval(1), *r1.centers, 1.0, 0.05, r1.spacing));
  const auto r2 = search_cover(interval(3), interval(1), 1.0, true, effort, 1);
  REQUIRE(r2.centers);
  CHECK(r2.centers->size() == 3);
  for (const auto& c : *r2.centers) CHECK(std::abs(c[0]) <= 3.0);

  const auto K = ConvexBody::cube(2, 2.0), T = ConvexBody::cube(2, 1.0);
  const auto r3 = search_cover(K, T, 1.0, false, effort, 1);
  REQUIRE(r3.centers);
  CHECK(r3.centers->size() == 4);
  CHECK(r3.lattice_optimal);
  CHECK(certify_cover(K, T, *r3.centers, 1.0, 0.05, r3.spacing));

  const auto self = search_cover(ConvexBody::euclidean_ball(3), ConvexBody::euclidean_ball(3), 1.0, true, effort, 1);
  REQUIRE(self.centers);
  CHECK(self.centers->size() == 1);
}

TEST_CASE("search_cover results always certify") {
  std::mt19937_64 rng(21);
  Effort effort;
  effort.finest_level = 4;
  const auto zoo = testing::body_zoo(rng, 2);
  for (std::size_t i = 0; i < zoo.size(); ++i) {
    const auto& K = zoo[i];
    const auto& T = zoo[(i + 3) % zoo.size()];
    for (double rho : {0.4, 1.0}) {
      const auto r = search_cover(K, T, rho, i % 2 == 0, effort, 1);
      REQUIRE(r.centers);
      CHECK(certify_cover(K, T, *r.centers, rho, 0.05, r.spacing));
      if (i % 2 == 0)
        for (const auto& c : *r.centers) CHECK(K.gauge(c) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("packing at 2 eps never exceeds the cover count at eps") {
  const auto disk = ConvexBody::euclidean_ball(2);
  const auto sq = ConvexBody::cube(2, 1.0);
  Effort effort;
  effort.finest_level = 4;
  for (double eps : {0.3, 0.5, 1.0}) {
    for (const auto& [K, T] : std::vector<std::pair<ConvexBody, ConvexBody>>{{disk, disk}, {sq, disk}, {disk, sq}}) {
      const auto cover = search_cover(K, T, eps, false, effort, 1);
      REQUIRE(cover.centers);
      const auto g = grid_candidates(K, T, eps / 8);
      const auto pack = max_packing(K, T, 2 * eps, g, 400);
      CHECK(pack.size() <= cover.centers->size());
    }
  }
}
