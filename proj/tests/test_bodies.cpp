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

#include "polarkit/body.hpp"
#include "polarkit/body_io.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace polarkit;
using polarkit::testing::body_zoo;
using polarkit::testing::random_vec;

namespace {
Vec v2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}
Mat diag2(double a, double b) { return v2(a, b).asDiagonal(); }
}  // namespace

TEST_CASE("gauge examples") {
  CHECK(ConvexBody::cube(2, 1.0).gauge(v2(2, 1)) == doctest::Approx(2.0));
  CHECK(ConvexBody::ellipsoid(diag2(1, 4)).gauge(v2(1, 0)) == doctest::Approx(1.0));
  CHECK(ConvexBody::unit_lp_ball(2, 1.0).gauge(v2(0.3, 0.4)) == doctest::Approx(0.7));
}

TEST_CASE("support examples") {
  CHECK(ConvexBody::cube(2, 1.0).support(v2(1, 1)) == doctest::Approx(2.0));
  CHECK(ConvexBody::ellipsoid(diag2(4, 1)).support(v2(1, 0)) == doctest::Approx(0.5));
}

TEST_CASE("polar examples") {
  const auto l1 = ConvexBody::unit_lp_ball(3, 1.0);
  const auto p = l1.polar();
  REQUIRE(p.as_lp_ball() != nullptr);
  CHECK(std::isinf(p.as_lp_ball()->p));
  CHECK(p.as_lp_ball()->r.isApprox(Vec::Ones(3)));

  const auto e = ConvexBody::ellipsoid(diag2(4, 1)).polar();
  REQUIRE(e.as_ellipsoid() != nullptr);
  CHECK(e.as_ellipsoid()->Q.isApprox(diag2(0.25, 1.0)));

  std::mt19937_64 rng(3);
  const auto h = polarkit::testing::random_hpolytope(rng, 2, 4);
  const auto hh = h.polar().polar();
  for (int i = 0; i < 50; ++i) {
    const Vec x = random_vec(rng, 2);
    CHECK(hh.gauge(x) == doctest::Approx(h.gauge(x)).epsilon(1e-9));
  }
}

TEST_CASE("linear image examples") {
  std::mt19937_64 rng(5);
  const auto sq = ConvexBody::cube(2, 1.0);
  const auto id = ConvexBody::linear_image(Mat::Identity(2, 2), sq);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_vec(rng, 2);
    CHECK(id.gauge(x) == doctest::Approx(sq.gauge(x)));
  }
  CHECK(ConvexBody::linear_image(2.0 * Mat::Identity(2, 2), sq).gauge(v2(2, 0)) == doctest::Approx(1.0));
  const double c = std::cos(std::numbers::pi / 4), s = std::sin(std::numbers::pi / 4);
  Mat R(2, 2);
  R << c, -s, s, c;
  const auto disk = ConvexBody::euclidean_ball(2);
  const auto rot = ConvexBody::linear_image(R, disk);
  for (int i = 0; i < 20; ++i) {
    const Vec x = random_vec(rng, 2);
    CHECK(rot.gauge(x) == doctest::Approx(disk.gauge(x)));
  }
  CHECK_THROWS_AS(ConvexBody::linear_image(Mat::Zero(2, 2), sq), InvalidArgument);
  Mat sing(2, 2);
  sing << 1, 2, 2, 4;
  CHECK_THROWS_AS(ConvexBody::linear_image(sing, sq), InvalidArgument);
}

TEST_CASE("volume examples") {
  CHECK(ConvexBody::unit_lp_ball(2, 1.0).volume() == doctest::Approx(2.0));
  CHECK(ConvexBody::euclidean_ball(2).volume() == doctest::Approx(std::numbers::pi));
  CHECK(ConvexBody::cube(2, 2.0).volume() == doctest::Approx(16.0));
  Mat A(6, 3);
  A << Mat::Identity(3, 3), -Mat::Identity(3, 3);
  CHECK(ConvexBody::hpolytope(A, Vec::Constant(6, 2.0)).volume() == doctest::Approx(64.0));
  CHECK(ConvexBody::vpolytope(A).volume() == doctest::Approx(8.0 / 6.0));
  CHECK(ConvexBody::unit_lp_ball(3, 2.0).volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
  Mat A4(8, 4);
  A4 << Mat::Identity(4, 4), -Mat::Identity(4, 4);
  CHECK_THROWS_AS(ConvexBody::hpolytope(A4, Vec::Ones(8)).volume(), Unsupported);
}

TEST_CASE("vpolytope gauge: facet route matches the linear program") {
  std::mt19937_64 rng(17);
  for (int n = 2; n <= 3; ++n) {
    const auto P = polarkit::testing::random_vpolytope(rng, n, 6);
    for (int i = 0; i < 30; ++i) {
      const Vec x = random_vec(rng, n);
      CHECK(vpolytope_gauge_lp(P.as_vpolytope()->V, x) == doctest::Approx(P.gauge(x)).epsilon(1e-9));
    }
    const auto H = P.polar();
    for (int i = 0; i < 30; ++i) {
      const Vec y = random_vec(rng, n);
      CHECK(hpolytope_support_lp(H.as_hpolytope()->A, H.as_hpolytope()->b, y) ==
            doctest::Approx(H.support(y)).epsilon(1e-9));
    }
  }
}

TEST_CASE("norm axioms, support/polar duality and Mahler bound hold on random bodies") {
  std::mt19937_64 rng(2024);
  for (int n = 1; n <= 3; ++n) {
    for (const auto& B : body_zoo(rng, n)) {
      const auto P = B.polar();
      for (int i = 0; i < 40; ++i) {
        const Vec x = random_vec(rng, n);
        const Vec y = random_vec(rng, n);
        const double gx = B.gauge(x);
        CHECK(gx == doctest::Approx(B.gauge(-x)).epsilon(1e-12));
        CHECK(B.gauge(2.5 * x) == doctest::Approx(2.5 * gx).epsilon(1e-12));
        CHECK(B.gauge(x + y) <= gx + B.gauge(y) + 1e-12);
        CHECK(gx > 0.0);
        CHECK(B.support(y) == doctest::Approx(P.gauge(y)).epsilon(1e-9));
      }
      CHECK(B.gauge(Vec::Zero(n)) == 0.0);
      const double mahler = std::pow(4.0, n) / std::tgamma(n + 1.0);
      CHECK(B.volume() * P.volume() >= mahler * (1.0 - 1e-6));
    }
  }
  // equality for the cube / cross-polytope pair
  const auto cube = ConvexBody::cube(3, 1.0);
  CHECK(cube.volume() * cube.polar().volume() == doctest::Approx(64.0 / 6.0));
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(ConvexBody::ellipsoid(diag2(1, -1)), InvalidArgument);
  CHECK_THROWS_AS(ConvexBody::lp_ball(0.5, Vec::Ones(2)), InvalidArgument);
  Mat V(2, 2);
  V << 1, 0, 0, 1;
  CHECK_THROWS_AS(ConvexBody::vpolytope(V), InvalidArgument);  // not symmetric
  Mat Vd(2, 2);
  Vd << 1, 1, -1, -1;
  CHECK_THROWS_AS(ConvexBody::vpolytope(Vd), InvalidArgument);  // degenerate
  Mat A(2, 2);
  A << 1, 0, -1, 0;
  CHECK_THROWS_AS(ConvexBody::hpolytope(A, Vec::Ones(2)), InvalidArgument);  // unbounded
  CHECK_THROWS_AS(ConvexBody::hpolytope(A, -Vec::Ones(2)), InvalidArgument);
}

TEST_CASE("mvee examples") {
  const auto sq = mvee(ConvexBody::cube(2, 1.0), 1e-9);
  CHECK(sq.Q.isApprox(0.5 * Mat::Identity(2, 2), 1e-6));
  CHECK(sq.john_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  const auto cross = mvee(ConvexBody::unit_lp_ball(2, 1.0), 1e-9);
  CHECK(cross.Q.isApprox(Mat::Identity(2, 2), 1e-6));
  CHECK(cross.john_ratio == doctest::Approx(std::sqrt(2.0)).epsilon(1e-6));

  Mat pts(64, 2);
  for (int i = 0; i < 64; ++i) {
    const double t = 2.0 * std::numbers::pi * i / 64.0;
    pts.row(i) << std::cos(t), std::sin(t);
  }
  const auto gon = ConvexBody::vpolytope(pts);
  const auto disk = mvee(gon, 1e-6);
  CHECK((disk.Q - Mat::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-5);
  CHECK(disk.john_ratio <= 1.01);
  for (int i = 0; i < 64; ++i) CHECK(disk.ellipsoid.gauge(pts.row(i).transpose()) <= 1.0 + 1e-9);

  std::mt19937_64 rng(9);
  const auto rnd = polarkit::testing::random_vpolytope(rng, 3, 7);
  const auto e = mvee(rnd, 1e-7);
  for (Eigen::Index i = 0; i < rnd.vertices()->rows(); ++i) {
    CHECK(e.ellipsoid.gauge(rnd.vertices()->row(i).transpose()) <= 1.0 + 1e-7);
  }
  CHECK(e.john_ratio <= std::sqrt(3.0) * (1.0 + 1e-6));
  CHECK(e.john_ratio >= 1.0);
}

TEST_CASE("exact inclusion radius") {
  const auto sq = ConvexBody::cube(2, 1.0);
  CHECK(*exact_inclusion_radius(sq, sq) == doctest::Approx(1.0));
  CHECK(*exact_inclusion_radius(ConvexBody::cube(2, 3.0), sq) == doctest::Approx(3.0));
  CHECK(*exact_inclusion_radius(ConvexBody::euclidean_ball(2, 2.0), ConvexBody::euclidean_ball(2)) ==
        doctest::Approx(2.0));
  CHECK(*exact_inclusion_radius(ConvexBody::euclidean_ball(2), sq) == doctest::Approx(1.0));
  CHECK(*exact_inclusion_radius(sq, ConvexBody::euclidean_ball(2)) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("json round trip is bit faithful") {
  std::mt19937_64 rng(77);
  for (int n = 1; n <= 3; ++n) {
    for (const auto& B : body_zoo(rng, n)) {
      const auto text = body_to_json(B).dump();
      const auto back = body_from_json(json::parse(text));
      CHECK(back.same_as(B));
      CHECK(body_to_json(back).dump() == text);
    }
  }
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"kind":"blob"})")), InvalidArgument);
  CHECK_THROWS_AS(body_from_json(json::parse(R"({"kind":"ellipsoid"})")), InvalidArgument);
}

TEST_CASE("built-in body names") {
  CHECK(builtin_body("l1:2").as_lp_ball()->p == 1.0);
  CHECK(std::isinf(builtin_body("linf:3").as_lp_ball()->p));
  CHECK(builtin_body("ball:3").volume() == doctest::Approx(4.0 / 3.0 * std::numbers::pi));
  CHECK(builtin_body("box:2:1.5").volume() == doctest::Approx(9.0));
  CHECK_THROWS_AS(builtin_body("blob:2"), InvalidArgument);
}
