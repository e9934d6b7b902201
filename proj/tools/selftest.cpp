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

#include "commands.hpp"

#include "polarkit/certificates.hpp"
#include "polarkit/covering.hpp"
#include "polarkit/duality_lab.hpp"
#include "polarkit/gamma.hpp"
#include "polarkit/separation.hpp"

#include <cmath>
#include <functional>
#include <ostream>
#include <random>

namespace polarkit::cli {

namespace {

bool near(double a, double b, double tol = 1e-9) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); }

ConvexBody interval(double a) { return ConvexBody::box(Vec::Constant(1, a)); }

Vec v2(double x, double y) {
  Vec v(2);
  v << x, y;
  return v;
}

Mat diag2(double a, double b) { return v2(a, b).asDiagonal(); }

Effort quick() {
  Effort e;
  e.finest_level = 5;
  e.refine_restarts = 0;
  e.restarts = 4;
  return e;
}

bool exact(const CountBracket& b, std::size_t v) { return b.lo == v && b.hi == v; }

using Check = std::pair<const char*, std::function<bool()>>;

std::vector<Check> checks() {
  const auto square = ConvexBody::cube(2, 1.0);
  const auto cross = ConvexBody::unit_lp_ball(2, 1.0);
  return {
      {"gauge of (2,1) in the square is 2", [=] { return near(square.gauge(v2(2, 1)), 2.0); }},
      {"gauge of (1,0) in the ellipsoid diag(1,4) is 1",
       [] { return near(ConvexBody::ellipsoid(diag2(1, 4)).gauge(v2(1, 0)), 1.0); }},
      {"gauge of (0.3,0.4) in the l1 ball is 0.7", [=] { return near(cross.gauge(v2(0.3, 0.4)), 0.7); }},
      {"support of the square at (1,1) is 2", [=] { return near(square.support(v2(1, 1)), 2.0); }},
      {"support of the ellipsoid diag(4,1) at (1,0) is 0.5",
       [] { return near(ConvexBody::ellipsoid(diag2(4, 1)).support(v2(1, 0)), 0.5); }},
      {"polar of the l1 ball is the linf ball",
       [=] {
         std::mt19937_64 rng(1);
         std::normal_distribution<double> g;
         const auto P = cross.polar();
         for (int i = 0; i < 50; ++i) {
           const Vec x = v2(g(rng), g(rng));
           if (!near(P.gauge(x), square.gauge(x), 1e-8)) return false;
         }
         return true;
       }},
      {"support equals the gauge of the polar",
       [] {
         std::mt19937_64 rng(2);
         std::normal_distribution<double> g;
         const auto E = ConvexBody::ellipsoid(diag2(4, 1));
         for (int i = 0; i < 50; ++i) {
           const Vec y = v2(g(rng), g(rng));
           if (!near(E.support(y), E.polar().gauge(y), 1e-8)) return false;
         }
         return true;
       }},
      {"volumes: l1 ball 2, disk pi, [-2,2]^2 16",
       [=] {
         return near(cross.volume(), 2.0, 1e-9) && near(ConvexBody::euclidean_ball(2).volume(), M_PI, 1e-9) &&
                near(ConvexBody::cube(2, 2.0).volume(), 16.0, 1e-9);
       }},
      {"N(K, K) = [1,1]", [=] { return exact(covering_bracket(square, square, quick()), 1); }},
      {"N([-3,3], [-1,1]) = [3,3]", [] { return exact(covering_bracket(interval(3), interval(1), quick()), 3); }},
      {"N([-2,2]^2, [-1,1]^2) = [4,4]",
       [=] { return exact(covering_bracket(ConvexBody::cube(2, 2.0), square, quick()), 4); }},
      {"N'([-3,3], [-1,1]) = [3,3]",
       [] { return exact(covering_restricted_bracket(interval(3), interval(1), quick()), 3); }},
      {"e_0(K, K) contains 1",
       [=] {
         const auto e = entropy_bracket(cross, cross, 0, quick());
         return e.lo <= 1.0 && 1.0 <= e.hi;
       }},
      {"e_2([-4,4], [-1,1]) contains 1",
       [] {
         const auto e = entropy_bracket(interval(4), interval(1), 2, quick());
         return e.lo <= 1.0 && 1.0 <= e.hi;
       }},
      {"M^(K, 3K) = 1", [=] { return separation_greedy_lower(square, square.scaled(3.0), quick()).points.size() == 1; }},
      {"M^([-1,1], [-1,1]) = 3 with a verified certificate",
       [] {
         const auto c = separation_greedy_lower(interval(1), interval(1), quick());
         return c.points.size() == 3 && verify_separation(interval(1), interval(1), c);
       }},
      {"C_2 = 1.7071", [] { return near(dudley_constant(2.0), 1.0 / (2.0 * (1.0 - std::sqrt(0.5))), 1e-12); }},
      {"Dudley dyadic step holds for p in {1, 1.5, 2, 3}, j <= 12",
       [] {
         for (double p : {1.0, 1.5, 2.0, 3.0})
           for (int j = 1; j <= 12; ++j)
             if (!dyadic_step_check(p, j).holds) return false;
         return true;
       }},
      {"gamma of one point is 0",
       [] { return gamma_exact_finite(FiniteMetricSpace(Mat::Zero(1, 1)), 2.0).value == 0.0; }},
      {"gamma of two points at distance d: d (standard), 0 (literal)",
       [] {
         Mat D(2, 2);
         D << 0, 1.5, 1.5, 0;
         const FiniteMetricSpace M(D);
         return near(gamma_exact_finite(M, 2.0).value, 1.5) &&
                gamma_exact_finite(M, 2.0, GammaConvention::Literal).value == 0.0;
       }},
      {"E sup of a Gaussian over the square is 1.596 within 3 standard errors",
       [=] {
         const auto r = gaussian_sup_mc(square, Mat::Identity(2, 2), 100000, 0);
         return std::abs(r.mean - 2.0 * std::sqrt(2.0 / M_PI)) <= 3.0 * r.std_error;
       }},
      {"family l1-linf is the unit pair and its polar",
       [] {
         ExperimentSpec s;
         s.family = "l1-linf";
         const auto pairs = generate_family(s);
         return pairs.size() == 2 && pairs[1].id == pairs[0].id + "/polar";
       }},
      {"family generation is reproducible",
       [] {
         ExperimentSpec s;
         s.family = "ellipsoid";
         s.seed = 7;
         const auto a = generate_family(s), b = generate_family(s);
         if (a.size() != 6) return false;
         for (std::size_t i = 0; i < a.size(); ++i)
           if (body_to_json(a[i].K) != body_to_json(b[i].K) || body_to_json(a[i].T) != body_to_json(b[i].T)) return false;
         return true;
       }},
      {"a certificate verifies and its tampered copy is refuted",
       [] {
         const auto K = interval(3), T = interval(1);
         auto doc = covering_certificate_json(K, T, 1.0, false, covering_bracket(K, T, quick()));
         if (!verify_certificate(doc).ok) return false;
         doc["lo"] = 4;
         return !verify_certificate(doc).ok;
       }},
  };
}

}  // namespace

bool selftest(std::ostream& out) {
  bool all = true;
  int passed = 0, total = 0;
  for (const auto& [name, check] : checks()) {
    bool ok = false;
    std::string why;
    try {
      ok = check();
    } catch (const std::exception& e) {
      why = std::string(" (") + e.what() + ")";
    }
    out << (ok ? "ok   " : "FAIL ") << name << why << "\n";
    all = all && ok;
    passed += ok;
    ++total;
  }
  out << passed << "/" << total << " checks passed\n";
  return all;
}

}  // namespace polarkit::cli
