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

#include <limits>
#include <memory>
#include <optional>
#include <string>

namespace polarkit {

enum class BodyKind { HPolytope, VPolytope, Ellipsoid, LpBall, LinearImage };

const char* to_string(BodyKind kind);

/// {x : A x <= b}; rows come in +/- pairs, every b_i > 0.
struct HPolytope {
  Mat A;
  Vec b;
};

/// conv(V); rows of V are points, the set is closed under negation.
struct VPolytope {
  Mat V;
};

/// {x : x^T Q x <= 1} with Q symmetric positive definite.
struct Ellipsoid {
  Mat Q;
};

/// {x : sum |x_i / r_i|^p <= 1}; p = infinity means max |x_i / r_i| <= 1.
struct LpBall {
  double p;
  Vec r;
};

struct LinearImage;

/// A centrally symmetric convex body with the origin in its interior.
///
/// Values are immutable and cheap to copy (shared representation). Derived
/// data needed repeatedly (inverse matrices, facet and vertex lists of
/// polytopes in low dimension) is computed once at construction, so every
/// const member is safe to call concurrently.
class ConvexBody {
 public:
  static ConvexBody hpolytope(Mat A, Vec b);
  static ConvexBody vpolytope(Mat V);
  /// Like vpolytope() but appends -v for every row first.
  static ConvexBody symmetric_hull(const Mat& points);
  static ConvexBody ellipsoid(Mat Q);
  static ConvexBody lp_ball(double p, Vec r);
  static ConvexBody linear_image(Mat M, const ConvexBody& inner);

  static ConvexBody unit_lp_ball(int n, double p) { return lp_ball(p, Vec::Ones(n)); }
  static ConvexBody box(const Vec& half_widths) { return lp_ball(kInf, half_widths); }
  static ConvexBody cube(int n, double half_width) { return box(Vec::Constant(n, half_width)); }
  static ConvexBody euclidean_ball(int n, double radius = 1.0);

  static constexpr double kInf = std::numeric_limits<double>::infinity();

  int dim() const;
  BodyKind kind() const;

  /// Minkowski functional inf{t > 0 : x in t B}.
  double gauge(const Vec& x) const;
  /// sup_{x in B} <x, y>.
  double support(const Vec& y) const;
  /// Exact representation swap; see polar rules per kind.
  ConvexBody polar() const;
  /// The body s * B, kept in the same representation.
  ConvexBody scaled(double s) const;
  /// Lebesgue volume. Polytopes are supported for n <= 3.
  double volume() const;

  /// True for polytopes, l1/l-infinity balls and linear images of those.
  bool is_polyhedral() const;
  /// Rows g with B = {x : g.x <= 1}. Available when polyhedral and n <= 4.
  std::optional<Mat> facets() const;
  /// Extreme points as rows. Available when polyhedral and n <= 4.
  std::optional<Mat> vertices() const;

  /// Half-widths of the axis-aligned bounding box, support(B, e_i).
  Vec bounding_half_widths() const;

  const HPolytope* as_hpolytope() const;
  const VPolytope* as_vpolytope() const;
  const Ellipsoid* as_ellipsoid() const;
  const LpBall* as_lp_ball() const;
  const LinearImage* as_linear_image() const;

  /// Structural identity: same shared representation or equal data.
  bool same_as(const ConvexBody& other) const;

  struct Impl;

 private:
  explicit ConvexBody(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;
};

/// M(inner); M invertible.
struct LinearImage {
  Mat M;
  ConvexBody inner;
};

/// Gauge of conv(V) by the linear program min sum(mu) s.t. V^T mu = x, mu >= 0.
/// Exposed separately so tests can compare it against the facet route.
double vpolytope_gauge_lp(const Mat& V, const Vec& x);

/// Support of {x : A x <= b} by the dual program min b.lambda s.t. A^T lambda = y.
double hpolytope_support_lp(const Mat& A, const Vec& b, const Vec& y);

/// Vertices of the bounded polytope {x : G x <= 1} by brute force over row
/// subsets. Supports dimension <= 4.
Mat enumerate_vertices(const Mat& G, double tol = 1e-9);

/// sup_{x in K} gauge(T, x) when it has a closed form for the pair (polyhedral
/// on either side, two ellipsoids, identical bodies, matching linear images).
std::optional<double> exact_inclusion_radius(const ConvexBody& K, const ConvexBody& T);

struct MveeResult {
  ConvexBody ellipsoid;
  Mat Q;
  /// Smallest rho with E / rho contained in the polytope.
  double john_ratio = 0.0;
  int iterations = 0;
};

/// Minimum-volume origin-centred ellipsoid enclosing a symmetric polytope
/// (Khachiyan iteration). Every vertex ends with gauge(E, v) <= 1.
MveeResult mvee(const ConvexBody& polytope, double tol = 1e-7, int max_iter = 100000);

}  // namespace polarkit
