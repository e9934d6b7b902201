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

#include "polarkit/body.hpp"
#include "polarkit/effort.hpp"

#include <Eigen/Dense>

#include <cstddef>
#include <optional>

namespace polarkit {

/// Axis-aligned lattice nodes j * spacing (j integer, origin included) that
/// lie in K inflated by one cell, in row-major order.
struct CandidateGrid {
  Vec spacing;
  /// max over cell-corner offsets c of gauge(T, c) / 2.
  double cell_radius_T = 0.0;
  /// Integer node coordinates, one row per retained point.
  Eigen::MatrixXi nodes;
  PointList points;

  double max_spacing() const { return spacing.maxCoeff(); }
};

/// gauge(T, .) radius of a lattice cell with the given side lengths.
double cell_radius(const ConvexBody& T, const Vec& spacing);

/// Spacing spacing_i = support(K, e_i) / q with q = 3 * 2^j (j any integer)
/// the smallest such value meeting the target. Throws BudgetExceeded when the node box exceeds
/// `budget`.
CandidateGrid grid_candidates(const ConvexBody& K, const ConvexBody& T, double target_cell_radius,
                              std::size_t budget = 2'000'000);

/// Same retention rule with an explicit spacing.
CandidateGrid grid_with_spacing(const ConvexBody& K, const ConvexBody& T, const Vec& spacing,
                                std::size_t budget = 2'000'000);

/// Greedy delta-net of K in the gauge of T, centres drawn from grid points in
/// K. Each step takes the candidate covering the most uncovered grid points
/// within delta - cell_radius_T; ties go to the smaller gauge(T, c), then to
/// grid order. Requires grid.cell_radius_T <= delta / 2.
PointList build_net(const ConvexBody& K, const ConvexBody& T, double delta, const CandidateGrid& grid,
                    double tol = 1e-9);

struct PackingResult {
  PointList points;
  /// True when an exact maximum independent set was certified.
  bool optimal = false;
};

/// Largest subset found with pairwise gauge(T, x - y) > eps * (1 + eta).
/// Exact when the candidate count is at most exact_cutoff.
PackingResult pack_points(const ConvexBody& T, const PointList& candidates, double eps, std::size_t exact_cutoff,
                          double eta = 1e-6, std::size_t node_budget = 200'000);

/// pack_points over the grid points lying in K.
PointList max_packing(const ConvexBody& K, const ConvexBody& T, double eps, const CandidateGrid& grid,
                      std::size_t exact_cutoff, double eta = 1e-6);

/// Checks K within the union of centers + rho T. Lattice cells that may meet
/// the interior of K must each fit inside a single translate (all corners
/// within rho + tol); a failing cell is halved until its radius drops to
/// rho * delta, after which the answer is false. Sound up to `tol`.
bool certify_cover(const ConvexBody& K, const ConvexBody& T, const PointList& centers, double rho, double delta,
                   const Vec& spacing, double tol = 1e-9, std::size_t budget = 2'000'000);
bool certify_cover(const ConvexBody& K, const ConvexBody& T, const PointList& centers, double rho, double delta,
                   const CandidateGrid& grid, double tol = 1e-9);

struct CoverSearch {
  /// Smallest cover found, absent when no level produced one.
  std::optional<PointList> centers;
  /// Lattice the centres live on; certify_cover with this spacing accepts them.
  Vec spacing;
  /// Cell radius of that lattice relative to rho.
  double resolution = 0.0;
  /// Exact set cover proved the size optimal for that lattice.
  bool lattice_optimal = false;
  bool budget_hit = false;
};

/// Searches lattice covers of K by translates rho T over successively finer
/// lattices, stopping once a cover of size <= stop_at is found. With
/// `restricted` only centres in K are allowed.
CoverSearch search_cover(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted, const Effort& effort,
                         std::size_t stop_at = 1);

/// A point c minimising max_i gauge(T, x_i - c). Exact for ellipsoids,
/// Euclidean balls and boxes (closed forms), polyhedral bodies in dimension
/// <= 4 (a linear program over the facet support values) and linear images
/// of those; a pattern search otherwise.
Vec chebyshev_center(const ConvexBody& T, const PointList& points);

/// Boundary points of K along `count` directions: both ends in 1D, equal
/// angles in 2D, a Fibonacci sphere in 3D and seeded Gaussian directions
/// beyond.
PointList boundary_points(const ConvexBody& K, std::size_t count, std::uint64_t seed = 0);

/// Grid points of K (about `grid_points` of them) plus boundary_points.
PointList sample_body(const ConvexBody& K, std::size_t grid_points, std::size_t boundary);

}  // namespace polarkit
