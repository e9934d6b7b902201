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
#include "polarkit/covering.hpp"
#include "polarkit/effort.hpp"
#include "polarkit/nets.hpp"

#include <cstdint>

namespace polarkit {

/// Bounds on min_{y in conv(hull)} gauge(T, x - y).
struct HullDistance {
  /// Certified by `witness`: support(T, witness) <= 1 and
  /// witness.x - max_i witness.hull_i = lo.
  double lo = 0.0;
  /// Value at a feasible point of the hull.
  double hi = 0.0;
  Vec witness;
};

/// Polyhedral T: one linear program over the polar vertices. Ellipsoids and
/// l_p balls: Frank-Wolfe on the hull weights until the duality gap is below
/// gap_tol. Linear images are pulled back through the inverse map.
HullDistance distance_to_hull(const ConvexBody& T, const Vec& x, const PointList& hull, double gap_tol = 1e-9);

/// Primal-only value by a linear program (polyhedral T) or Frank-Wolfe; used
/// to re-check certificates independently of their witnesses.
double distance_to_hull_primal(const ConvexBody& T, const Vec& x, const PointList& hull);

/// Ordered points of K with (x_j + int(scale T)) disjoint from conv{x_i : i < j}.
struct SeparationCertificate {
  PointList points;
  /// witnesses[j] separates x_j from the earlier hull; witnesses[0] is empty.
  std::vector<Vec> witnesses;
  double scale = 1.0;
  std::uint64_t seed = 0;
};

/// Candidate points for the greedy: at most about max_points grid points of K
/// plus boundary samples and vertices.
PointList separation_candidates(const ConvexBody& K, const ConvexBody& T, std::size_t max_points = 300);

/// Greedy lower bound on M^(K, scale T). Restarts 0 and 1 start from the
/// candidate of smallest gauge, later ones from seeded random candidates.
/// Even restarts append the candidate farthest from the current hull, odd
/// ones the nearest candidate still at distance >= scale. The longest certificate wins; ties go to the
/// lexicographically smallest point sequence.
SeparationCertificate separation_greedy_lower(const ConvexBody& K, const ConvexBody& T, double scale,
                                              const PointList& candidates, int restarts, std::uint64_t seed);
SeparationCertificate separation_greedy_lower(const ConvexBody& K, const ConvexBody& T, const Effort& effort,
                                              double scale = 1.0);

/// Re-checks points in K, every witness, and every step by the primal route.
/// Steps must clear scale * (1 - eta).
std::optional<std::string> refute_separation(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert,
                                             const Tolerances& tol = {});
bool verify_separation(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert,
                       const Tolerances& tol = {});

/// N_hi(K, (1 + eta) T / 2), an upper bound on M^(K, (1 + eta) T).
CountBracket separation_upper(const ConvexBody& K, const ConvexBody& T, const Effort& effort);

struct SeparationDualityRow {
  std::size_t lower = 0;       // greedy M^(K, (1 + eta) T)
  std::size_t dual_cover = 0;  // N_hi(T°, (1 + eta) K° / 4)
  double rhs = 0.0;            // dual_cover^2
  bool holds = false;
  SeparationCertificate certificate;
};

/// M^(K, T) <= M^(T°, K°/2)^2, with the right side bounded through covers.
SeparationDualityRow separation_duality_check(const ConvexBody& K, const ConvexBody& T, const Effort& effort);

}  // namespace polarkit
