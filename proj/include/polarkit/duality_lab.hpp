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
#include "polarkit/gamma.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polarkit {

struct BodyPair {
  std::string id;
  std::string family;
  ConvexBody K;
  ConvexBody T;
};

struct ExperimentSpec {
  /// One of family_ids(), or "all".
  std::string family = "all";
  int n = 2;
  /// Base pairs per random family (the fixed l1-linf family always has one).
  int count = 3;
  std::vector<double> a_grid{0.5, 1.0, 2.0, 4.0, 8.0};
  int k_max = 6;
  std::vector<double> p_list{2.0};
  Effort effort;
  std::uint64_t seed = 0;
};

const std::vector<std::string>& family_ids();

/// Deterministic pairs for spec.family, each followed by its polar pair
/// (T°, K°) with id suffix "/polar". Random families draw from a generator
/// seeded by (seed, family); the ellipsoid family conjugates random diagonals
/// by seeded orthogonal matrices.
std::vector<BodyPair> generate_family(const ExperimentSpec& spec);

/// log2 bracket of a count bracket; an unknown upper count maps to +inf.
Bracket<double> log2_bracket(const CountBracket& b);

struct DualityRow {
  std::string pair_id;
  std::string family;
  int n = 0;
  double a = 1.0;
  CountBracket n_kt;    // N(K, T)
  CountBracket n_dual;  // N(T°, a^-1 K°)
  Bracket<double> log_kt;
  Bracket<double> log_dual;
  /// Interval for b = log N(K, T) / log N(T°, a^-1 K°).
  Bracket<double> ratio;
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const;
};

/// Rows sorted by (pair id, a). Pair-level and cell-level work runs on
/// effort.threads workers; output does not depend on the thread count.
/// Failures of one computation are recorded as "error:..." flags.
std::vector<DualityRow> duality_scan(const std::vector<BodyPair>& pairs, const std::vector<double>& a_grid,
                                     const Effort& effort);

/// Re-verifies both count certificates and checks the logged brackets and
/// the ratio against them.
bool verify_duality_row(const BodyPair& pair, const DualityRow& row, const Tolerances& tol = {});

struct FitPoint {
  double a = 0.0;
  /// Smallest b with log N(K,T).hi <= b log N(T°, a^-1 K°).lo + slack on every
  /// row at this a; +inf when some row cannot be satisfied.
  double b = 0.0;
  /// Row whose requirement set b (the loosest bracket at this a).
  std::string binding_row;
};

struct FitSummary {
  std::string family;  // "all" for the global fit
  std::vector<FitPoint> curve;
  /// Grid point minimising max(a, b), ties to the smaller a.
  double a = 0.0;
  double b = 0.0;
  std::string binding_row;
  std::size_t rows_used = 0;
  /// log(1 + n) log log(2 + n) at the family's dimension (natural logs).
  double corollary_factor = 0.0;
};

/// Per-family fits followed by the global one. Slack per row is twice the
/// sum of its two log bracket widths. Rows with N(K,T) = 1 are degenerate and
/// skipped; throws InvalidArgument when nothing else is left.
std::vector<FitSummary> fit_constants(const std::vector<DualityRow>& rows);

struct GammaDualityRow {
  std::string pair_id;
  int n = 0;
  double p = 0.0;
  double chaining_hi = 0.0;  // gamma_p(K, T) <= chaining_hi
  double sudakov_lo = 0.0;   // gamma_p(T°, K°) >= sudakov_lo
  double ratio = 0.0;        // +inf when sudakov_lo = 0
  /// C_p log(1+n)^(2+1/p) log log(2+n)^(1/p).
  double theorem_factor = 0.0;
  std::vector<std::string> flags;
};

std::vector<GammaDualityRow> gamma_duality_report(const std::vector<BodyPair>& pairs, double p, const Effort& effort,
                                                  int k_max = 6, int J = 2);

std::string duality_csv(const std::vector<DualityRow>& rows);
std::string duality_json(const std::vector<DualityRow>& rows);
std::string fit_json(const std::vector<FitSummary>& fits);
std::string gamma_duality_csv(const std::vector<GammaDualityRow>& rows);
/// Scatter of (log N(K,T), log N(T°, a^-1 K°)) midpoints, one colour per a,
/// with bracket whiskers.
std::string duality_svg(const std::vector<DualityRow>& rows);

}  // namespace polarkit
