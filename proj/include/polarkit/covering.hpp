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
#include "polarkit/nets.hpp"

#include <cstddef>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

namespace polarkit {

/// Upper-bound witness: K lies in the union of centers + rho T.
struct CoverCertificate {
  PointList centers;
  double rho = 1.0;
  /// Cell resolution used when re-checking (relative to rho, in (0, 1)).
  double delta = 0.05;
  /// Lattice the centres were drawn from; certify_cover replays it.
  Vec spacing;
  bool restricted = false;
};

/// Lower-bound witness: points of K pairwise farther apart than 2 rho in the
/// gauge of T, so no translate of rho T holds two of them.
struct PackingCertificate {
  PointList points;
  double rho = 1.0;
};

/// Two-sided estimate lo <= value <= hi with optional witnesses and flags.
template <typename V>
struct Bracket {
  V lo{};
  V hi{};
  std::vector<std::string> flags;

  bool has_flag(const std::string& f) const {
    for (const auto& g : flags)
      if (g == f) return true;
    return false;
  }
  void add_flag(const std::string& f) {
    if (!has_flag(f)) flags.push_back(f);
  }
};

constexpr std::size_t kUnknownCount = std::numeric_limits<std::size_t>::max();

struct CountBracket : Bracket<std::size_t> {
  /// Volume bound on its own (0 when no volume is available).
  std::size_t volume_lo = 0;
  std::optional<PackingCertificate> lo_certificate;
  std::optional<CoverCertificate> hi_certificate;
};

struct EntropyBracket : Bracket<double> {
  int k = 0;
  /// Cover count upper bound at eps = hi and lower bound at eps = lo.
  std::size_t cover_hi = kUnknownCount;
  std::size_t cover_lo = 0;
  std::optional<CoverCertificate> hi_certificate;
  std::optional<PackingCertificate> lo_certificate;
};

/// Memo of count brackets keyed by (restricted, rho, stop size); safe for
/// concurrent use.
class CoverCache {
 public:
  using Key = std::tuple<bool, double, std::size_t>;
  std::optional<CountBracket> find(const Key& key) const;
  void insert(const Key& key, const CountBracket& value);

 private:
  mutable std::mutex mutex_;
  std::map<Key, CountBracket> entries_;
};

/// A point of K (approximately, exactly for polytopes) maximising gauge(T, .).
Vec farthest_point(const ConvexBody& K, const ConvexBody& T);

/// +-farthest_point, the vertices of K when known, and boundary points along
/// the directions {-1, 0, 1}^n.
PointList boundary_samples(const ConvexBody& K, const ConvexBody& T);

/// Lower bound on N(K, rho T) from volumes and from packings at separation 2 rho.
CountBracket covering_lower_bound(const ConvexBody& K, const ConvexBody& T, double rho, const Effort& effort);

/// Bracket on N(K, rho T) (or N'(K, rho T) when restricted). The lattice
/// search stops refining once it holds a cover of size <= max(lo, stop_at).
CountBracket covering_bracket_at(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted,
                                 const Effort& effort, CoverCache* cache = nullptr, std::size_t stop_at = 0);

/// N(K, T): the minimal number of translates of T covering K.
CountBracket covering_bracket(const ConvexBody& K, const ConvexBody& T, const Effort& effort);
/// N'(K, T): as above with centres restricted to K.
CountBracket covering_restricted_bracket(const ConvexBody& K, const ConvexBody& T, const Effort& effort);

/// Re-checks every witness attached to a count bracket from scratch and
/// returns the first failed check, or nothing when the bracket stands.
std::optional<std::string> refute_count_bracket(const ConvexBody& K, const ConvexBody& T, const CountBracket& bracket,
                                                const Tolerances& tol = {});
bool verify_count_bracket(const ConvexBody& K, const ConvexBody& T, const CountBracket& bracket,
                          const Tolerances& tol = {});

/// e_k(K, T) = inf{eps > 0 : N(K, eps T) <= 2^k}.
EntropyBracket entropy_bracket(const ConvexBody& K, const ConvexBody& T, int k, const Effort& effort,
                               CoverCache* cache = nullptr);
/// Fractional indices are floored.
EntropyBracket entropy_bracket(const ConvexBody& K, const ConvexBody& T, double k, const Effort& effort,
                               CoverCache* cache = nullptr);

struct EntropySequence {
  std::string pair_id;
  int dim = 0;
  std::vector<int> k_values;
  std::vector<EntropyBracket> brackets;

  /// Bracket for index k; throws InvalidArgument when k is not in the sequence.
  const EntropyBracket& at(int k) const;
  int k_max() const { return k_values.empty() ? -1 : k_values.back(); }
};

/// Brackets for k = 0..k_max, monotone envelopes applied. Distinct k run on
/// effort.threads workers; the result does not depend on the thread count.
EntropySequence entropy_sequence(const ConvexBody& K, const ConvexBody& T, int k_max, const Effort& effort,
                                 const std::string& pair_id = "");

/// Upper bound on e_k for k > n from e_n alone:
/// e_k <= 2 e_n / (2^((k - n) / n) - 1).
double entropy_tail_bound(double e_n, int n, int k);

struct TailRow {
  int k = 0;
  double e_k_hi = 0.0;
  double bound = 0.0;
  bool pass = false;
  /// The inequality holds for every value inside the brackets: e_k.hi
  /// against the bound built from e_n.lo.
  bool proven = false;
  /// Both e_k and e_n brackets are within the bisection tolerance.
  bool tight = false;
  /// c with e_k = 2 e_n exp(-c k / n), from the upper brackets.
  double implied_c = 0.0;
};

/// For each k >= 3n in the sequence checks e_k.hi <= (1 + eta) 2 e_n.hi / (2^((k - n)/n) - 1).
std::vector<TailRow> tail_check(const EntropySequence& seq, int n, double eta = 1e-6, double bisect_tol = 0.05);

/// CSV with header pair_id,k,e_lo,e_hi,cover_lo,cover_hi,flags.
std::string entropy_csv(const std::vector<EntropySequence>& sequences);

}  // namespace polarkit
