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

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <atomic>
#include <exception>
#include <thread>

namespace polarkit {

std::optional<CountBracket> CoverCache::find(const Key& key) const {
  std::lock_guard<std::mutex> lock(mutex_);
  auto it = entries_.find(key);
  if (it == entries_.end()) return std::nullopt;
  return it->second;
}

void CoverCache::insert(const Key& key, const CountBracket& value) {
  std::lock_guard<std::mutex> lock(mutex_);
  entries_.emplace(key, value);
}

// A point of K (approximately) maximising gauge(T, .).
Vec farthest_point(const ConvexBody& K, const ConvexBody& T) {
  const int n = K.dim();
  if (auto V = K.vertices()) {
    Eigen::Index best = 0;
    double g = -1.0;
    for (Eigen::Index r = 0; r < V->rows(); ++r) {
      const double v = T.gauge(V->row(r).transpose());
      if (v > g) {
        g = v;
        best = r;
      }
    }
    return V->row(best).transpose();
  }
  Vec best = Vec::Zero(n);
  double g = -1.0;
  auto consider = [&](Vec x) {
    x /= std::max(1.0, K.gauge(x));
    const double v = T.gauge(x);
    if (v > g) {
      g = v;
      best = x;
    }
  };
  if (auto F = T.facets()) {
    // The support point of K along the best facet normal, via the gradient of h_K.
    Eigen::Index r_best = 0;
    double h_best = -1.0;
    for (Eigen::Index r = 0; r < F->rows(); ++r) {
      const double h = K.support(F->row(r).transpose());
      if (h > h_best) {
        h_best = h;
        r_best = r;
      }
    }
    Vec y = F->row(r_best).transpose();
    const double step = 1e-7 * y.norm();
    Vec x(n);
    for (int i = 0; i < n; ++i) {
      Vec up = y, down = y;
      up[i] += step;
      down[i] -= step;
      x[i] = (K.support(up) - K.support(down)) / (2 * step);
    }
    consider(x);
    return best;
  }
  // Dense directions, then coordinate-wise refinement of the best one.
  std::mt19937_64 rng(12345);
  std::normal_distribution<double> N01;
  const int samples = n <= 2 ? 720 : 3000;
  Vec dir_best = Vec::Unit(n, 0);
  for (int s = 0; s < samples; ++s) {
    Vec d(n);
    if (n == 1) {
      d[0] = 1.0;
    } else if (n == 2) {
      const double a = M_PI * s / samples;
      d << std::cos(a), std::sin(a);
    } else {
      for (int i = 0; i < n; ++i) d[i] = N01(rng);
    }
    const double before = g;
    consider(d);
    if (g > before) dir_best = d.normalized();
  }
  for (double radius = 0.02; radius > 1e-9; radius /= 2) {
    bool improved = true;
    while (improved) {
      improved = false;
      for (int i = 0; i < n; ++i) {
        for (double sgn : {-1.0, 1.0}) {
          Vec d = dir_best;
          d[i] += sgn * radius;
          d.normalize();
          const double before = g;
          consider(d);
          if (g > before) {
            dir_best = d;
            improved = true;
          }
        }
      }
    }
  }
  return best;
}

// Vertices when known, boundary points along the directions {-1, 0, 1}^n, and
// the pair +-x at which gauge(T, .) peaks on K.
PointList boundary_samples(const ConvexBody& K, const ConvexBody& T) {
  const int n = K.dim();
  PointList out;
  const Vec far = farthest_point(K, T);
  out.push_back(far);
  out.push_back(-far);
  if (auto V = K.vertices()) {
    for (Eigen::Index r = 0; r < V->rows(); ++r) out.push_back(V->row(r).transpose());
  }
  int total = 1;
  for (int i = 0; i < n; ++i) total *= 3;
  for (int code = 0; code < total; ++code) {
    Vec d(n);
    int c = code;
    for (int i = 0; i < n; ++i) {
      d[i] = c % 3 - 1;
      c /= 3;
    }
    if (d.isZero()) continue;
    out.push_back(d / K.gauge(d));
  }
  return out;
}

namespace {

std::size_t volume_bound(const ConvexBody& K, const ConvexBody& T, double rho) {
  double ratio = 0.0;
  try {
    ratio = K.volume() / (std::pow(rho, K.dim()) * T.volume());
  } catch (const Unsupported&) {
    return 0;
  }
  if (!std::isfinite(ratio) || ratio > 1e15) return static_cast<std::size_t>(1e15);
  return static_cast<std::size_t>(std::max(0.0, std::ceil(ratio * (1.0 - 1e-9))));
}

constexpr std::size_t kPackingGridCap = 600;
constexpr std::size_t kBoundaryPackingPoints = 256;
// Cover refinement: sample sizes by dimension, runs polished per size, and
// the certification cut-off (cell radius / rho).
constexpr std::size_t kRefineCoarse[] = {0, 0, 1500, 4000};
constexpr std::size_t kRefineFine[] = {0, 0, 12000, 30000};
constexpr std::size_t kRefinePolished = 3;
constexpr std::size_t kRefineMaxCenters = 64;
constexpr double kRefineSlack = 1.03;
constexpr double kRefineCellsPerAxis = 16.0;
constexpr double kRefineDelta = 0.002;

PointList packing_candidates(const ConvexBody& K, const ConvexBody& T, double rho, const Effort& effort) {
  PointList cands = boundary_samples(K, T);
  // Node spacing about rho / 2 in the gauge of T, coarsened until the grid
  // box holds a few times the cap (K fills part of its box).
  const int n = K.dim();
  const Vec w = K.bounding_half_widths();
  const double r1 = cell_radius(T, w);
  const double per_axis = std::pow(4.0 * kPackingGridCap, 1.0 / n);
  double target = std::max(rho / 2, 2.0 * r1 / std::max(1.0, per_axis - 1.0));
  for (int attempt = 0; attempt < 20; ++attempt, target *= 1.3) {
    CandidateGrid grid;
    try {
      grid = grid_candidates(K, T, target, effort.grid_budget);
    } catch (const BudgetExceeded&) {
      continue;
    }
    PointList inside;
    for (const auto& p : grid.points)
      if (K.gauge(p) <= 1.0) inside.push_back(p);
    if (inside.size() > kPackingGridCap) continue;
    cands.insert(cands.end(), inside.begin(), inside.end());
    break;
  }
  return cands;
}

}  // namespace

CountBracket covering_lower_bound(const ConvexBody& K, const ConvexBody& T, double rho, const Effort& effort) {
  if (!(rho > 0)) throw InvalidArgument("covering: rho must be positive");
  if (K.dim() != T.dim()) throw InvalidArgument("covering: dimension mismatch");
  CountBracket out;
  out.volume_lo = volume_bound(K, T, rho);
  // Geometric conflict graphs rarely close their branch and bound, so the
  // packing gets a tenth of the node budget.
  auto pack = pack_points(T, packing_candidates(K, T, rho, effort), 2 * rho, effort.packing_exact_cutoff,
                          effort.tol.eta, effort.exact_node_budget / 10);
  // Large packings tend to sit on the boundary; a dense boundary sample alone
  // is small enough for the exact search.
  auto edge = pack_points(T, boundary_points(K, kBoundaryPackingPoints), 2 * rho, effort.packing_exact_cutoff,
                          effort.tol.eta, effort.exact_node_budget / 10);
  if (edge.points.size() > pack.points.size()) pack = std::move(edge);
  if (!pack.optimal) out.add_flag("packing_greedy");
  out.lo = std::max<std::size_t>({1, out.volume_lo, pack.points.size()});
  out.hi = kUnknownCount;
  out.lo_certificate = PackingCertificate{std::move(pack.points), rho};
  return out;
}

namespace {

// Lloyd-style minimax: assign sample points to their nearest centre, move
// each centre to the Chebyshev centre of its cluster, repeat. Returns the
// best centres seen and their sampled radius.
std::pair<PointList, double> lloyd_minimax(const ConvexBody& K, const ConvexBody& T, PointList C,
                                           const PointList& sample, bool restricted, int iterations) {
  const std::size_t m = C.size();
  PointList best = C;
  double best_radius = std::numeric_limits<double>::infinity();
  std::vector<PointList> clusters(m);
  for (int it = 0; it < iterations; ++it) {
    for (auto& c : clusters) c.clear();
    double radius = 0.0;
    for (const auto& x : sample) {
      std::size_t bi = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t k = 0; k < m; ++k) {
        const double d = T.gauge(x - C[k]);
        if (d < bd) bd = d, bi = k;
      }
      clusters[bi].push_back(x);
      radius = std::max(radius, bd);
    }
    if (radius >= best_radius * (1.0 - 1e-9)) break;
    best_radius = radius;
    best = C;
    for (std::size_t k = 0; k < m; ++k) {
      if (clusters[k].empty()) continue;
      C[k] = chebyshev_center(T, clusters[k]);
      if (restricted) {
        const double g = K.gauge(C[k]);
        if (g > 1.0) C[k] /= g;
      }
    }
  }
  return {best, best_radius};
}

// Restarts from farthest-point seeds on a coarse sample; the most promising
// runs are polished on a dense sample and then certified on a cell lattice.
std::optional<CoverCertificate> refine_cover(const ConvexBody& K, const ConvexBody& T, double rho, std::size_t m,
                                             bool restricted, const Effort& effort) {
  const int n = K.dim();
  const std::size_t dn = static_cast<std::size_t>(std::min(n, 3));
  const PointList coarse = sample_body(K, std::max(kRefineCoarse[dn], 30 * m), kBoundaryPackingPoints);
  if (m == 0 || coarse.size() <= m) return std::nullopt;
  std::vector<std::pair<double, PointList>> runs;
  for (int r = 0; r < effort.refine_restarts; ++r) {
    std::mt19937_64 rng(effort.seed ^ (0x9E3779B97F4A7C15ULL * (static_cast<std::uint64_t>(r) + 1)) ^ (m << 20));
    PointList C{coarse[std::uniform_int_distribution<std::size_t>(0, coarse.size() - 1)(rng)]};
    std::vector<double> near(coarse.size(), std::numeric_limits<double>::infinity());
    while (C.size() < m) {
      std::size_t far = 0;
      for (std::size_t i = 0; i < coarse.size(); ++i) {
        near[i] = std::min(near[i], T.gauge(coarse[i] - C.back()));
        if (near[i] > near[far]) far = i;
      }
      C.push_back(coarse[far]);
    }
    auto [best, radius] = lloyd_minimax(K, T, std::move(C), coarse, restricted, effort.refine_iterations);
    runs.emplace_back(radius, std::move(best));
  }
  std::stable_sort(runs.begin(), runs.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
  const PointList fine = sample_body(K, std::max(kRefineFine[dn], 120 * m), 4 * kBoundaryPackingPoints);
  const Vec spacing = K.bounding_half_widths() / kRefineCellsPerAxis;
  const double tol = effort.tol.abs * std::max(1.0, rho);
  for (std::size_t i = 0; i < std::min<std::size_t>(kRefinePolished, runs.size()); ++i) {
    if (runs[i].first > rho * kRefineSlack) break;
    auto [best, radius] = lloyd_minimax(K, T, runs[i].second, fine, restricted, effort.refine_iterations);
    if (radius > rho * (1.0 - kRefineDelta / 2)) continue;
    try {
      if (certify_cover(K, T, best, rho, kRefineDelta, spacing, tol, effort.grid_budget))
        return CoverCertificate{best, rho, kRefineDelta, spacing, restricted};
    } catch (const BudgetExceeded&) {
    }
  }
  return std::nullopt;
}

}  // namespace

CountBracket covering_bracket_at(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted,
                                 const Effort& effort, CoverCache* cache, std::size_t stop_at) {
  const CoverCache::Key key{restricted, rho, stop_at};
  if (cache) {
    if (auto hit = cache->find(key)) return *hit;
  }
  CountBracket out = covering_lower_bound(K, T, rho, effort);
  const auto search = search_cover(K, T, rho, restricted, effort, std::max(out.lo, stop_at));
  if (search.budget_hit) out.add_flag("budget");
  if (search.centers) {
    out.hi = search.centers->size();
    out.hi_certificate = CoverCertificate{*search.centers, rho, 0.05, search.spacing, restricted};
    if (out.hi > out.lo && !search.lattice_optimal) out.add_flag("greedy");
  } else {
    out.hi = kUnknownCount;
    out.add_flag("no_cover");
  }
  // Lattice covers are greedy; local minimax often saves a few centres.
  if (K.dim() >= 2 && effort.refine_restarts > 0 && out.hi != kUnknownCount && out.hi > std::max(out.lo, stop_at) &&
      std::max(out.lo, stop_at) <= kRefineMaxCenters) {
    std::size_t m = std::min(out.hi - 1, kRefineMaxCenters);
    const std::size_t floor_m = std::max(out.lo, stop_at);
    if (stop_at > 0) m = floor_m;  // entropy mode only asks about one size
    for (; m >= floor_m && m >= 1; --m) {
      auto cert = refine_cover(K, T, rho, m, restricted, effort);
      if (!cert) break;
      out.hi = m;
      out.hi_certificate = std::move(cert);
      if (m == floor_m) break;
    }
    if (out.hi == out.lo) out.flags.erase(std::remove(out.flags.begin(), out.flags.end(), "greedy"), out.flags.end());
  }
  if (out.lo > out.hi) {
    out.add_flag("inconsistent");
    log_warning("covering: lower bound exceeds the certified cover size; check tolerances");
  }
  if (cache) cache->insert(key, out);
  return out;
}

CountBracket covering_bracket(const ConvexBody& K, const ConvexBody& T, const Effort& effort) {
  return covering_bracket_at(K, T, 1.0, false, effort);
}

CountBracket covering_restricted_bracket(const ConvexBody& K, const ConvexBody& T, const Effort& effort) {
  return covering_bracket_at(K, T, 1.0, true, effort);
}

std::optional<std::string> refute_count_bracket(const ConvexBody& K, const ConvexBody& T, const CountBracket& bracket,
                                                const Tolerances& tol) {
  auto fail = [](std::string msg) { return std::optional<std::string>(std::move(msg)); };
  if (bracket.lo > bracket.hi) return fail("lo exceeds hi");
  if (bracket.hi_certificate) {
    const auto& c = *bracket.hi_certificate;
    if (c.centers.size() > bracket.hi)
      return fail("cover has " + std::to_string(c.centers.size()) + " centres but claims hi = " + std::to_string(bracket.hi));
    for (std::size_t i = 0; i < c.centers.size(); ++i) {
      if (c.centers[i].size() != K.dim() || !c.centers[i].allFinite()) return fail("centre " + std::to_string(i) + " is malformed");
      if (c.restricted && K.gauge(c.centers[i]) > 1.0 + tol.abs)
        return fail("restricted cover: centre " + std::to_string(i) + " lies outside K");
    }
    if (!(c.rho > 0) || !(c.delta > 0 && c.delta < 1) || c.spacing.size() != K.dim() || !(c.spacing.array() > 0).all())
      return fail("cover parameters (rho, delta, spacing) are invalid");
    if (!certify_cover(K, T, c.centers, c.rho, c.delta, c.spacing, tol.abs * std::max(1.0, c.rho)))
      return fail("cover check failed: some cell of K is not inside a single translate of rho T");
  } else if (bracket.hi != kUnknownCount) {
    return fail("finite hi without a cover certificate");
  }
  std::size_t proven = 1;
  if (bracket.lo_certificate) {
    const auto& p = *bracket.lo_certificate;
    for (std::size_t i = 0; i < p.points.size(); ++i) {
      if (p.points[i].size() != K.dim() || !p.points[i].allFinite()) return fail("packing point " + std::to_string(i) + " is malformed");
      if (K.gauge(p.points[i]) > 1.0 + tol.abs) return fail("packing point " + std::to_string(i) + " lies outside K");
    }
    for (std::size_t i = 0; i < p.points.size(); ++i)
      for (std::size_t j = i + 1; j < p.points.size(); ++j)
        if (T.gauge(p.points[i] - p.points[j]) <= 2 * p.rho * (1.0 + tol.eta))
          return fail("packing points " + std::to_string(i) + " and " + std::to_string(j) + " are within 2 rho");
    proven = std::max({proven, p.points.size(), volume_bound(K, T, p.rho)});
  }
  if (bracket.lo > proven)
    return fail("lo = " + std::to_string(bracket.lo) + " exceeds the proven lower bound " + std::to_string(proven));
  return std::nullopt;
}

bool verify_count_bracket(const ConvexBody& K, const ConvexBody& T, const CountBracket& bracket,
                          const Tolerances& tol) {
  return !refute_count_bracket(K, T, bracket, tol);
}

namespace {

double pow2(int k) { return std::ldexp(1.0, k); }

// Smallest eps found with a certified cover of size <= 1, by growing a guess.
double single_cover_radius(const ConvexBody& K, const ConvexBody& T, const Effort& effort, CoverCache* cache) {
  if (auto R = exact_inclusion_radius(K, T)) return *R;
  double guess = std::max(T.gauge(farthest_point(K, T)), 1e-12);
  for (int i = 0; i < 60; ++i, guess *= 1.25) {
    if (covering_bracket_at(K, T, guess, false, effort, cache, 1).hi <= 1) return guess;
  }
  throw BudgetExceeded("entropy: no single-translate cover found; increase the effort budgets");
}

}  // namespace

EntropyBracket entropy_bracket(const ConvexBody& K, const ConvexBody& T, int k, const Effort& effort,
                               CoverCache* cache) {
  if (k < 0) throw InvalidArgument("entropy_bracket: k must be nonnegative");
  if (K.dim() != T.dim()) throw InvalidArgument("entropy_bracket: dimension mismatch");
  CoverCache local;
  if (!cache) cache = &local;
  const int n = K.dim();
  const double target = pow2(k);
  const double tol = effort.bisect_tol;
  const auto stop = static_cast<std::size_t>(std::min(target, 1e15));
  auto upper = [&](double eps) { return covering_bracket_at(K, T, eps, false, effort, cache, stop); };
  auto lower = [&](double eps) { return covering_lower_bound(K, T, eps, effort); };

  EntropyBracket out;
  out.k = k;
  double hi = single_cover_radius(K, T, effort, cache);

  // Closed-form lower candidates, each confirmed by an actual lower bound.
  double lo = 0.0;
  std::vector<double> guesses;
  try {
    const double v = std::pow(K.volume() / (target * T.volume()), 1.0 / n);
    guesses.push_back(v * (1.0 - 1e-6));
  } catch (const Unsupported&) {
  }
  if (k == 0) {
    const double s = T.gauge(farthest_point(K, T));
    guesses.push_back(s / (1.0 + effort.tol.eta) * (1.0 - 1e-9));
  }
  std::sort(guesses.rbegin(), guesses.rend());
  for (double g : guesses) {
    if (g > 0 && g < hi && static_cast<double>(lower(g).lo) > target) {
      lo = g;
      break;
    }
  }

  int steps = 0;
  // Shrink hi: a is a radius where no cover of size 2^k was found.
  double a = lo > 0 ? lo : hi * std::pow(2.0, -(static_cast<double>(k) / n) - 3.0);
  while (hi / a > 1.0 + tol && steps < effort.max_bisect_steps) {
    ++steps;
    const double x = std::sqrt(a * hi);
    const auto b = upper(x);
    if (static_cast<double>(b.hi) <= target) {
      hi = x;
    } else {
      a = x;
      if (static_cast<double>(b.lo) > target) lo = std::max(lo, x);
    }
  }
  // Raise lo towards a with lower bounds alone.
  double d = a;
  if (lo == 0.0) {
    // No certified lower radius yet: probe downward geometrically.
    double x = a;
    for (int i = 0; i < 30 && steps < effort.max_bisect_steps && lo == 0.0; ++i, ++steps) {
      x /= 2;
      if (static_cast<double>(lower(x).lo) > target) lo = x;
      else d = x;
    }
  }
  while (lo > 0 && d / lo > 1.0 + tol / 2 && hi / lo > 1.0 + tol && steps < effort.max_bisect_steps) {
    ++steps;
    const double x = std::sqrt(lo * d);
    if (static_cast<double>(lower(x).lo) > target) lo = x;
    else d = x;
  }
  if (steps >= effort.max_bisect_steps) out.add_flag("budget");

  out.lo = lo;
  out.hi = hi;
  const auto hb = upper(hi);
  out.cover_hi = hb.hi;
  out.hi_certificate = hb.hi_certificate;
  for (const auto& f : hb.flags)
    if (f == "budget") out.add_flag(f);
  if (lo > 0) {
    const auto lb = lower(lo);
    out.cover_lo = lb.lo;
    out.lo_certificate = lb.lo_certificate;
  }
  if (lo <= 0 || hi / lo > 1.0 + tol) out.add_flag("wide");
  return out;
}

EntropyBracket entropy_bracket(const ConvexBody& K, const ConvexBody& T, double k, const Effort& effort,
                               CoverCache* cache) {
  if (!(k >= 0)) throw InvalidArgument("entropy_bracket: k must be nonnegative");
  return entropy_bracket(K, T, static_cast<int>(std::floor(k)), effort, cache);
}

const EntropyBracket& EntropySequence::at(int k) const {
  for (std::size_t i = 0; i < k_values.size(); ++i)
    if (k_values[i] == k) return brackets[i];
  throw InvalidArgument("entropy sequence has no entry for k = " + std::to_string(k));
}

EntropySequence entropy_sequence(const ConvexBody& K, const ConvexBody& T, int k_max, const Effort& effort,
                                 const std::string& pair_id) {
  if (k_max < 1) throw InvalidArgument("entropy_sequence: k_max must be at least 1");
  EntropySequence seq;
  seq.pair_id = pair_id;
  seq.dim = K.dim();
  seq.brackets.resize(static_cast<std::size_t>(k_max) + 1);
  for (int k = 0; k <= k_max; ++k) seq.k_values.push_back(k);

  CoverCache cache;
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int k = next++; k <= k_max; k = next++) {
      try {
        seq.brackets[static_cast<std::size_t>(k)] = entropy_bracket(K, T, k, effort, &cache);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  const int threads = std::max(1, std::min(effort.threads, k_max + 1));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // e_k is non-increasing in k, so both envelopes stay sound.
  for (std::size_t i = 1; i < seq.brackets.size(); ++i) {
    auto& b = seq.brackets[i];
    const auto& prev = seq.brackets[i - 1];
    if (prev.hi < b.hi) {
      b.hi = prev.hi;
      b.cover_hi = prev.cover_hi;
      b.hi_certificate = prev.hi_certificate;
    }
  }
  for (std::size_t i = seq.brackets.size() - 1; i-- > 0;) {
    auto& b = seq.brackets[i];
    const auto& next_b = seq.brackets[i + 1];
    if (next_b.lo > b.lo) {
      b.lo = next_b.lo;
      b.cover_lo = next_b.cover_lo;
      b.lo_certificate = next_b.lo_certificate;
    }
  }
  return seq;
}

double entropy_tail_bound(double e_n, int n, int k) {
  if (n < 1 || k <= n) throw InvalidArgument("entropy_tail_bound: needs k > n >= 1");
  return 2.0 * e_n / (std::pow(2.0, static_cast<double>(k - n) / n) - 1.0);
}

std::vector<TailRow> tail_check(const EntropySequence& seq, int n, double eta, double bisect_tol) {
  if (n < 1) throw InvalidArgument("tail_check: dimension must be positive");
  if (seq.k_values.empty() || seq.k_values.front() > n || seq.k_max() < 3 * n) {
    throw InvalidArgument("tail_check: the sequence must cover k = " + std::to_string(n) + " .. " +
                          std::to_string(3 * n));
  }
  const auto& en = seq.at(n);
  auto tight = [&](const EntropyBracket& b) { return b.lo > 0 && b.hi / b.lo <= 1.0 + bisect_tol + 1e-12; };
  std::vector<TailRow> rows;
  for (std::size_t i = 0; i < seq.k_values.size(); ++i) {
    const int k = seq.k_values[i];
    if (k < 3 * n) continue;
    const auto& ek = seq.brackets[i];
    TailRow row;
    row.k = k;
    row.e_k_hi = ek.hi;
    row.bound = (1.0 + eta) * entropy_tail_bound(en.hi, n, k);
    row.pass = ek.hi <= row.bound;
    row.proven = ek.hi <= (1.0 + eta) * entropy_tail_bound(en.lo, n, k);
    row.tight = tight(ek) && tight(en);
    row.implied_c = ek.hi > 0 ? static_cast<double>(n) / k * std::log(2.0 * en.hi / ek.hi)
                              : std::numeric_limits<double>::infinity();
    rows.push_back(row);
  }
  return rows;
}

std::string entropy_csv(const std::vector<EntropySequence>& sequences) {
  std::ostringstream os;
  os << std::setprecision(10);
  os << "pair_id,k,e_lo,e_hi,cover_lo,cover_hi,flags\n";
  for (const auto& seq : sequences) {
    for (std::size_t i = 0; i < seq.k_values.size(); ++i) {
      const auto& b = seq.brackets[i];
      os << seq.pair_id << ',' << seq.k_values[i] << ',' << b.lo << ',' << b.hi << ',' << b.cover_lo << ',';
      if (b.cover_hi == kUnknownCount) os << "";
      else os << b.cover_hi;
      os << ',';
      for (std::size_t f = 0; f < b.flags.size(); ++f) os << (f ? ";" : "") << b.flags[f];
      os << '\n';
    }
  }
  return os.str();
}

}  // namespace polarkit
