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

#include "polarkit/combinatorics.hpp"
#include "polarkit/lp.hpp"

#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace polarkit {

namespace {

using Index = Eigen::VectorXi;

// Row-major box of integer points lo + [0, ext).
class IndexBox {
 public:
  IndexBox(Index lo, Index ext) : lo_(std::move(lo)), ext_(std::move(ext)), stride_(lo_.size()) {
    double total = 1.0;
    std::size_t s = 1;
    for (Eigen::Index i = lo_.size(); i-- > 0;) {
      stride_[i] = s;
      s *= static_cast<std::size_t>(std::max(ext_[i], 0));
      total *= std::max(ext_[i], 0);
    }
    size_ = total > 1e15 ? std::numeric_limits<std::size_t>::max() : s;
  }
  std::size_t size() const { return size_; }
  bool contains(const Index& j) const {
    for (Eigen::Index i = 0; i < j.size(); ++i)
      if (j[i] < lo_[i] || j[i] >= lo_[i] + ext_[i]) return false;
    return true;
  }
  std::size_t index(const Index& j) const {
    std::size_t k = 0;
    for (Eigen::Index i = 0; i < j.size(); ++i) k += static_cast<std::size_t>(j[i] - lo_[i]) * stride_[i];
    return k;
  }
  /// Linear displacement of an integer offset; valid when both ends lie in the box.
  std::ptrdiff_t offset(const Index& d) const {
    std::ptrdiff_t k = 0;
    for (Eigen::Index i = 0; i < d.size(); ++i) k += static_cast<std::ptrdiff_t>(d[i]) * static_cast<std::ptrdiff_t>(stride_[i]);
    return k;
  }
  Index at(std::size_t k) const {
    Index j(lo_.size());
    for (Eigen::Index i = 0; i < j.size(); ++i) {
      j[i] = lo_[i] + static_cast<int>(k / stride_[i]);
      k %= stride_[i];
    }
    return j;
  }

 private:
  Index lo_, ext_;
  std::vector<std::size_t> stride_;
  std::size_t size_ = 0;
};

Vec node_point(const Index& j, const Vec& h) { return j.cast<double>().cwiseProduct(h); }

// Vertices of the box [0, 1]^n as integer offsets.
std::vector<Index> unit_corners(int n) {
  std::vector<Index> out;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Index e(n);
    for (int i = 0; i < n; ++i) e[i] = (mask >> i) & 1;
    out.push_back(e);
  }
  return out;
}

int ceil_ratio(double a, double b) {
  const double r = std::ceil(a / b - 1e-9);
  if (r > 1e8) throw BudgetExceeded("lattice extent " + std::to_string(r) + " is beyond any grid budget");
  return std::max(1, static_cast<int>(r));
}

std::string budget_message(const char* what, std::size_t need, std::size_t budget) {
  std::ostringstream os;
  os << what << " needs " << need << " cells, over the grid budget of " << budget
     << "; raise grid_budget or coarsen the resolution";
  return os.str();
}

Vec numeric_gauge_gradient(const ConvexBody& K, const Vec& x) {
  const double step = 1e-6 * std::max(1.0, x.norm());
  Vec g(x.size());
  Vec y = x;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    y[i] = x[i] + step;
    const double up = K.gauge(y);
    y[i] = x[i] - step;
    const double down = K.gauge(y);
    y[i] = x[i];
    g[i] = (up - down) / (2 * step);
  }
  return g;
}

double box_min(const Vec& y, const Vec& lo, const Vec& hi) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) s += std::min(y[i] * lo[i], y[i] * hi[i]);
  return s;
}

// Conservative: false only when a separating direction proves the box misses
// the interior of K.
class InteriorTest {
 public:
  InteriorTest(const ConvexBody& K, double tol)
      : K_(K), facets_(K.facets()), widths_(K.bounding_half_widths()), tol_(tol) {}

  bool may_meet(const Vec& lo, const Vec& hi) const {
    for (Eigen::Index i = 0; i < lo.size(); ++i) {
      if (lo[i] >= widths_[i] - tol_ || hi[i] <= -widths_[i] + tol_) return false;
    }
    if (facets_) {
      for (Eigen::Index r = 0; r < facets_->rows(); ++r) {
        if (box_min(facets_->row(r).transpose(), lo, hi) >= 1.0 - tol_) return false;
      }
      return true;
    }
    const Vec mid = (lo + hi) / 2;
    if (K_.gauge(mid) <= 1.0) return true;
    const Vec y = numeric_gauge_gradient(K_, mid);
    if (y.norm() == 0.0) return true;
    return K_.support(y) > box_min(y, lo, hi) + tol_ * y.norm();
  }

 private:
  const ConvexBody& K_;
  std::optional<Mat> facets_;
  Vec widths_;
  double tol_;
};

}  // namespace

double cell_radius(const ConvexBody& T, const Vec& spacing) {
  const int n = static_cast<int>(spacing.size());
  double r = 0.0;
  for (int mask = 0; mask < (1 << n); ++mask) {
    Vec c = spacing;
    for (int i = 0; i < n; ++i)
      if ((mask >> i) & 1) c[i] = -c[i];
    r = std::max(r, T.gauge(c));
  }
  return r / 2.0;
}

CandidateGrid grid_with_spacing(const ConvexBody& K, const ConvexBody& T, const Vec& spacing, std::size_t budget) {
  const int n = K.dim();
  if (spacing.size() != n || T.dim() != n) throw InvalidArgument("grid: dimension mismatch");
  if ((spacing.array() <= 0).any()) throw InvalidArgument("grid: spacing must be positive");
  const Vec w = K.bounding_half_widths();
  Index m(n);
  for (int i = 0; i < n; ++i) m[i] = ceil_ratio(w[i], spacing[i]);
  IndexBox box(-m, 2 * m + Index::Ones(n));
  if (box.size() > budget) throw BudgetExceeded(budget_message("grid", box.size(), budget));

  const double slack = 2.0 * cell_radius(K, spacing);
  CandidateGrid grid;
  grid.spacing = spacing;
  grid.cell_radius_T = cell_radius(T, spacing);
  std::vector<Index> kept;
  for (std::size_t k = 0; k < box.size(); ++k) {
    Index j = box.at(k);
    Vec p = node_point(j, spacing);
    if (K.gauge(p) <= 1.0 + slack + 1e-12) {
      kept.push_back(j);
      grid.points.push_back(std::move(p));
    }
  }
  grid.nodes.resize(static_cast<Eigen::Index>(kept.size()), n);
  for (std::size_t r = 0; r < kept.size(); ++r) grid.nodes.row(static_cast<Eigen::Index>(r)) = kept[r].transpose();
  return grid;
}

CandidateGrid grid_candidates(const ConvexBody& K, const ConvexBody& T, double target_cell_radius,
                              std::size_t budget) {
  if (!(target_cell_radius > 0)) throw InvalidArgument("grid_candidates: target cell radius must be positive");
  const Vec w = K.bounding_half_widths();
  const double r1 = cell_radius(T, w);
  // q = 3 * 2^j, j of either sign: halving the target exactly doubles q.
  double q = 3;
  while (r1 / q > target_cell_radius) {
    q *= 2;
    if (q > 1e9) throw BudgetExceeded("grid_candidates: target cell radius is too small for any grid budget");
  }
  while (r1 / (q / 2) <= target_cell_radius) q /= 2;
  return grid_with_spacing(K, T, w / q, budget);
}

PointList build_net(const ConvexBody& K, const ConvexBody& T, double delta, const CandidateGrid& grid, double tol) {
  const int n = K.dim();
  const double r = grid.cell_radius_T;
  if (!(delta > 0)) throw InvalidArgument("build_net: delta must be positive");
  if (r > delta / 2 + tol) {
    throw InvalidArgument("build_net: grid cell radius " + std::to_string(r) + " exceeds delta/2 = " +
                          std::to_string(delta / 2) + "; use a finer grid");
  }
  const Vec& h = grid.spacing;
  const auto N = static_cast<std::size_t>(grid.nodes.rows());
  const double radius = delta - r;
  const Vec t = T.bounding_half_widths();
  Index reach(n);
  for (int i = 0; i < n; ++i) reach[i] = static_cast<int>(std::floor(radius * t[i] / h[i] + 1e-9));
  // Node box padded by the template reach, so centre + offset never leaves it.
  Index lo = grid.nodes.colwise().minCoeff().transpose() - reach;
  Index hi = grid.nodes.colwise().maxCoeff().transpose() + reach;
  IndexBox box(lo, hi - lo + Index::Ones(n));
  if (box.size() > 64 * std::max<std::size_t>(N, 1024)) {
    throw BudgetExceeded("build_net: delta is too large relative to the grid spacing; use a coarser grid");
  }

  // Targets: nodes that are the rounding of some interior point of K.
  InteriorTest interior(K, tol);
  std::vector<int> target_id(box.size(), -1);
  std::uint32_t targets = 0;
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < N; ++k) {
    const Vec& p = grid.points[k];
    if (interior.may_meet(p - h / 2, p + h / 2)) target_id[box.index(grid.nodes.row(static_cast<Eigen::Index>(k)).transpose())] = static_cast<int>(targets++);
    if (K.gauge(p) <= 1.0 + tol) candidates.push_back(k);
  }
  std::stable_sort(candidates.begin(), candidates.end(),
                   [&](auto a, auto b) { return T.gauge(grid.points[a]) < T.gauge(grid.points[b]) - tol; });

  IndexBox offsets(-reach, 2 * reach + Index::Ones(n));
  std::vector<std::ptrdiff_t> tmpl;
  for (std::size_t k = 0; k < offsets.size(); ++k) {
    const Index o = offsets.at(k);
    if (T.gauge(node_point(o, h)) <= radius + tol) tmpl.push_back(box.offset(o));
  }

  combinatorics::SetCover inst{targets, {}};
  for (auto c : candidates) {
    const auto base = static_cast<std::ptrdiff_t>(box.index(grid.nodes.row(static_cast<Eigen::Index>(c)).transpose()));
    std::vector<std::uint32_t> set;
    for (auto o : tmpl) {
      const int id = target_id[static_cast<std::size_t>(base + o)];
      if (id >= 0) set.push_back(static_cast<std::uint32_t>(id));
    }
    inst.sets.push_back(std::move(set));
  }
  std::vector<std::size_t> chosen;
  try {
    chosen = combinatorics::prune_redundant(inst, combinatorics::greedy_cover(inst));
  } catch (const InvalidArgument&) {
    throw InvalidArgument("build_net: some grid points cannot be reached from grid points in K; use a finer grid");
  }
  PointList out;
  for (auto s : chosen) out.push_back(grid.points[candidates[s]]);
  return out;
}

PackingResult pack_points(const ConvexBody& T, const PointList& candidates, double eps, std::size_t exact_cutoff,
                          double eta, std::size_t node_budget) {
  if (!(eps > 0)) throw InvalidArgument("packing: eps must be positive");
  PackingResult out;
  const std::size_t N = candidates.size();
  if (N == 0) return out;
  const double limit = eps * (1.0 + eta);
  constexpr std::size_t kDenseCap = 3000;
  if (N > kDenseCap) {
    log_warning("packing: candidate count exceeds the exact cutoff of " + std::to_string(exact_cutoff) +
                "; using a sequential greedy packing");
    for (const auto& p : candidates) {
      const bool ok = std::all_of(out.points.begin(), out.points.end(),
                                  [&](const Vec& q) { return T.gauge(p - q) > limit; });
      if (ok) out.points.push_back(p);
    }
    return out;
  }
  combinatorics::ConflictGraph g(N, combinatorics::Bitset(N));
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = i + 1; j < N; ++j) {
      if (T.gauge(candidates[i] - candidates[j]) <= limit) {
        g[i].set(j);
        g[j].set(i);
      }
    }
  }
  std::vector<std::size_t> chosen;
  if (N <= exact_cutoff) {
    auto r = combinatorics::max_independent_set(g, node_budget);
    chosen = std::move(r.vertices);
    out.optimal = r.optimal;
  } else {
    log_warning("packing: candidate count exceeds the exact cutoff of " + std::to_string(exact_cutoff) +
                "; greedy only");
    chosen = combinatorics::greedy_independent_set(g);
  }
  for (auto i : chosen) out.points.push_back(candidates[i]);
  return out;
}

PointList max_packing(const ConvexBody& K, const ConvexBody& T, double eps, const CandidateGrid& grid,
                      std::size_t exact_cutoff, double eta) {
  PointList inside;
  for (const auto& p : grid.points)
    if (K.gauge(p) <= 1.0 + 1e-12) inside.push_back(p);
  return pack_points(T, inside, eps, exact_cutoff, eta).points;
}

namespace {

class CoverChecker {
 public:
  CoverChecker(const ConvexBody& K, const ConvexBody& T, const PointList& centers, double rho, double delta,
               double tol)
      : T_(T), centers_(centers), rho_(rho), delta_(delta), tol_(tol), interior_(K, tol),
        corners_(unit_corners(K.dim())) {}

  bool covered(const Vec& lo, const Vec& hi) {
    const Vec size = hi - lo;
    const Vec mid = (lo + hi) / 2;
    auto fits = [&](const Vec& c) {
      if (T_.gauge(mid - c) > rho_ + tol_) return false;
      for (const auto& e : corners_) {
        const Vec corner = lo + e.cast<double>().cwiseProduct(size);
        if (T_.gauge(corner - c) > rho_ + tol_) return false;
      }
      return true;
    };
    if (hint_ < centers_.size() && fits(centers_[hint_])) return true;
    for (std::size_t i = 0; i < centers_.size(); ++i) {
      if (i != hint_ && fits(centers_[i])) {
        hint_ = i;
        return true;
      }
    }
    if (cell_radius(T_, size) <= rho_ * delta_) return false;
    const Vec half = size / 2;
    for (const auto& e : corners_) {
      const Vec clo = lo + e.cast<double>().cwiseProduct(half);
      const Vec chi = clo + half;
      if (interior_.may_meet(clo, chi) && !covered(clo, chi)) return false;
    }
    return true;
  }

  bool may_meet(const Vec& lo, const Vec& hi) const { return interior_.may_meet(lo, hi); }

 private:
  const ConvexBody& T_;
  const PointList& centers_;
  double rho_, delta_, tol_;
  InteriorTest interior_;
  std::vector<Index> corners_;
  std::size_t hint_ = 0;
};

}  // namespace

bool certify_cover(const ConvexBody& K, const ConvexBody& T, const PointList& centers, double rho, double delta,
                   const Vec& spacing, double tol, std::size_t budget) {
  const int n = K.dim();
  if (!(delta > 0) || delta >= 1) throw InvalidArgument("certify_cover: delta must lie in (0, 1)");
  if (!(rho > 0)) throw InvalidArgument("certify_cover: rho must be positive");
  if (T.dim() != n || spacing.size() != n) throw InvalidArgument("certify_cover: dimension mismatch");
  for (const auto& c : centers)
    if (c.size() != n) throw InvalidArgument("certify_cover: center dimension mismatch");
  if (centers.empty()) return false;
  // K inside rho T around the origin has a closed-form check.
  const bool has_origin = std::any_of(centers.begin(), centers.end(), [&](const Vec& c) { return c.norm() <= tol; });
  if (has_origin) {
    if (auto R = exact_inclusion_radius(K, T); R && *R <= rho + tol) return true;
  }
  const Vec w = K.bounding_half_widths();
  Index m(n);
  for (int i = 0; i < n; ++i) m[i] = ceil_ratio(w[i], spacing[i]);
  IndexBox cells(-m, 2 * m);
  if (cells.size() > budget) throw BudgetExceeded(budget_message("certify_cover", cells.size(), budget));
  CoverChecker checker(K, T, centers, rho, delta, tol);
  for (std::size_t k = 0; k < cells.size(); ++k) {
    const Vec lo = node_point(cells.at(k), spacing);
    const Vec hi = lo + spacing;
    if (checker.may_meet(lo, hi) && !checker.covered(lo, hi)) return false;
  }
  return true;
}

bool certify_cover(const ConvexBody& K, const ConvexBody& T, const PointList& centers, double rho, double delta,
                   const CandidateGrid& grid, double tol) {
  return certify_cover(K, T, centers, rho, delta, grid.spacing, tol);
}

CoverSearch search_cover(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted, const Effort& effort,
                         std::size_t stop_at) {
  const int n = K.dim();
  if (T.dim() != n) throw InvalidArgument("search_cover: dimension mismatch");
  if (!(rho > 0)) throw InvalidArgument("search_cover: rho must be positive");
  const double tol = effort.tol.abs * std::max(1.0, rho);
  CoverSearch out;
  const Vec t = T.bounding_half_widths();
  const Vec w = K.bounding_half_widths();
  out.spacing = rho * t;

  if (auto R = exact_inclusion_radius(K, T); R && *R <= rho + tol) {
    out.centers = PointList{Vec::Zero(n)};
    out.lattice_optimal = true;
    return out;
  }

  const double r1 = cell_radius(T, t);
  const auto corners = unit_corners(n);
  InteriorTest interior(K, tol);
  double prev_q = 0;
  for (int level = 2; level <= std::max(2, effort.finest_level); ++level) {
    const double tau = std::ldexp(1.0, -level);
    double q = 1;
    while (r1 / q > tau) q *= 2;
    if (q == prev_q) continue;
    prev_q = q;
    const Vec h = rho * t / q;
    const int qi = static_cast<int>(q);

    Index m(n);
    bool too_big = false;
    for (int i = 0; i < n; ++i) {
      const double r = std::ceil(w[i] / h[i] - 1e-9);
      if (r > 1e7) too_big = true;
      m[i] = std::max(1, static_cast<int>(std::min(r, 1e7)));
    }
    IndexBox cells(-m, 2 * m);
    IndexBox lattice(Index::Constant(n, -qi), Index::Constant(n, 2 * qi + 1));
    if (too_big || cells.size() > effort.grid_budget || lattice.size() > effort.grid_budget) {
      out.budget_hit = true;
      break;
    }

    // Cell ids live in a box padded by 2q so centre + offset stays inside.
    IndexBox padded(-m - Index::Constant(n, 2 * qi), 2 * m + Index::Constant(n, 4 * qi + 1));
    if (padded.size() > 4 * effort.grid_budget) {
      out.budget_hit = true;
      break;
    }
    std::vector<int> cell_id(padded.size(), -1);
    std::uint32_t elements = 0;
    for (std::size_t k = 0; k < cells.size(); ++k) {
      const Index j = cells.at(k);
      const Vec lo = node_point(j, h);
      if (interior.may_meet(lo, lo + h)) cell_id[padded.index(j)] = static_cast<int>(elements++);
    }

    std::vector<char> inside(lattice.size());
    for (std::size_t k = 0; k < lattice.size(); ++k) inside[k] = T.gauge(node_point(lattice.at(k), h)) <= rho + tol;
    std::vector<std::ptrdiff_t> corner_off;
    for (const auto& e : corners) corner_off.push_back(lattice.offset(e));
    // Offsets d (cell minus centre) whose cell lies in the translate.
    std::vector<std::ptrdiff_t> tmpl;
    IndexBox dbox(Index::Constant(n, -qi), Index::Constant(n, 2 * qi));
    for (std::size_t k = 0; k < dbox.size(); ++k) {
      const Index d = dbox.at(k);
      const auto base = static_cast<std::ptrdiff_t>(lattice.index(d));
      const bool all = std::all_of(corner_off.begin(), corner_off.end(),
                                   [&](std::ptrdiff_t o) { return inside[static_cast<std::size_t>(base + o)] != 0; });
      if (all) tmpl.push_back(padded.offset(d));
    }
    if (tmpl.empty()) continue;

    // Centres on every stride-th node: fine cells keep the radius loss small
    // while the candidate x template work stays within the pair budget.
    int stride = 1;
    double centre_nodes = 1.0;
    for (int i = 0; i < n; ++i) centre_nodes *= 2.0 * (m[i] + qi) + 1.0;
    while (centre_nodes / std::pow(stride, n) * static_cast<double>(tmpl.size()) >
               static_cast<double>(effort.pair_budget) &&
           stride < qi / 2)
      stride *= 2;
    Index clo(n), cext(n);
    for (int i = 0; i < n; ++i) {
      const int reach = (m[i] + qi) / stride;
      clo[i] = -reach;
      cext[i] = 2 * reach + 1;
    }
    IndexBox centres(clo, cext);
    if (static_cast<double>(centres.size()) * static_cast<double>(tmpl.size()) >
        static_cast<double>(effort.pair_budget)) {
      out.budget_hit = true;
      break;
    }
    combinatorics::SetCover inst{elements, {}};
    std::vector<Index> owner;
    std::vector<char> hit(elements, 0);
    std::vector<std::uint32_t> set;
    for (std::size_t k = 0; k < centres.size(); ++k) {
      const Index c = centres.at(k) * stride;
      if (!padded.contains(c)) continue;
      if (restricted && K.gauge(node_point(c, h)) > 1.0 + tol) continue;
      const auto base = static_cast<std::ptrdiff_t>(padded.index(c));
      set.clear();
      for (auto d : tmpl) {
        const int id = cell_id[static_cast<std::size_t>(base + d)];
        if (id >= 0) set.push_back(static_cast<std::uint32_t>(id));
      }
      if (set.empty()) continue;
      for (auto e : set) hit[e] = 1;
      inst.sets.push_back(set);
      owner.push_back(c);
    }
    if (std::find(hit.begin(), hit.end(), 0) != hit.end()) continue;

    auto chosen = combinatorics::prune_redundant(inst, combinatorics::greedy_cover(inst));
    bool optimal = false;
    if (chosen.size() > stop_at) {
      auto exact = combinatorics::exact_cover(inst, chosen, effort.cover_exact_elements,
                                              effort.cover_exact_candidates, effort.exact_node_budget);
      chosen = std::move(exact.chosen);
      optimal = exact.optimal;
    } else {
      optimal = true;
    }
    if (!out.centers || chosen.size() < out.centers->size()) {
      PointList pts;
      for (auto s : chosen) pts.push_back(node_point(owner[s], h));
      out.centers = std::move(pts);
      out.spacing = h;
      out.resolution = tau;
      out.lattice_optimal = optimal;
    }
    if (out.centers->size() <= stop_at) break;
  }
  return out;
}


namespace {

// Smallest Euclidean ball with every point of R on its boundary (R affinely
// independent); centre in their affine hull.
void ball_through(const PointList& R, Vec& c, double& r2) {
  const Vec& p0 = R[0];
  const int k = static_cast<int>(R.size()) - 1;
  c = p0;
  r2 = 0.0;
  if (k == 0) return;
  Mat A(k, k);
  Vec b(k);
  for (int i = 0; i < k; ++i) {
    const Vec di = R[i + 1] - p0;
    for (int j = 0; j < k; ++j) A(i, j) = 2.0 * di.dot(R[j + 1] - p0);
    b[i] = di.squaredNorm();
  }
  const Vec lam = A.colPivHouseholderQr().solve(b);
  for (int j = 0; j < k; ++j) c += lam[j] * (R[j + 1] - p0);
  r2 = (c - p0).squaredNorm();
}

// Welzl's move-to-front recursion over the first `count` points.
void welzl(PointList& P, std::size_t count, PointList& R, int dim, Vec& c, double& r2) {
  if (R.empty()) {
    c = P[0];
    r2 = 0.0;
  } else {
    ball_through(R, c, r2);
  }
  if (static_cast<int>(R.size()) == dim + 1) return;
  for (std::size_t i = R.empty() ? 1 : 0; i < count; ++i) {
    if ((P[i] - c).squaredNorm() <= r2 * (1.0 + 1e-12) + 1e-300) continue;
    R.push_back(P[i]);
    welzl(P, i, R, dim, c, r2);
    R.pop_back();
    std::rotate(P.begin(), P.begin() + static_cast<std::ptrdiff_t>(i), P.begin() + static_cast<std::ptrdiff_t>(i) + 1);
  }
}

Vec euclidean_center(PointList P) {
  std::mt19937_64 rng(P.size());
  std::shuffle(P.begin(), P.end(), rng);
  PointList R;
  Vec c;
  double r2 = 0.0;
  welzl(P, P.size(), R, static_cast<int>(P[0].size()), c, r2);
  return c;
}

Vec facet_center(const Mat& G, const PointList& P) {
  // min t  s.t.  h_r - g_r.c <= t  with h_r = max_i g_r.x_i.
  const Eigen::Index m = G.rows(), n = G.cols();
  Vec h = Vec::Constant(m, -std::numeric_limits<double>::infinity());
  for (const auto& x : P) h = h.cwiseMax(G * x);
  lp::Problem prob;
  prob.c = Vec::Zero(2 * n + 1);
  prob.c[2 * n] = 1.0;
  prob.A_ub = Mat::Zero(m, 2 * n + 1);
  prob.A_ub.leftCols(n) = -G;
  prob.A_ub.middleCols(n, n) = G;
  prob.A_ub.col(2 * n).setConstant(-1.0);
  prob.b_ub = -h;
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) throw Error("chebyshev_center: linear program failed");
  return res.x.head(n) - res.x.segment(n, n);
}

// Compass search on the farthest points only; the active set grows when a
// point outside it becomes the maximiser.
Vec pattern_center(const ConvexBody& T, const PointList& P) {
  const int n = static_cast<int>(P[0].size());
  Vec lo = P[0], hi = P[0];
  for (const auto& x : P) lo = lo.cwiseMin(x), hi = hi.cwiseMax(x);
  Vec c = 0.5 * (lo + hi);
  std::vector<Vec> dirs;
  for (int d = 0; d < n; ++d) {
    dirs.push_back(Vec::Unit(n, d));
    dirs.push_back(-Vec::Unit(n, d));
  }
  for (int trial = 0; trial < std::min(1 << n, 6 * n); ++trial) {
    Vec u(n);
    for (int d = 0; d < n; ++d) u[d] = ((trial >> d) & 1) ? 1.0 : -1.0;
    dirs.push_back(u / std::sqrt(static_cast<double>(n)));
  }
  const std::size_t batch = static_cast<std::size_t>(16 * n + 8);
  std::vector<std::size_t> active;
  std::vector<char> in_active(P.size(), 0);
  std::vector<double> g(P.size());
  auto add_farthest = [&](double above) {
    for (std::size_t i = 0; i < P.size(); ++i) g[i] = T.gauge(P[i] - c);
    std::vector<std::size_t> order(P.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    const std::size_t k = std::min(batch, P.size());
    std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k), order.end(),
                      [&](std::size_t x, std::size_t y) { return g[x] > g[y]; });
    bool grew = false;
    for (std::size_t t = 0; t < k && g[order[t]] > above; ++t)
      if (!in_active[order[t]]) in_active[order[t]] = 1, active.push_back(order[t]), grew = true;
    return grew;
  };
  auto f = [&](const Vec& y) {
    double m = 0.0;
    for (std::size_t i : active) m = std::max(m, T.gauge(P[i] - y));
    return m;
  };
  add_farthest(-1.0);
  const double span = std::max(1e-12, (hi - lo).maxCoeff());
  for (int round = 0; round < 64; ++round) {
    double fc = f(c);
    double step = 0.25 * span;
    while (step > 1e-9 * span) {
      bool moved = false;
      for (const auto& d : dirs) {
        const Vec y = c + step * d;
        const double fy = f(y);
        if (fy < fc) c = y, fc = fy, moved = true;
      }
      if (!moved) step *= 0.5;
    }
    if (!add_farthest(fc * (1.0 + 1e-12))) break;
  }
  return c;
}

}  // namespace

Vec chebyshev_center(const ConvexBody& T, const PointList& points) {
  if (points.empty()) throw InvalidArgument("chebyshev_center: no points");
  if (points.size() == 1) return points[0];
  if (const auto* li = T.as_linear_image()) {
    const Mat Minv = li->M.inverse();
    PointList pulled;
    for (const auto& x : points) pulled.push_back(Minv * x);
    return li->M * chebyshev_center(li->inner, pulled);
  }
  if (const auto* e = T.as_ellipsoid()) {
    const Eigen::LLT<Mat> llt(e->Q);
    const Mat U = llt.matrixU();
    PointList y;
    for (const auto& x : points) y.push_back(U * x);
    return U.triangularView<Eigen::Upper>().solve(euclidean_center(std::move(y)));
  }
  if (const auto* b = T.as_lp_ball()) {
    if (b->p == 2.0) {
      PointList y;
      for (const auto& x : points) y.push_back(x.cwiseQuotient(b->r));
      return euclidean_center(std::move(y)).cwiseProduct(b->r);
    }
    if (std::isinf(b->p)) {
      Vec lo = points[0], hi = points[0];
      for (const auto& x : points) lo = lo.cwiseMin(x), hi = hi.cwiseMax(x);
      return 0.5 * (lo + hi);
    }
  }
  if (auto G = T.facets()) return facet_center(*G, points);
  return pattern_center(T, points);
}

PointList boundary_points(const ConvexBody& K, std::size_t count, std::uint64_t seed) {
  const int n = K.dim();
  PointList dirs;
  if (n == 1) {
    dirs = {Vec::Constant(1, 1.0), Vec::Constant(1, -1.0)};
  } else if (n == 2) {
    for (std::size_t t = 0; t < count; ++t) {
      const double a = 2.0 * M_PI * static_cast<double>(t) / static_cast<double>(count);
      Vec u(2);
      u << std::cos(a), std::sin(a);
      dirs.push_back(u);
    }
  } else if (n == 3) {
    const double golden = M_PI * (3.0 - std::sqrt(5.0));
    for (std::size_t t = 0; t < count; ++t) {
      const double z = 1.0 - 2.0 * (static_cast<double>(t) + 0.5) / static_cast<double>(count);
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      Vec u(3);
      u << r * std::cos(golden * t), r * std::sin(golden * t), z;
      dirs.push_back(u);
    }
  } else {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g(0.0, 1.0);
    for (std::size_t t = 0; t < count; ++t) {
      Vec u(n);
      for (int i = 0; i < n; ++i) u[i] = g(rng);
      dirs.push_back(u);
    }
  }
  PointList out;
  for (const auto& u : dirs) {
    const double g = K.gauge(u);
    if (g > 0 && std::isfinite(g)) out.push_back(u / g);
  }
  return out;
}

PointList sample_body(const ConvexBody& K, std::size_t grid_points, std::size_t boundary) {
  const int n = K.dim();
  const Vec w = K.bounding_half_widths();
  // The bounding box holds the grid; K fills part of it, so aim a little high.
  const int per_axis =
      std::max(2, static_cast<int>(std::ceil(std::pow(1.6 * static_cast<double>(grid_points), 1.0 / n))));
  PointList out;
  std::vector<int> idx(n, 0);
  while (true) {
    Vec x(n);
    for (int i = 0; i < n; ++i) x[i] = -w[i] + 2.0 * w[i] * idx[i] / (per_axis - 1);
    if (K.gauge(x) <= 1.0) out.push_back(x);
    int d = 0;
    while (d < n && ++idx[d] == per_axis) idx[d++] = 0;
    if (d == n) break;
  }
  const auto b = boundary_points(K, boundary);
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

}  // namespace polarkit
