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


#include "polarkit/separation.hpp"

#include "polarkit/lp.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

namespace polarkit {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

// A norm on R^n with a linear minimisation-friendly gradient.
struct SmoothNorm {
  double p = 2.0;  // 2 for Euclidean, otherwise a unit l_p ball with 1 < p < inf

  double value(const Vec& v) const {
    if (p == 2.0) return v.norm();
    const double m = v.cwiseAbs().maxCoeff();
    if (m == 0.0) return 0.0;
    return m * std::pow((v.cwiseAbs() / m).array().pow(p).sum(), 1.0 / p);
  }

  // Unit dual vector g with g.v = |v|.
  Vec gradient(const Vec& v) const {
    const double nv = value(v);
    if (p == 2.0) return v / nv;
    Vec g(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      const double a = std::abs(v[i]) / nv;
      g[i] = (v[i] < 0 ? -1.0 : 1.0) * std::pow(a, p - 1.0);
    }
    return g;
  }
};

double line_search(const SmoothNorm& norm, const Vec& v, const Vec& d, double gmax) {
  if (norm.p == 2.0) {
    const double dd = d.squaredNorm();
    if (dd == 0.0) return 0.0;
    return std::clamp(-v.dot(d) / dd, 0.0, gmax);
  }
  // Golden section on a convex function of one variable.
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double a = 0.0, b = gmax;
  double c = b - phi * (b - a), e = a + phi * (b - a);
  double fc = norm.value(v + c * d), fe = norm.value(v + e * d);
  for (int it = 0; it < 90 && b - a > 1e-15 * std::max(1.0, gmax); ++it) {
    if (fc <= fe) {
      b = e;
      e = c;
      fe = fc;
      c = b - phi * (b - a);
      fc = norm.value(v + c * d);
    } else {
      a = c;
      c = e;
      fc = fe;
      e = a + phi * (b - a);
      fe = norm.value(v + e * d);
    }
  }
  return 0.5 * (a + b);
}

// min over the simplex of |sum lambda_i z_i| by away-step Frank-Wolfe.
HullDistance min_norm_in_hull(const SmoothNorm& norm, const PointList& z, double gap_tol) {
  const std::size_t k = z.size();
  const Eigen::Index n = z[0].size();
  std::vector<double> lam(k, 0.0);
  std::size_t start = 0;
  for (std::size_t i = 1; i < k; ++i)
    if (norm.value(z[i]) < norm.value(z[start])) start = i;
  lam[start] = 1.0;
  Vec v = z[start];

  HullDistance out;
  out.lo = 0.0;
  out.witness = Vec::Zero(n);
  out.hi = norm.value(v);
  for (int it = 0; it < 20000; ++it) {
    const double nv = norm.value(v);
    out.hi = std::min(out.hi, nv);
    if (nv <= 1e-300) {
      out.lo = 0.0;
      out.witness = Vec::Zero(n);
      break;
    }
    const Vec g = norm.gradient(v);
    std::size_t s = 0, a = start;
    double smin = kInfD, amax = -kInfD;
    for (std::size_t i = 0; i < k; ++i) {
      const double gi = g.dot(z[i]);
      if (gi < smin) smin = gi, s = i;
      if (lam[i] > 0 && gi > amax) amax = gi, a = i;
    }
    if (smin > out.lo) {
      out.lo = smin;
      out.witness = g;
    }
    if (out.hi - out.lo <= gap_tol) break;
    const double gv = g.dot(v);
    if (gv - smin >= amax - gv) {
      const Vec d = z[s] - v;
      const double gam = line_search(norm, v, d, 1.0);
      if (gam <= 0.0) break;
      for (auto& l : lam) l *= 1.0 - gam;
      lam[s] += gam;
      v += gam * d;
    } else {
      const double gmax = lam[a] / (1.0 - lam[a]);
      const Vec d = v - z[a];
      const double gam = line_search(norm, v, d, gmax);
      if (gam <= 0.0) break;
      for (auto& l : lam) l *= 1.0 + gam;
      lam[a] -= gam;
      if (gam >= gmax * (1 - 1e-12)) lam[a] = 0.0;
      v += gam * d;
    }
  }
  return out;
}

HullDistance polyhedral_distance(const Mat& G, const Vec& x, const PointList& hull) {
  // max s  s.t.  s <= mu^T G (x - p_i) for all i,  sum mu <= 1,  mu >= 0.
  const Eigen::Index m = G.rows();
  const Eigen::Index k = static_cast<Eigen::Index>(hull.size());
  lp::Problem prob;
  prob.c = Vec::Zero(m + 2);
  prob.c[m] = -1.0;
  prob.c[m + 1] = 1.0;
  prob.A_ub = Mat::Zero(k + 1, m + 2);
  prob.b_ub = Vec::Zero(k + 1);
  for (Eigen::Index i = 0; i < k; ++i) {
    prob.A_ub.row(i).head(m) = -(G * (x - hull[i])).transpose();
    prob.A_ub(i, m) = 1.0;
    prob.A_ub(i, m + 1) = -1.0;
  }
  prob.A_ub.row(k).head(m).setOnes();
  prob.b_ub[k] = 1.0;
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) throw Error("distance_to_hull: linear program failed");
  HullDistance out;
  out.witness = G.transpose() * res.x.head(m);
  out.hi = std::max(0.0, res.x[m] - res.x[m + 1]);
  return out;
}

// Fills lo from the witness after normalising it into T°.
void finish_witness(const ConvexBody& T, const Vec& x, const PointList& hull, HullDistance& d) {
  const double s = T.support(d.witness);
  if (s > 1.0) d.witness /= s;
  double best = -kInfD;
  for (const auto& p : hull) best = std::max(best, d.witness.dot(p));
  d.lo = std::max(0.0, d.witness.dot(x) - best);
  if (d.lo > d.hi) d.hi = d.lo;
}

HullDistance raw_distance(const ConvexBody& T, const Vec& x, const PointList& hull, double gap_tol) {
  if (auto G = T.facets()) return polyhedral_distance(*G, x, hull);
  if (const auto* li = T.as_linear_image()) {
    const Mat Minv = li->M.inverse();
    PointList pulled;
    pulled.reserve(hull.size());
    for (const auto& p : hull) pulled.push_back(Minv * p);
    auto d = raw_distance(li->inner, Minv * x, pulled, gap_tol);
    d.witness = Minv.transpose() * d.witness;
    return d;
  }
  PointList z;
  z.reserve(hull.size());
  if (const auto* e = T.as_ellipsoid()) {
    // gauge(v) = |L^T v| with Q = L L^T.
    const Eigen::LLT<Mat> llt(e->Q);
    const Mat Lt = llt.matrixU();
    for (const auto& p : hull) z.push_back(Lt * (x - p));
    auto d = min_norm_in_hull(SmoothNorm{2.0}, z, gap_tol);
    d.witness = Lt.transpose() * d.witness;
    return d;
  }
  if (const auto* b = T.as_lp_ball()) {
    if (b->p > 1.0 && std::isfinite(b->p)) {
      for (const auto& p : hull) z.push_back((x - p).cwiseQuotient(b->r));
      auto d = min_norm_in_hull(SmoothNorm{b->p}, z, gap_tol);
      d.witness = d.witness.cwiseQuotient(b->r);
      return d;
    }
  }
  throw Unsupported(std::string("distance_to_hull: no method for ") + to_string(T.kind()) + " in dimension " +
                    std::to_string(T.dim()));
}

void check_hull_args(const ConvexBody& T, const Vec& x, const PointList& hull) {
  if (hull.empty()) throw InvalidArgument("distance_to_hull: empty hull");
  if (x.size() != T.dim()) throw InvalidArgument("distance_to_hull: dimension mismatch");
  for (const auto& p : hull)
    if (p.size() != T.dim()) throw InvalidArgument("distance_to_hull: dimension mismatch");
}

}  // namespace

HullDistance distance_to_hull(const ConvexBody& T, const Vec& x, const PointList& hull, double gap_tol) {
  check_hull_args(T, x, hull);
  auto d = raw_distance(T, x, hull, gap_tol);
  finish_witness(T, x, hull, d);
  return d;
}

double distance_to_hull_primal(const ConvexBody& T, const Vec& x, const PointList& hull) {
  check_hull_args(T, x, hull);
  const auto G = T.facets();
  if (!G) return raw_distance(T, x, hull, 1e-12).hi;
  // min t  s.t.  g_r.(x - P^T lambda) <= t,  sum lambda = 1,  lambda >= 0.
  const Eigen::Index m = G->rows();
  const Eigen::Index k = static_cast<Eigen::Index>(hull.size());
  lp::Problem prob;
  prob.c = Vec::Zero(k + 1);
  prob.c[k] = 1.0;
  prob.A_ub = Mat::Zero(m, k + 1);
  prob.b_ub = -(*G) * x;
  for (Eigen::Index i = 0; i < k; ++i) prob.A_ub.col(i) = -(*G) * hull[i];
  prob.A_ub.col(k).setConstant(-1.0);
  prob.A_eq = Mat::Zero(1, k + 1);
  prob.A_eq.row(0).head(k).setOnes();
  prob.b_eq = Vec::Ones(1);
  // t can be negative; substitute t + bound with bound >= |t| at any feasible point.
  const double shift = (*G * x).cwiseAbs().maxCoeff() + 1.0;
  double bound = shift;
  for (const auto& p : hull) bound = std::max(bound, (*G * p).cwiseAbs().maxCoeff() + shift);
  prob.b_ub.array() -= bound;
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) throw Error("distance_to_hull_primal: linear program failed");
  return std::max(0.0, res.x[k] - bound);
}

PointList separation_candidates(const ConvexBody& K, const ConvexBody& T, std::size_t max_points) {
  PointList cands = boundary_samples(K, T);
  const int n = K.dim();
  const Vec w = K.bounding_half_widths();
  const double r1 = cell_radius(T, w);
  const double per_axis = std::pow(4.0 * static_cast<double>(max_points), 1.0 / n);
  double target = 2.0 * r1 / std::max(1.0, per_axis - 1.0);
  for (int attempt = 0; attempt < 30; ++attempt, target *= 1.3) {
    CandidateGrid grid;
    try {
      grid = grid_candidates(K, T, target, 2'000'000);
    } catch (const BudgetExceeded&) {
      continue;
    }
    PointList inside;
    for (const auto& p : grid.points)
      if (K.gauge(p) <= 1.0) inside.push_back(p);
    if (inside.size() > max_points) continue;
    cands.insert(cands.end(), inside.begin(), inside.end());
    break;
  }
  return cands;
}

namespace {

// Farthest: append the candidate farthest from the hull. Nearest: append the
// closest candidate that still clears the scale, which packs chains tightly.
enum class Rule { Farthest, Nearest };

SeparationCertificate greedy_run(const ConvexBody& T, double scale, const PointList& cands, std::size_t start,
                                 Rule rule) {
  SeparationCertificate cert;
  cert.scale = scale;
  cert.points.push_back(cands[start]);
  cert.witnesses.emplace_back();
  const double accept = scale * (1.0 - 1e-12);
  // Distances to a growing hull only shrink, so earlier upper values stay valid.
  std::vector<double> ub(cands.size(), kInfD);
  std::vector<char> used(cands.size(), 0);
  used[start] = 1;
  std::vector<std::size_t> order(cands.size());
  while (true) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ub[a] > ub[b]; });
    double best_lo = -kInfD;
    std::size_t best = cands.size();
    Vec best_w;
    double near_lo = kInfD;
    for (std::size_t i : order) {
      if (used[i]) continue;
      if (ub[i] < accept) break;
      if (rule == Rule::Farthest && ub[i] <= best_lo) break;
      const auto d = distance_to_hull(T, cands[i], cert.points);
      ub[i] = d.hi;
      if (rule == Rule::Nearest) {
        if (d.lo >= accept && (d.lo < near_lo || (d.lo == near_lo && i < best))) {
          near_lo = d.lo;
          best_lo = d.lo;
          best = i;
          best_w = d.witness;
        }
        continue;
      }
      if (d.lo > best_lo || (d.lo == best_lo && i < best)) {
        best_lo = d.lo;
        best = i;
        best_w = d.witness;
      }
    }
    if (best == cands.size() || best_lo < accept) break;
    used[best] = 1;
    cert.points.push_back(cands[best]);
    cert.witnesses.push_back(best_w);
  }
  return cert;
}

bool lex_less(const PointList& a, const PointList& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    for (Eigen::Index j = 0; j < a[i].size(); ++j) {
      if (a[i][j] != b[i][j]) return a[i][j] < b[i][j];
    }
  }
  return a.size() < b.size();
}

}  // namespace

SeparationCertificate separation_greedy_lower(const ConvexBody& K, const ConvexBody& T, double scale,
                                              const PointList& candidates, int restarts, std::uint64_t seed) {
  if (K.dim() != T.dim()) throw InvalidArgument("separation: dimension mismatch");
  if (!(scale > 0)) throw InvalidArgument("separation: scale must be positive");
  if (restarts < 1) throw InvalidArgument("separation: restarts must be at least 1");
  PointList cands;
  for (const auto& c : candidates)
    if (c.size() == K.dim() && K.gauge(c) <= 1.0) cands.push_back(c);
  if (cands.empty()) throw InvalidArgument("separation: no candidate lies in K");

  std::size_t first = 0;
  for (std::size_t i = 1; i < cands.size(); ++i)
    if (K.gauge(cands[i]) < K.gauge(cands[first])) first = i;

  SeparationCertificate best;
  for (int r = 0; r < restarts; ++r) {
    std::size_t start = first;
    if (r > 1) {
      std::mt19937_64 rng(seed ^ (0x9E3779B97F4A7C15ULL * static_cast<std::uint64_t>(r)));
      start = std::uniform_int_distribution<std::size_t>(0, cands.size() - 1)(rng);
    }
    auto cert = greedy_run(T, scale, cands, start, r % 2 == 0 ? Rule::Farthest : Rule::Nearest);
    if (r == 0 || cert.points.size() > best.points.size() ||
        (cert.points.size() == best.points.size() && lex_less(cert.points, best.points)))
      best = std::move(cert);
  }
  best.seed = seed;
  return best;
}

SeparationCertificate separation_greedy_lower(const ConvexBody& K, const ConvexBody& T, const Effort& effort,
                                              double scale) {
  return separation_greedy_lower(K, T, scale, separation_candidates(K, T), effort.restarts, effort.seed);
}

std::optional<std::string> refute_separation(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert,
                                             const Tolerances& tol) {
  auto fail = [](std::string msg) { return std::optional<std::string>(std::move(msg)); };
  if (K.dim() != T.dim()) return fail("K and T have different dimensions");
  if (!(cert.scale > 0)) return fail("scale must be positive");
  if (cert.points.empty()) return fail("no points");
  if (cert.witnesses.size() != cert.points.size()) return fail("one witness per point is required");
  const double need = cert.scale * (1.0 - tol.eta);
  for (std::size_t j = 0; j < cert.points.size(); ++j) {
    const Vec& x = cert.points[j];
    const std::string at = "point " + std::to_string(j);
    if (x.size() != K.dim() || !x.allFinite()) return fail(at + " is malformed");
    if (!(K.gauge(x) <= 1.0 + tol.abs)) return fail(at + " lies outside K");
    if (j == 0) continue;
    const Vec& w = cert.witnesses[j];
    if (w.size() != K.dim() || !w.allFinite()) return fail(at + ": witness is malformed");
    if (!(T.support(w) <= 1.0 + tol.abs)) return fail(at + ": witness is not in the polar of T");
    double top = -kInfD;
    for (std::size_t i = 0; i < j; ++i) top = std::max(top, w.dot(cert.points[i]));
    if (!(w.dot(x) - top >= need)) return fail(at + ": witness gap below scale");
    const PointList prefix(cert.points.begin(), cert.points.begin() + static_cast<std::ptrdiff_t>(j));
    if (!(distance_to_hull_primal(T, x, prefix) >= need)) return fail(at + ": primal distance to the earlier hull below scale");
  }
  return std::nullopt;
}

bool verify_separation(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert,
                       const Tolerances& tol) {
  return !refute_separation(K, T, cert, tol);
}

CountBracket separation_upper(const ConvexBody& K, const ConvexBody& T, const Effort& effort) {
  return covering_bracket_at(K, T, (1.0 + effort.tol.eta) / 2.0, false, effort);
}

SeparationDualityRow separation_duality_check(const ConvexBody& K, const ConvexBody& T, const Effort& effort) {
  SeparationDualityRow row;
  row.certificate = separation_greedy_lower(K, T, effort, 1.0 + effort.tol.eta);
  row.lower = row.certificate.points.size();
  const auto dual = covering_bracket_at(T.polar(), K.polar(), (1.0 + effort.tol.eta) / 4.0, false, effort);
  row.dual_cover = dual.hi;
  row.rhs = static_cast<double>(dual.hi) * static_cast<double>(dual.hi);
  row.holds = dual.hi != kUnknownCount && static_cast<double>(row.lower) <= row.rhs;
  return row;
}

}  // namespace polarkit
