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


#include "polarkit/duality_lab.hpp"

#include <json.hpp>

#include <Eigen/QR>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <thread>

namespace polarkit {

namespace {

constexpr double kInfD = std::numeric_limits<double>::infinity();

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) h = (h ^ c) * 1099511628211ULL;
  return h;
}

Mat random_orthogonal(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  Mat G(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) G(i, j) = g(rng);
  Eigen::HouseholderQR<Mat> qr(G);
  return qr.householderQ();
}

Mat random_spd(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  const Mat O = random_orthogonal(rng, n);
  Vec d(n);
  for (int i = 0; i < n; ++i) d[i] = U(rng);
  const Mat Q = O * d.asDiagonal() * O.transpose();
  return 0.5 * (Q + Q.transpose());
}

Vec uniform_vec(std::mt19937_64& rng, int n, double lo, double hi) {
  std::uniform_real_distribution<double> U(lo, hi);
  Vec v(n);
  for (int i = 0; i < n; ++i) v[i] = U(rng);
  return v;
}

std::vector<BodyPair> base_pairs(const std::string& family, const ExperimentSpec& spec) {
  std::mt19937_64 rng(spec.seed ^ fnv1a(family));
  const int n = spec.n;
  std::vector<BodyPair> out;
  auto add = [&](int i, ConvexBody K, ConvexBody T) {
    out.push_back({family + "-" + std::to_string(i), family, std::move(K), std::move(T)});
  };
  if (family == "ellipsoid") {
    for (int i = 0; i < spec.count; ++i) {
      Mat QK = random_spd(rng, n, 0.4, 1.2);
      Mat QT = random_spd(rng, n, 2.0, 6.0);
      add(i, ConvexBody::ellipsoid(QK), ConvexBody::ellipsoid(QT));
    }
  } else if (family == "l1-linf") {
    add(0, ConvexBody::unit_lp_ball(n, 1.0), ConvexBody::unit_lp_ball(n, ConvexBody::kInf));
  } else if (family == "box-cross") {
    for (int i = 0; i < spec.count; ++i) {
      Vec rk = uniform_vec(rng, n, 1.0, 2.0);
      Vec rt = uniform_vec(rng, n, 0.5, 1.0);
      add(i, ConvexBody::box(rk), ConvexBody::lp_ball(1.0, rt));
    }
  } else if (family == "vpoly-ball") {
    std::normal_distribution<double> g(0.0, 1.0);
    for (int i = 0; i < spec.count; ++i) {
      Mat P(n + 2, n);
      for (int r = 0; r < n + 2; ++r)
        for (int c = 0; c < n; ++c) P(r, c) = g(rng);
      add(i, ConvexBody::symmetric_hull(P), ConvexBody::euclidean_ball(n, 0.5));
    }
  } else {
    std::string ids;
    for (const auto& f : family_ids()) ids += (ids.empty() ? "" : ", ") + f;
    throw InvalidArgument("unknown family '" + family + "'; valid ids: " + ids + ", all");
  }
  return out;
}

std::string fmt(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os << std::setprecision(10) << v;
  return os.str();
}

std::string fmt_count(std::size_t c) { return c == kUnknownCount ? "inf" : std::to_string(c); }

std::string join(const std::vector<std::string>& v, char sep) {
  std::string s;
  for (const auto& x : v) s += (s.empty() ? "" : std::string(1, sep)) + x;
  return s;
}

// Runs f(i) for i < count on `threads` workers.
template <class F>
void parallel_for(std::size_t count, int threads, F&& f) {
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(std::max<std::size_t>(count, 1))));
  std::vector<std::thread> pool;
  for (int i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
}

Bracket<double> ratio_of(const Bracket<double>& num, const Bracket<double>& den) {
  Bracket<double> r;
  r.lo = den.hi == kInfD ? 0.0 : (den.hi > 0 ? num.lo / den.hi : (num.lo > 0 ? kInfD : 0.0));
  r.hi = den.lo > 0 ? num.hi / den.lo : kInfD;
  return r;
}

}  // namespace

const std::vector<std::string>& family_ids() {
  static const std::vector<std::string> ids{"ellipsoid", "l1-linf", "box-cross", "vpoly-ball"};
  return ids;
}

std::vector<BodyPair> generate_family(const ExperimentSpec& spec) {
  if (spec.n < 1 || spec.n > 3) throw InvalidArgument("generate_family: n must be in 1..3");
  if (spec.count < 1) throw InvalidArgument("generate_family: count must be positive");
  std::vector<std::string> families;
  if (spec.family == "all")
    families = family_ids();
  else
    families = {spec.family};
  std::vector<BodyPair> out;
  for (const auto& f : families) {
    for (auto& p : base_pairs(f, spec)) {
      BodyPair polar{p.id + "/polar", p.family, p.T.polar(), p.K.polar()};
      out.push_back(std::move(p));
      out.push_back(std::move(polar));
    }
  }
  return out;
}

Bracket<double> log2_bracket(const CountBracket& b) {
  Bracket<double> out;
  out.lo = std::log2(static_cast<double>(std::max<std::size_t>(1, b.lo)));
  out.hi = b.hi == kUnknownCount ? kInfD : std::log2(static_cast<double>(std::max<std::size_t>(1, b.hi)));
  out.flags = b.flags;
  return out;
}

bool DualityRow::has_flag(const std::string& f) const { return std::find(flags.begin(), flags.end(), f) != flags.end(); }

std::vector<DualityRow> duality_scan(const std::vector<BodyPair>& pairs, const std::vector<double>& a_grid,
                                     const Effort& effort) {
  if (a_grid.empty()) throw InvalidArgument("duality_scan: empty a_grid");
  for (std::size_t i = 0; i < a_grid.size(); ++i) {
    if (!(a_grid[i] > 0) || !std::isfinite(a_grid[i])) throw InvalidArgument("duality_scan: a_grid must be positive");
    if (i > 0 && !(a_grid[i] > a_grid[i - 1])) throw InvalidArgument("duality_scan: a_grid must be ascending");
  }
  const std::size_t A = a_grid.size();
  const std::size_t per_pair = A + 1;
  struct Cell {
    CountBracket bracket;
    std::string error;
  };
  std::vector<Cell> cells(pairs.size() * per_pair);
  // Pairs and grid cells are independent; each worker runs single-threaded.
  Effort inner = effort;
  inner.threads = 1;
  parallel_for(cells.size(), effort.threads, [&](std::size_t idx) {
    const auto& pair = pairs[idx / per_pair];
    const std::size_t slot = idx % per_pair;
    try {
      if (slot == 0)
        cells[idx].bracket = covering_bracket(pair.K, pair.T, inner);
      else
        cells[idx].bracket = covering_bracket_at(pair.T.polar(), pair.K.polar(), 1.0 / a_grid[slot - 1], false, inner);
    } catch (const std::exception& e) {
      cells[idx].error = e.what();
      cells[idx].bracket.lo = 1;
      cells[idx].bracket.hi = kUnknownCount;
    }
  });

  std::vector<DualityRow> rows;
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    const auto& kt = cells[p * per_pair];
    for (std::size_t a = 0; a < A; ++a) {
      const auto& du = cells[p * per_pair + 1 + a];
      DualityRow row;
      row.pair_id = pairs[p].id;
      row.family = pairs[p].family;
      row.n = pairs[p].K.dim();
      row.a = a_grid[a];
      row.n_kt = kt.bracket;
      row.n_dual = du.bracket;
      row.log_kt = log2_bracket(row.n_kt);
      row.log_dual = log2_bracket(row.n_dual);
      row.ratio = ratio_of(row.log_kt, row.log_dual);
      if (!kt.error.empty()) row.flags.push_back("error:kt:" + kt.error);
      if (!du.error.empty()) row.flags.push_back("error:dual:" + du.error);
      for (const auto& f : row.n_kt.flags) row.flags.push_back("kt:" + f);
      for (const auto& f : row.n_dual.flags) row.flags.push_back("dual:" + f);
      if (row.log_kt.hi == 0.0) row.flags.push_back("degenerate");
      if (row.log_dual.lo == 0.0) row.flags.push_back("dual_degenerate");
      rows.push_back(std::move(row));
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const DualityRow& x, const DualityRow& y) {
    return x.pair_id != y.pair_id ? x.pair_id < y.pair_id : x.a < y.a;
  });
  return rows;
}

bool verify_duality_row(const BodyPair& pair, const DualityRow& row, const Tolerances& tol) {
  if (!verify_count_bracket(pair.K, pair.T, row.n_kt, tol)) return false;
  const auto Tp = pair.T.polar(), Kp = pair.K.polar();
  if (row.n_dual.hi_certificate && std::abs(row.n_dual.hi_certificate->rho - 1.0 / row.a) > 1e-12) return false;
  if (!verify_count_bracket(Tp, Kp, row.n_dual, tol)) return false;
  const auto lk = log2_bracket(row.n_kt), ld = log2_bracket(row.n_dual);
  if (lk.lo != row.log_kt.lo || lk.hi != row.log_kt.hi || ld.lo != row.log_dual.lo || ld.hi != row.log_dual.hi)
    return false;
  const auto r = ratio_of(lk, ld);
  return row.ratio.lo <= r.lo && r.hi <= row.ratio.hi;
}

std::vector<FitSummary> fit_constants(const std::vector<DualityRow>& rows) {
  std::vector<std::string> groups;
  for (const auto& f : family_ids())
    for (const auto& r : rows)
      if (r.family == f) {
        groups.push_back(f);
        break;
      }
  for (const auto& r : rows)
    if (std::find(groups.begin(), groups.end(), r.family) == groups.end()) groups.push_back(r.family);
  groups.push_back("all");

  auto usable = [](const DualityRow& r) {
    if (r.has_flag("degenerate")) return false;
    for (const auto& f : r.flags)
      if (f.rfind("error:", 0) == 0) return false;
    return true;
  };
  std::vector<FitSummary> out;
  for (const auto& g : groups) {
    FitSummary s;
    s.family = g;
    std::map<double, FitPoint> curve;
    int n = 0;
    for (const auto& r : rows) {
      if ((g != "all" && r.family != g) || !usable(r)) continue;
      ++s.rows_used;
      n = std::max(n, r.n);
      auto width = [](const Bracket<double>& b) { return std::isfinite(b.hi) ? b.hi - b.lo : 0.0; };
      const double slack = 2.0 * (width(r.log_kt) + width(r.log_dual));
      const double excess = r.log_kt.hi - slack;
      double need;
      if (!std::isfinite(r.log_kt.hi))
        need = kInfD;
      else if (excess <= 0)
        need = 0.0;
      else
        need = r.log_dual.lo > 0 ? excess / r.log_dual.lo : kInfD;
      auto& pt = curve[r.a];
      pt.a = r.a;
      if (pt.binding_row.empty() || need > pt.b) {
        pt.b = need;
        pt.binding_row = r.pair_id;
      }
    }
    if (s.rows_used == 0) {
      if (g == "all") throw InvalidArgument("fit_constants: every row is degenerate or failed");
      continue;
    }
    s.a = kInfD;
    s.b = kInfD;
    double best = kInfD;
    for (const auto& [a, pt] : curve) {
      s.curve.push_back(pt);
      const double score = std::max(a, pt.b);
      if (score < best) {
        best = score;
        s.a = a;
        s.b = pt.b;
        s.binding_row = pt.binding_row;
      }
    }
    if (!std::isfinite(best)) {
      // Report the loosest row at the largest a so the failure is named.
      s.a = curve.rbegin()->first;
      s.binding_row = curve.rbegin()->second.binding_row;
    }
    s.corollary_factor = std::log(1.0 + n) * std::log(std::log(2.0 + n));
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<GammaDualityRow> gamma_duality_report(const std::vector<BodyPair>& pairs, double p, const Effort& effort,
                                                  int k_max, int J) {
  if (!(p > 0)) throw InvalidArgument("gamma_duality_report: p must be positive");
  std::vector<GammaDualityRow> rows(pairs.size());
  Effort inner = effort;
  inner.threads = 1;
  parallel_for(pairs.size(), effort.threads, [&](std::size_t i) {
    const auto& pair = pairs[i];
    auto& row = rows[i];
    row.pair_id = pair.id;
    row.n = pair.K.dim();
    row.p = p;
    const double n = row.n;
    row.theorem_factor =
        dudley_constant(p) * std::pow(std::log(1.0 + n), 2.0 + 1.0 / p) * std::pow(std::log(std::log(2.0 + n)), 1.0 / p);
    try {
      row.chaining_hi = chaining_upper(pair.K, pair.T, p, J, inner).value;
      const auto seq = entropy_sequence(pair.T.polar(), pair.K.polar(), std::max(k_max, row.n), inner, pair.id + "/dual");
      row.sudakov_lo = sudakov_lower(p, EntropyProfile::from_sequence(seq));
    } catch (const std::exception& e) {
      row.flags.push_back(std::string("error:") + e.what());
    }
    if (row.sudakov_lo > 0)
      row.ratio = row.chaining_hi / row.sudakov_lo;
    else {
      row.ratio = kInfD;
      row.flags.push_back("degenerate");
    }
  });
  return rows;
}

std::string duality_csv(const std::vector<DualityRow>& rows) {
  std::ostringstream os;
  os << "pair_id,family,n,a,n_kt_lo,n_kt_hi,n_dual_lo,n_dual_hi,log_kt_lo,log_kt_hi,log_dual_lo,log_dual_hi,b_lo,b_hi,"
        "flags\n";
  for (const auto& r : rows)
    os << r.pair_id << ',' << r.family << ',' << r.n << ',' << fmt(r.a) << ',' << fmt_count(r.n_kt.lo) << ','
       << fmt_count(r.n_kt.hi) << ',' << fmt_count(r.n_dual.lo) << ',' << fmt_count(r.n_dual.hi) << ','
       << fmt(r.log_kt.lo) << ',' << fmt(r.log_kt.hi) << ',' << fmt(r.log_dual.lo) << ',' << fmt(r.log_dual.hi) << ','
       << fmt(r.ratio.lo) << ',' << fmt(r.ratio.hi) << ',' << join(r.flags, ';') << '\n';
  return os.str();
}

namespace {

nlohmann::json num(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }
nlohmann::json cnt(std::size_t c) { return c == kUnknownCount ? nlohmann::json(nullptr) : nlohmann::json(c); }

}  // namespace

std::string duality_json(const std::vector<DualityRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"pair_id", r.pair_id},
                   {"family", r.family},
                   {"n", r.n},
                   {"a", r.a},
                   {"n_kt", {cnt(r.n_kt.lo), cnt(r.n_kt.hi)}},
                   {"n_dual", {cnt(r.n_dual.lo), cnt(r.n_dual.hi)}},
                   {"log_kt", {num(r.log_kt.lo), num(r.log_kt.hi)}},
                   {"log_dual", {num(r.log_dual.lo), num(r.log_dual.hi)}},
                   {"b", {num(r.ratio.lo), num(r.ratio.hi)}},
                   {"flags", r.flags}});
  return arr.dump(2);
}

std::string fit_json(const std::vector<FitSummary>& fits) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& s : fits) {
    nlohmann::json curve = nlohmann::json::array();
    for (const auto& p : s.curve) curve.push_back({{"a", p.a}, {"b", num(p.b)}, {"binding_row", p.binding_row}});
    arr.push_back({{"family", s.family},
                   {"a", num(s.a)},
                   {"b", num(s.b)},
                   {"binding_row", s.binding_row},
                   {"rows_used", s.rows_used},
                   {"corollary_factor", s.corollary_factor},
                   {"curve", curve}});
  }
  return arr.dump(2);
}

std::string gamma_duality_csv(const std::vector<GammaDualityRow>& rows) {
  std::ostringstream os;
  os << "pair_id,n,p,chaining_hi,sudakov_lo_dual,ratio,theorem_factor,flags\n";
  for (const auto& r : rows)
    os << r.pair_id << ',' << r.n << ',' << fmt(r.p) << ',' << fmt(r.chaining_hi) << ',' << fmt(r.sudakov_lo) << ','
       << fmt(r.ratio) << ',' << fmt(r.theorem_factor) << ',' << join(r.flags, ';') << '\n';
  return os.str();
}

std::string duality_svg(const std::vector<DualityRow>& rows) {
  static const char* palette[] = {"#1b9e77", "#d95f02", "#7570b3", "#e7298a", "#66a61e", "#e6ab02", "#a6761d"};
  std::vector<double> as;
  double xmax = 1.0, ymax = 1.0;
  auto top = [](const Bracket<double>& b) { return std::isfinite(b.hi) ? b.hi : b.lo; };
  for (const auto& r : rows) {
    if (std::find(as.begin(), as.end(), r.a) == as.end()) as.push_back(r.a);
    xmax = std::max(xmax, top(r.log_kt));
    ymax = std::max(ymax, top(r.log_dual));
  }
  std::sort(as.begin(), as.end());
  const double W = 640, H = 480, L = 60, B = 50, R = 140, Tm = 20;
  auto X = [&](double v) { return L + (W - L - R) * v / xmax; };
  auto Y = [&](double v) { return H - B - (H - B - Tm) * v / ymax; };
  std::ostringstream os;
  os << std::setprecision(6);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << W - R << "\" y2=\"" << H - B
     << "\" stroke=\"black\"/>\n";
  os << "<line x1=\"" << L << "\" y1=\"" << H - B << "\" x2=\"" << L << "\" y2=\"" << Tm << "\" stroke=\"black\"/>\n";
  os << "<text x=\"" << (W - R + L) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\">log2 N(K,T)</text>\n";
  os << "<text x=\"16\" y=\"" << (H - B + Tm) / 2 << "\" transform=\"rotate(-90 16 " << (H - B + Tm) / 2
     << ")\" text-anchor=\"middle\">log2 N(T°, K°/a)</text>\n";
  for (int t = 0; t <= 4; ++t) {
    os << "<text x=\"" << X(xmax * t / 4) << "\" y=\"" << H - B + 16 << "\" font-size=\"10\" text-anchor=\"middle\">"
       << xmax * t / 4 << "</text>\n";
    os << "<text x=\"" << L - 6 << "\" y=\"" << Y(ymax * t / 4) + 3 << "\" font-size=\"10\" text-anchor=\"end\">"
       << ymax * t / 4 << "</text>\n";
  }
  for (const auto& r : rows) {
    const std::size_t ci = std::find(as.begin(), as.end(), r.a) - as.begin();
    const char* col = palette[ci % 7];
    const double x0 = r.log_kt.lo, x1 = top(r.log_kt), y0 = r.log_dual.lo, y1 = top(r.log_dual);
    const double cx = 0.5 * (x0 + x1), cy = 0.5 * (y0 + y1);
    os << "<line x1=\"" << X(x0) << "\" y1=\"" << Y(cy) << "\" x2=\"" << X(x1) << "\" y2=\"" << Y(cy)
       << "\" stroke=\"" << col << "\"/>\n";
    os << "<line x1=\"" << X(cx) << "\" y1=\"" << Y(y0) << "\" x2=\"" << X(cx) << "\" y2=\"" << Y(y1)
       << "\" stroke=\"" << col << "\"/>\n";
    os << "<circle cx=\"" << X(cx) << "\" cy=\"" << Y(cy) << "\" r=\"3\" fill=\"" << col << "\"><title>" << r.pair_id
       << " a=" << r.a << "</title></circle>\n";
  }
  for (std::size_t i = 0; i < as.size(); ++i) {
    const double y = Tm + 10 + 18 * i;
    os << "<circle cx=\"" << W - R + 20 << "\" cy=\"" << y << "\" r=\"4\" fill=\"" << palette[i % 7] << "\"/>\n";
    os << "<text x=\"" << W - R + 30 << "\" y=\"" << y + 4 << "\" font-size=\"12\">a = " << as[i] << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace polarkit
