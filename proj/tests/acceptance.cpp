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


// Acceptance checks. `acceptance N` runs check N and prints one PASS/FAIL
// line on stdout; supporting numbers go to stderr. Without an argument every
// check runs in turn. The exit status is 0 only when every selected check passes.

#include "polarkit/certificates.hpp"
#include "polarkit/covering.hpp"
#include "polarkit/duality_lab.hpp"
#include "polarkit/gamma.hpp"
#include "polarkit/nets.hpp"
#include "polarkit/separation.hpp"

#include "commands.hpp"
#include "tamper.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace polarkit;

namespace {

struct Outcome {
  bool pass = false;
  std::string summary;
};

ConvexBody interval(double a) { return ConvexBody::box(Vec::Constant(1, a)); }

std::string fmt(double v, int precision = 4) {
  std::ostringstream s;
  s.precision(precision);
  s << v;
  return s.str();
}

std::string count(std::size_t v) { return v == kUnknownCount ? "inf" : std::to_string(v); }

std::string bracket_text(const CountBracket& b) { return "[" + count(b.lo) + "," + count(b.hi) + "]"; }

// 1. Analytic covering oracle.
Outcome analytic_covers() {
  const Effort effort;
  int bad = 0, total = 0;
  for (double a : {1.0, 1.5, 2.0, 3.0, 5.0, 8.0}) {
    const auto b = covering_bracket(interval(a), interval(1.0), effort);
    const auto want = static_cast<std::size_t>(std::ceil(a));
    ++total;
    if (b.lo != want || b.hi != want) {
      ++bad;
      std::cerr << "  [-" << a << "," << a << "]: got " << bracket_text(b) << ", want " << want << "\n";
    }
  }
  for (auto [a, c] : {std::pair{1.5, 2.0}, {3.0, 1.0}, {2.0, 2.0}, {5.0, 1.5}}) {
    Vec r(2);
    r << a, c;
    const auto b = covering_bracket(ConvexBody::box(r), ConvexBody::cube(2, 1.0), effort);
    const auto want = static_cast<std::size_t>(std::ceil(a) * std::ceil(c));
    ++total;
    if (b.lo != want || b.hi != want) {
      ++bad;
      std::cerr << "  box(" << a << "," << c << "): got " << bracket_text(b) << ", want " << want << "\n";
    }
  }
  return {bad == 0, std::to_string(total - bad) + "/" + std::to_string(total) + " exact brackets"};
}

// 2. Ellipsoid duality N(K,T) = N(T°,K°), bracket width at most 2.
Outcome ellipsoid_equality() {
  ExperimentSpec spec;
  spec.family = "ellipsoid";
  spec.count = 5;
  const auto pairs = generate_family(spec);
  const Effort effort;
  int meet = 0, narrow = 0;
  std::string loose;
  for (std::size_t i = 0; i < pairs.size(); i += 2) {
    const auto& p = pairs[i];
    const auto a = covering_bracket(p.K, p.T, effort);
    const auto b = covering_bracket(p.T.polar(), p.K.polar(), effort);
    const bool intersect = a.lo <= b.hi && b.lo <= a.hi;
    const bool ok = a.hi - a.lo <= 2 && b.hi - b.lo <= 2;
    meet += intersect;
    narrow += ok;
    std::cerr << "  " << p.id << ": N(K,T) " << bracket_text(a) << "  N(T°,K°) " << bracket_text(b)
              << (intersect ? "" : "  (disjoint)") << "\n";
    if (!ok) {
      if (!loose.empty()) loose += ", ";
      loose += p.id + (a.hi - a.lo > 2 ? " N(K,T)" + bracket_text(a) : "") +
               (b.hi - b.lo > 2 ? " N(T°,K°)" + bracket_text(b) : "");
    }
  }
  std::string s = std::to_string(meet) + "/5 intersect, " + std::to_string(narrow) + "/5 within width 2";
  if (!loose.empty()) s += "; loose: " + loose;
  return {meet == 5 && narrow == 5, s};
}

// 3. Sandwich suite on ten mixed pairs.
Outcome sandwich() {
  ExperimentSpec spec;
  spec.family = "all";
  spec.count = 1;
  auto pairs = generate_family(spec);
  pairs.push_back({"interval-2.5", "interval", interval(2.5), interval(1.0)});
  pairs.push_back({"interval-1/0.4", "interval", interval(1.0), interval(0.4)});
  const Effort effort;
  const double eta = effort.tol.eta;
  int ok_pairs = 0;
  std::string failed;
  for (const auto& p : pairs) {
    const auto& K = p.K;
    const auto& T = p.T;
    const auto n = covering_bracket(K, T, effort);
    const auto grid = grid_candidates(K, T, 0.1, effort.grid_budget);
    const auto p1 = max_packing(K, T, 1.0, grid, effort.packing_exact_cutoff, eta).size();
    const auto p2 = max_packing(K, T, 2.0 * (1.0 + eta), grid, effort.packing_exact_cutoff, eta).size();
    const auto restricted = covering_restricted_bracket(K, T, effort);
    const auto restricted2 = covering_bracket_at(K, T, 2.0 * (1.0 + eta), true, effort);
    const auto sep = separation_greedy_lower(K, T, effort, 1.0 + eta);
    const auto half = covering_bracket_at(K, T, (1.0 + eta) / 2.0, false, effort);
    const auto dual = separation_duality_check(K, T, effort);
    const bool a = p2 <= n.hi && n.hi <= p1;
    const bool b = restricted2.lo <= n.hi && n.lo <= restricted.hi;
    const bool c = sep.points.size() <= half.hi;
    const bool d = dual.holds;
    std::cerr << "  " << p.id << ": P(2e)>=" << p2 << " N_hi=" << count(n.hi) << " P(e)>=" << p1
              << " | N'(K,2T)" << bracket_text(restricted2) << " N" << bracket_text(n) << " N'" << bracket_text(restricted)
              << " | M^>=" << sep.points.size() << " N(K,T/2)<=" << count(half.hi) << " | M^>=" << dual.lower
              << " N(T°,K°/4)^2<=" << fmt(dual.rhs) << "\n";
    if (a && b && c && d) {
      ++ok_pairs;
    } else {
      if (!failed.empty()) failed += ", ";
      failed += p.id + "(" + (a ? "" : "packing ") + (b ? "" : "restricted ") + (c ? "" : "separation ") +
                (d ? "" : "duality ") + ")";
    }
  }
  std::string s = std::to_string(ok_pairs) + "/" + std::to_string(pairs.size()) + " pairs satisfy all four sandwiches";
  if (!failed.empty()) s += "; failing: " + failed;
  return {ok_pairs == static_cast<int>(pairs.size()), s};
}

// 4. Entropy-tail inequality.
Outcome entropy_tail() {
  const Effort effort;
  int rows = 0, good = 0;
  const auto line = entropy_sequence(interval(4.0), interval(1.0), 12, effort, "interval-4");
  for (const auto& r : tail_check(line, 1, effort.tol.eta, effort.bisect_tol)) {
    ++rows;
    good += r.proven;
    if (!r.proven) std::cerr << "  interval k=" << r.k << " e_k.hi=" << r.e_k_hi << " fails\n";
  }
  const auto K = ConvexBody::ellipsoid((Mat(2, 2) << 1.0, 0.0, 0.0, 4.0).finished());
  const auto T = ConvexBody::ellipsoid((Mat(2, 2) << 2.0, 0.5, 0.5, 1.0).finished());
  const auto seq = entropy_sequence(K, T, 10, effort, "ellipses");
  int tight = 0, plane = 0;
  for (const auto& r : tail_check(seq, 2, effort.tol.eta, effort.bisect_tol)) {
    if (r.k < 6) continue;
    ++rows;
    ++plane;
    good += r.proven;
    tight += r.tight;
    std::cerr << "  ellipses k=" << r.k << " e_k in [" << fmt(seq.at(r.k).lo) << "," << fmt(seq.at(r.k).hi)
              << "] bound from e_2.lo " << fmt(entropy_tail_bound(seq.at(2).lo, 2, r.k)) << (r.proven ? " proven" : " FAILS")
              << "\n";
  }
  return {good == rows, std::to_string(good) + "/" + std::to_string(rows) +
                            " rows proven (upper e_k against lower e_n); ellipse rows within bisection tolerance: " +
                            std::to_string(tight) + "/" + std::to_string(plane)};
}

// 5. gamma_p sandwich on finite spaces.
Outcome finite_gamma() {
  const double eta = 1e-6;
  auto run = [&](GammaConvention conv, std::string& first) {
    int bad = 0;
    for (int s = 0; s < 50; ++s) {
      const auto space = FiniteMetricSpace::random_euclidean(2 + s % 9, 2, 1000 + static_cast<std::uint64_t>(s));
      for (double p : {1.0, 2.0}) {
        const auto g = gamma_estimates_finite(space, p, conv);
        const bool ok = *g.exact >= g.sudakov_lo - eta && *g.exact <= g.dudley_hi + eta;
        if (!ok && first.empty())
          first = "|M|=" + std::to_string(space.size()) + " p=" + fmt(p) + " gamma=" + fmt(*g.exact) + " outside [" +
                  fmt(g.sudakov_lo) + "," + fmt(g.dudley_hi) + "]";
        bad += !ok;
      }
    }
    return bad;
  };
  std::string first_std, first_lit;
  const int bad_std = run(GammaConvention::Standard, first_std);
  const int bad_lit = run(GammaConvention::Literal, first_lit);
  std::string s = "standard convention " + std::to_string(100 - bad_std) + "/100 inside";
  if (bad_std) s += " (first miss: " + first_std + ")";
  s += "; literal convention " + std::to_string(100 - bad_lit) + "/100 inside";
  return {bad_std == 0, s};
}

// 6. Dudley dyadic-step constant.
Outcome dyadic_step() {
  int good = 0, exact = 0, total = 0;
  for (double p : {1.0, 1.5, 2.0, 3.0})
    for (int j = 1; j <= 12; ++j) {
      const auto c = dyadic_step_check(p, j);
      ++total;
      good += c.holds;
      exact += c.exact;
    }
  return {good == total, std::to_string(good) + "/" + std::to_string(total) + " hold (" + std::to_string(exact) +
                             " in exact rational arithmetic, the rest in 100-digit floating point)"};
}

// 7. Gaussian cross-check on the square.
Outcome gaussian() {
  const auto K = ConvexBody::cube(2, 1.0);
  const auto mc = gaussian_sup_mc(K, Mat::Identity(2, 2), 100000, 0);
  const double truth = 2.0 * std::sqrt(2.0 / M_PI);
  const bool close = std::abs(mc.mean - truth) <= 3.0 * mc.std_error;
  const Effort effort;
  const auto seq = entropy_sequence(K, ConvexBody::euclidean_ball(2), 8, effort, "square/disk");
  const auto profile = EntropyProfile::from_sequence(seq);
  const double lower = sudakov_lower(2.0, profile);
  const auto upper = dudley_upper(2.0, profile);
  const bool above = lower <= mc.mean;
  return {close && above, "mean " + fmt(mc.mean, 5) + " +- " + fmt(mc.std_error, 2) + " (closed form " + fmt(truth, 5) +
                              "); Sudakov lower " + fmt(lower) + (above ? " <= mean" : " > mean") +
                              "; Dudley dyadic " + fmt(upper.dyadic) + " = " + fmt(upper.dyadic / mc.mean, 3) +
                              " x mean (reported)"};
}

// 8. Full default duality scan.
Outcome duality_report() {
  ExperimentSpec spec;
  const auto pairs = generate_family(spec);
  const auto rows = duality_scan(pairs, spec.a_grid, spec.effort);
  ExperimentSpec again = spec;
  again.family = "ellipsoid";
  const auto sub = duality_scan(generate_family(again), spec.a_grid, spec.effort);
  std::string full_csv = duality_csv(rows), sub_csv = duality_csv(sub);
  // The ellipsoid rows of the full scan must reappear byte for byte.
  bool same = true;
  std::istringstream lines(sub_csv);
  for (std::string line; std::getline(lines, line);)
    if (full_csv.find(line + "\n") == std::string::npos) same = false;
  const char* dir = std::getenv("POLARKIT_ACCEPTANCE_OUT");
  if (dir) {
    std::ofstream(std::string(dir) + "/duality_scan.csv") << full_csv;
    std::ofstream(std::string(dir) + "/duality_scan.svg") << duality_svg(rows);
  }
  std::vector<FitSummary> fits;
  std::string fit_error;
  try {
    fits = fit_constants(rows);
    if (dir) std::ofstream(std::string(dir) + "/fit.json") << fit_json(fits);
  } catch (const std::exception& e) {
    fit_error = e.what();
  }
  const FitSummary* ell = nullptr;
  for (const auto& f : fits) {
    std::cerr << "  fit " << f.family << ": a=" << f.a << " b=" << f.b << " binding " << f.binding_row << "\n";
    if (f.family == "ellipsoid") ell = &f;
  }
  std::size_t errors = 0;
  for (const auto& r : rows)
    for (const auto& f : r.flags) errors += f.rfind("error:", 0) == 0;
  const bool finite = ell && std::isfinite(ell->a) && std::isfinite(ell->b);
  const bool small_b = finite && ell->b <= 4.0;
  std::string s = std::to_string(rows.size()) + " rows, " + std::to_string(errors) + " error flags, repeat " +
                  (same ? "identical" : "DIFFERENT");
  if (!fit_error.empty()) s += "; fit failed: " + fit_error;
  if (ell) {
    s += "; ellipsoid fit a=" + fmt(ell->a) + " b=" + fmt(ell->b);
    if (!small_b) s += " (loose bracket: " + ell->binding_row + ")";
  }
  return {rows.size() >= 40 && same && errors == 0 && finite && small_b, s};
}

// 9. Tampered certificates are refuted by `verify`.
Outcome tamper_fuzz() {
  Effort effort;
  effort.refine_restarts = 0;
  const auto square = ConvexBody::cube(2, 1.0);
  const auto disk = ConvexBody::euclidean_ball(2, 0.45);
  const auto cross = ConvexBody::unit_lp_ball(2, 1.0);
  std::vector<json> docs{
      covering_certificate_json(square, disk, 1.0, false, covering_bracket(square, disk, effort)),
      covering_certificate_json(cross, disk, 1.0, true, covering_restricted_bracket(cross, disk, effort)),
      covering_certificate_json(interval(3.0), interval(1.0), 1.0, false,
                                covering_bracket(interval(3.0), interval(1.0), effort)),
      entropy_certificate_json(square, cross, entropy_bracket(square, cross, 3, effort)),
      separation_certificate_json(square, disk, separation_greedy_lower(square, disk, effort, 1.0)),
  };
  const char* tmp = std::getenv("TMPDIR");
  const std::string path = std::string(tmp ? tmp : "/tmp") + "/polarkit_acceptance_cert.json";
  auto verify = [&](const json& doc) {
    std::ofstream(path) << doc.dump();
    std::ostringstream out, err;
    return cli::run({"polarkit", "verify", path}, out, err);
  };
  int originals = 0;
  for (const auto& d : docs) originals += verify(d) == cli::kOk;
  std::mt19937_64 rng(2026);
  int refuted = 0;
  for (int i = 0; i < 100; ++i) {
    const auto [bad, what] = testing::tamper(docs[static_cast<std::size_t>(i) % docs.size()], rng);
    if (verify(bad) == cli::kFailure) ++refuted;
    else std::cerr << "  accepted tampering: " << what << "\n";
  }
  std::remove(path.c_str());
  return {refuted == 100 && originals == static_cast<int>(docs.size()),
          std::to_string(refuted) + "/100 tampered refuted; " + std::to_string(originals) + "/" +
              std::to_string(docs.size()) + " originals accepted"};
}

struct Criterion {
  const char* title;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {"analytic covering oracle", analytic_covers},
      {"ellipsoid covering duality", ellipsoid_equality},
      {"sandwich suite", sandwich},
      {"entropy-tail inequality", entropy_tail},
      {"gamma_p sandwich on finite spaces", finite_gamma},
      {"Dudley dyadic-step constant", dyadic_step},
      {"Gaussian cross-check", gaussian},
      {"duality scan report", duality_report},
      {"certificate tampering", tamper_fuzz},
  };
  return list;
}

}  // namespace

int main(int argc, char** argv) {
  set_log_level(LogLevel::Quiet);
  std::vector<int> chosen;
  if (argc > 1) {
    for (int i = 1; i < argc; ++i) {
      const int c = std::atoi(argv[i]);
      if (c < 1 || c > static_cast<int>(criteria().size())) {
        std::cerr << "usage: acceptance [1-" << criteria().size() << "]...\n";
        return 2;
      }
      chosen.push_back(c);
    }
  } else {
    for (int c = 1; c <= static_cast<int>(criteria().size()); ++c) chosen.push_back(c);
  }
  bool all = true;
  for (int c : chosen) {
    const auto& crit = criteria()[static_cast<std::size_t>(c - 1)];
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = crit.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c << " (" << crit.title << "): " << o.summary << " ["
              << fmt(secs, 3) << " s]" << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
