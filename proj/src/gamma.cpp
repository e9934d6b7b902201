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


#include "polarkit/gamma.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <json.hpp>

#include <Eigen/Cholesky>
#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <random>
#include <sstream>
#include <thread>

namespace polarkit {

namespace {

void require_p(double p) {
  if (!(p > 0) || !std::isfinite(p)) throw InvalidArgument("gamma: p must be positive and finite");
}

// Calls f on every size-m subset of {0..n-1} as a bitmask.
template <class F>
void for_each_subset(int n, int m, F&& f) {
  if (m > n) m = n;
  std::vector<int> idx(m);
  for (int i = 0; i < m; ++i) idx[i] = i;
  while (true) {
    std::uint32_t mask = 0;
    for (int i : idx) mask |= 1u << i;
    f(mask);
    int i = m - 1;
    while (i >= 0 && idx[i] == n - m + i) --i;
    if (i < 0) return;
    ++idx[i];
    for (int t = i + 1; t < m; ++t) idx[t] = idx[t - 1] + 1;
  }
}

double dist_to_set(const Mat& D, int x, std::uint32_t mask) {
  double best = std::numeric_limits<double>::infinity();
  for (int c = 0; c < D.rows(); ++c)
    if (mask >> c & 1u) best = std::min(best, D(x, c));
  return best;
}

std::vector<int> mask_indices(std::uint32_t mask) {
  std::vector<int> out;
  for (int i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i);
  return out;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace

const char* to_string(GammaConvention c) { return c == GammaConvention::Standard ? "standard" : "literal"; }

GammaConvention parse_convention(const std::string& s) {
  if (s == "standard") return GammaConvention::Standard;
  if (s == "literal") return GammaConvention::Literal;
  throw InvalidArgument("unknown gamma convention '" + s + "' (expected standard or literal)");
}

double dudley_constant(double p) {
  require_p(p);
  if (p >= 1.0) return 1.0 / (p * (1.0 - std::pow(2.0, -1.0 / p)));
  return std::pow(2.0, 1.0 / p);
}

DyadicStepCheck dyadic_step_check(double p, int j) {
  require_p(p);
  if (j < 1 || j > 40) throw InvalidArgument("dyadic_step_check: j must be in 1..40");
  DyadicStepCheck out;
  out.p = p;
  out.j = j;
  const long long a = 1LL << (j - 1), b = (1LL << j) - 1;
  if (p == 1.0) {
    // Every summand is 1 and C_1 = 2.
    using boost::multiprecision::cpp_rational;
    const cpp_rational lhs = cpp_rational(1LL << j);
    const cpp_rational rhs = cpp_rational(2) * cpp_rational(b - a + 1);
    out.lhs = static_cast<double>(lhs);
    out.rhs = static_cast<double>(rhs);
    out.holds = lhs <= rhs;
    out.exact = true;
    return out;
  }
  using Big = boost::multiprecision::cpp_bin_float_100;
  const Big P(p);
  const Big one(1), two(2);
  const Big C = p >= 1.0 ? one / (P * (one - pow(two, -one / P))) : pow(two, one / P);
  Big sum(0);
  const Big e = one / P - one;
  for (long long k = a; k <= b; ++k) sum += pow(Big(k), e);
  const Big lhs = pow(two, Big(j) / P);
  const Big rhs = C * sum;
  out.lhs = static_cast<double>(lhs);
  out.rhs = static_cast<double>(rhs);
  out.holds = lhs <= rhs;
  return out;
}

EntropyProfile EntropyProfile::from_sequence(const EntropySequence& seq) {
  EntropyProfile e;
  e.dim = seq.dim;
  for (std::size_t i = 0; i < seq.k_values.size(); ++i) {
    if (seq.k_values[i] != static_cast<int>(i)) throw InvalidArgument("entropy profile: k values must be 0, 1, 2, ...");
    e.lo.push_back(seq.brackets[i].lo);
    e.hi.push_back(seq.brackets[i].hi);
  }
  return e;
}

EntropyProfile EntropyProfile::exact_finite(const std::vector<double>& v) {
  EntropyProfile e;
  e.lo = v;
  e.hi = v;
  e.dim = 0;
  return e;
}

double EntropyProfile::upper(long long k) const {
  if (k < 0) throw InvalidArgument("entropy profile: negative index");
  if (hi.empty()) throw InvalidArgument("entropy profile: empty");
  if (k < static_cast<long long>(hi.size())) return hi[static_cast<std::size_t>(k)];
  if (dim == 0) return 0.0;
  if (static_cast<std::size_t>(dim) >= hi.size())
    throw InvalidArgument("entropy profile: the tail needs e_" + std::to_string(dim) + "; extend the sequence");
  const double tail = k > dim ? entropy_tail_bound(hi[static_cast<std::size_t>(dim)], dim, static_cast<int>(std::min<long long>(k, 1LL << 30)))
                              : hi.back();
  return std::min(hi.back(), tail);
}

DudleyBound dudley_upper(double p, const EntropyProfile& e) {
  require_p(p);
  if (e.hi.empty()) throw InvalidArgument("dudley_upper: empty entropy sequence");
  e.upper(static_cast<long long>(e.hi.size()));  // validates tail availability
  DudleyBound out;
  const long long known = static_cast<long long>(e.hi.size());
  for (int j = 0; j < 62; ++j) {
    const long long k = 1LL << j;
    const double term = std::pow(2.0, j / p) * e.upper(k);
    out.dyadic += term;
    if (k >= known) out.dyadic_tail += term;
    if (k >= known && (term == 0.0 || term < 1e-17 * out.dyadic)) break;
  }
  double sum = 0.0;
  for (long long k = 1; k < 100'000'000; ++k) {
    const double term = std::pow(static_cast<double>(k), 1.0 / p - 1.0) * e.upper(k);
    sum += term;
    if (k >= known && (term == 0.0 || term < 1e-17 * sum)) break;
  }
  out.integral = (1.0 + dudley_constant(p)) * sum;
  return out;
}

double sudakov_lower(double p, const EntropyProfile& e) {
  require_p(p);
  if (e.lo.empty()) throw InvalidArgument("sudakov_lower: empty entropy sequence");
  double best = 0.0;
  for (std::size_t k = 1; k < e.lo.size(); ++k)
    best = std::max(best, std::pow(static_cast<double>(k), 1.0 / p) * e.lo[k]);
  return std::pow(2.0, -1.0 / p) * best;
}

ChainingResult chaining_upper(const ConvexBody& K, const ConvexBody& T, double p, int J, const Effort& effort,
                              GammaConvention convention) {
  require_p(p);
  if (J < 1) throw InvalidArgument("chaining_upper: J must be at least 1");
  if (J > 4) throw InvalidArgument("chaining_upper: J > 4 needs covers with more than 2^16 centres");
  if (K.dim() != T.dim()) throw InvalidArgument("chaining_upper: dimension mismatch");
  const int n = K.dim();
  CoverCache cache;
  ChainingResult out;
  out.sequence.convention = convention;
  double last = 0.0;
  for (int j = 0; j <= J; ++j) {
    const int k = (j == 0 && convention == GammaConvention::Standard) ? 0 : (1 << j);
    const std::size_t cap = std::size_t{1} << k;
    const auto eb = entropy_bracket(K, T, k, effort, &cache);
    double rho = eb.hi;
    std::optional<CoverCertificate> net;
    for (int grow = 0; grow <= 10 && !net; ++grow, rho *= 1.15) {
      const auto b = covering_bracket_at(K, T, rho, true, effort, nullptr, cap);
      if (b.hi <= cap && b.hi_certificate) net = b.hi_certificate;
    }
    if (!net)
      throw Error("chaining_upper: no cover with at most " + std::to_string(cap) + " centres in K found for level " +
                  std::to_string(j) + " (k = " + std::to_string(k) + ")");
    rho = net->rho;
    out.level_radius.push_back(rho);
    out.sequence.levels.push_back(net->centers);
    out.value += std::pow(2.0, j / p) * rho;
    last = rho;
  }
  // Levels past J: centres in K at twice the unrestricted radius suffice.
  const double e_n = entropy_bracket(K, T, n, effort, &cache).hi;
  for (int j = J + 1; j < 62; ++j) {
    const int k = static_cast<int>(std::min<long long>(1LL << j, 1LL << 30));
    const double eps = std::min(last, 2.0 * entropy_tail_bound(e_n, n, k));
    const double term = std::pow(2.0, j / p) * eps;
    out.tail += term;
    if (term == 0.0 || term < 1e-17 * (out.value + out.tail)) break;
  }
  out.value += out.tail;
  return out;
}

double evaluate_admissible(const ConvexBody& T, const AdmissibleSequence& seq, double p, const PointList& points) {
  require_p(p);
  double worst = 0.0;
  for (const auto& x : points) {
    double s = 0.0;
    for (std::size_t j = 0; j < seq.levels.size(); ++j) {
      double d = std::numeric_limits<double>::infinity();
      for (const auto& c : seq.levels[j]) d = std::min(d, T.gauge(x - c));
      s += std::pow(2.0, static_cast<double>(j) / p) * d;
    }
    worst = std::max(worst, s);
  }
  return worst;
}

FiniteMetricSpace::FiniteMetricSpace(Mat D, std::vector<std::string> labels, double tol)
    : D_(std::move(D)), labels_(std::move(labels)) {
  const Eigen::Index n = D_.rows();
  if (n < 1 || D_.cols() != n) throw InvalidArgument("metric space: distance matrix must be square and nonempty");
  if (!D_.allFinite()) throw InvalidArgument("metric space: distances must be finite");
  if (labels_.empty())
    for (Eigen::Index i = 0; i < n; ++i) labels_.push_back("p" + std::to_string(i));
  if (static_cast<Eigen::Index>(labels_.size()) != n) throw InvalidArgument("metric space: label count mismatch");
  for (Eigen::Index i = 0; i < n; ++i) {
    if (D_(i, i) != 0.0) throw InvalidArgument("metric space: nonzero diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (D_(i, j) < 0) throw InvalidArgument("metric space: negative distance");
      if (std::abs(D_(i, j) - D_(j, i)) > tol) throw InvalidArgument("metric space: not symmetric");
      for (Eigen::Index k = 0; k < n; ++k)
        if (D_(i, k) > D_(i, j) + D_(j, k) + tol) throw InvalidArgument("metric space: triangle inequality fails");
    }
  }
}

FiniteMetricSpace FiniteMetricSpace::random_euclidean(int size, int dim, std::uint64_t seed) {
  if (size < 1 || dim < 1) throw InvalidArgument("metric space: size and dim must be positive");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Mat P(size, dim);
  for (int i = 0; i < size; ++i)
    for (int d = 0; d < dim; ++d) P(i, d) = U(rng);
  Mat D(size, size);
  for (int i = 0; i < size; ++i)
    for (int j = 0; j < size; ++j) D(i, j) = (P.row(i) - P.row(j)).norm();
  return FiniteMetricSpace(D);
}

FiniteMetricSpace FiniteMetricSpace::scaled(double alpha) const {
  if (!(alpha > 0)) throw InvalidArgument("metric space: scale must be positive");
  return FiniteMetricSpace(alpha * D_, labels_);
}

std::vector<double> finite_entropy_numbers(const FiniteMetricSpace& space) {
  const int n = space.size();
  if (n > 16) throw InvalidArgument("finite_entropy_numbers: at most 16 points");
  const Mat& D = space.distances();
  std::vector<double> radii(D.data(), D.data() + D.size());
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end()), radii.end());
  std::vector<double> e;
  for (int k = 0;; ++k) {
    const int m = k >= 5 ? n : std::min(n, 1 << k);
    // Least radius r such that some m centres reach every point within r.
    double best = radii.back();
    for_each_subset(n, m, [&](std::uint32_t mask) {
      double r = 0.0;
      for (int x = 0; x < n && r < best; ++x) r = std::max(r, dist_to_set(D, x, mask));
      best = std::min(best, r);
    });
    e.push_back(best);
    if (m == n) break;
  }
  return e;
}

FiniteGamma gamma_exact_finite(const FiniteMetricSpace& space, double p, GammaConvention convention) {
  require_p(p);
  const int n = space.size();
  if (n > 12) throw InvalidArgument("gamma_exact_finite: at most 12 points (got " + std::to_string(n) + ")");
  const Mat& D = space.distances();
  const int s0 = convention == GammaConvention::Standard ? 1 : std::min(2, n);
  const int s1 = std::min(4, n);
  const double w1 = std::pow(2.0, 1.0 / p);
  // Distances to every candidate level, once.
  std::vector<std::uint32_t> m0s, m1s;
  for_each_subset(n, s0, [&](std::uint32_t m) { m0s.push_back(m); });
  for_each_subset(n, s1, [&](std::uint32_t m) { m1s.push_back(m); });
  auto dists = [&](const std::vector<std::uint32_t>& masks) {
    std::vector<std::vector<double>> out;
    for (auto m : masks) {
      std::vector<double> d(n);
      for (int x = 0; x < n; ++x) d[x] = dist_to_set(D, x, m);
      out.push_back(std::move(d));
    }
    return out;
  };
  const auto d0 = dists(m0s), d1 = dists(m1s);
  FiniteGamma best;
  best.value = std::numeric_limits<double>::infinity();
  std::size_t b0 = 0, b1 = 0;
  for (std::size_t a = 0; a < d0.size(); ++a) {
    for (std::size_t b = 0; b < d1.size(); ++b) {
      double worst = 0.0;
      for (int x = 0; x < n && worst < best.value; ++x) worst = std::max(worst, d0[a][x] + w1 * d1[b][x]);
      if (worst < best.value) {
        best.value = worst;
        b0 = a;
        b1 = b;
      }
    }
  }
  best.levels.push_back(mask_indices(m0s[b0]));
  best.levels.push_back(mask_indices(m1s[b1]));
  best.levels.push_back(mask_indices((1u << n) - 1u));
  return best;
}

GammaEstimates gamma_estimates_finite(const FiniteMetricSpace& space, double p, GammaConvention convention,
                                      const std::string& id) {
  const auto e = finite_entropy_numbers(space);
  const auto prof = EntropyProfile::exact_finite(e);
  GammaEstimates g;
  g.pair_id = id;
  g.p = p;
  g.convention = convention;
  g.sudakov_lo = sudakov_lower(p, prof);
  g.dudley_hi = dudley_upper(p, prof).integral;
  // Covers with 2^(2^j) centres at level j (one centre at level 0 in the
  // standard convention).
  double chain = convention == GammaConvention::Standard ? e[0] : prof.upper(1);
  for (int j = 1; (1LL << j) < static_cast<long long>(e.size()) + 1 && j < 62; ++j)
    chain += std::pow(2.0, j / p) * prof.upper(1LL << j);
  g.chaining_hi = chain;
  g.exact = gamma_exact_finite(space, p, convention).value;
  return g;
}

GammaEstimates gamma_estimates(const ConvexBody& K, const ConvexBody& T, double p, const EntropySequence& seq, int J,
                               const Effort& effort, GammaConvention convention) {
  const auto prof = EntropyProfile::from_sequence(seq);
  GammaEstimates g;
  g.pair_id = seq.pair_id;
  g.p = p;
  g.convention = convention;
  g.sudakov_lo = sudakov_lower(p, prof);
  g.dudley_hi = dudley_upper(p, prof).dyadic;
  g.chaining_hi = chaining_upper(K, T, p, J, effort, convention).value;
  return g;
}

std::string gamma_csv(const std::vector<GammaEstimates>& rows) {
  std::ostringstream os;
  os << "pair_id,p,sudakov_lo,dudley_hi,chaining_hi,exact,convention\n";
  for (const auto& r : rows)
    os << r.pair_id << ',' << fmt(r.p) << ',' << fmt(r.sudakov_lo) << ',' << fmt(r.dudley_hi) << ','
       << fmt(r.chaining_hi) << ',' << (r.exact ? fmt(*r.exact) : "") << ',' << to_string(r.convention) << '\n';
  return os.str();
}

std::string gamma_json(const std::vector<GammaEstimates>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows) {
    nlohmann::json o{{"pair_id", r.pair_id},       {"p", r.p},
                     {"sudakov_lo", r.sudakov_lo}, {"dudley_hi", r.dudley_hi},
                     {"chaining_hi", r.chaining_hi}, {"convention", to_string(r.convention)}};
    o["exact"] = r.exact ? nlohmann::json(*r.exact) : nlohmann::json(nullptr);
    arr.push_back(o);
  }
  return arr.dump(2);
}

MonteCarloResult gaussian_sup_mc(const ConvexBody& K, const Mat& Q, std::size_t samples, std::uint64_t seed,
                                 int threads) {
  if (samples < 1000) throw InvalidArgument("gaussian_sup_mc: at least 1000 samples");
  if (Q.rows() != K.dim() || Q.cols() != K.dim()) throw InvalidArgument("gaussian_sup_mc: covariance shape mismatch");
  const Eigen::LLT<Mat> llt(Q);
  if (llt.info() != Eigen::Success || !Q.isApprox(Q.transpose()))
    throw InvalidArgument("gaussian_sup_mc: covariance must be symmetric positive definite");
  const Mat L = llt.matrixL();
  constexpr std::size_t kBatch = 4096;
  const std::size_t batches = (samples + kBatch - 1) / kBatch;
  std::vector<double> sum(batches, 0.0), sumsq(batches, 0.0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t b; (b = next.fetch_add(1)) < batches;) {
      std::mt19937_64 rng(splitmix64(seed ^ splitmix64(b)));
      std::normal_distribution<double> g(0.0, 1.0);
      const std::size_t count = std::min(kBatch, samples - b * kBatch);
      Vec z(K.dim());
      for (std::size_t s = 0; s < count; ++s) {
        for (Eigen::Index i = 0; i < z.size(); ++i) z[i] = g(rng);
        const double v = K.support(L * z);
        sum[b] += v;
        sumsq[b] += v * v;
      }
    }
  };
  const int t = std::max(1, std::min<int>(threads, static_cast<int>(batches)));
  std::vector<std::thread> pool;
  for (int i = 1; i < t; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  double s = 0.0, sq = 0.0;
  for (std::size_t b = 0; b < batches; ++b) s += sum[b], sq += sumsq[b];
  const double N = static_cast<double>(samples);
  MonteCarloResult out;
  out.samples = samples;
  out.mean = s / N;
  const double var = std::max(0.0, (sq - N * out.mean * out.mean) / (N - 1.0));
  out.std_error = std::sqrt(var / N);
  return out;
}

}  // namespace polarkit
