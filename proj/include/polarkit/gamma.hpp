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

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace polarkit {

/// Admissible cardinalities. Standard: |M_0| = 1 and |M_j| <= 2^(2^j).
/// Literal: |M_j| = min(2^(2^j), |M|) for every j >= 0.
enum class GammaConvention { Standard, Literal };

const char* to_string(GammaConvention c);
GammaConvention parse_convention(const std::string& s);

/// C_p = 1 / (p (1 - 2^(-1/p))) for p >= 1. For 0 < p < 1 the summand
/// k^(1/p - 1) increases, so each dyadic block is at least 2^((j-1)/p) and
/// C_p = 2^(1/p) suffices.
double dudley_constant(double p);

struct DyadicStepCheck {
  double p = 0.0;
  int j = 0;
  double lhs = 0.0;  // 2^(j/p)
  double rhs = 0.0;  // C_p * sum_{k=2^(j-1)}^{2^j - 1} k^(1/p - 1)
  bool holds = false;
  /// True when the comparison was done in rational arithmetic.
  bool exact = false;
};

/// 2^(j/p) <= C_p * sum_{k=2^(j-1)}^{2^j - 1} k^(1/p - 1). Exact rationals when
/// p = 1, otherwise 100-digit binary floating point.
DyadicStepCheck dyadic_step_check(double p, int j);

/// Entropy numbers e_0, e_1, ... as lower/upper values. Beyond the last index
/// the values are either zero (finite spaces, dim == 0) or bounded by the
/// entropy tail inequality from e_dim (bodies in dimension dim).
struct EntropyProfile {
  std::vector<double> lo;
  std::vector<double> hi;
  int dim = 0;

  static EntropyProfile from_sequence(const EntropySequence& seq);
  static EntropyProfile exact_finite(const std::vector<double>& e);
  /// Upper value for any k >= 0 (tail bound past the end).
  double upper(long long k) const;
};

struct DudleyBound {
  /// sum_{j>=0} 2^(j/p) e_{2^j}.
  double dyadic = 0.0;
  /// (1 + C_p) sum_{k>=1} k^(1/p - 1) e_k.
  double integral = 0.0;
  /// Part of `dyadic` that comes from the tail inequality.
  double dyadic_tail = 0.0;
};

/// Both sums run until their terms drop below double precision of the total;
/// past the profile's end they use EntropyProfile::upper. Throws
/// InvalidArgument when the profile is empty or a body profile stops before
/// e_dim.
DudleyBound dudley_upper(double p, const EntropyProfile& e);

/// 2^(-1/p) max_{k>=1} k^(1/p) e_k.lo over the available k.
double sudakov_lower(double p, const EntropyProfile& e);

/// Levels M_0, ..., M_J of an admissible sequence.
struct AdmissibleSequence {
  std::vector<PointList> levels;
  GammaConvention convention = GammaConvention::Standard;
};

struct ChainingResult {
  double value = 0.0;
  /// eps_j for the materialised levels.
  std::vector<double> level_radius;
  double tail = 0.0;
  AdmissibleSequence sequence;
};

/// Materialises covers of K by eps_j T with at most 2^(2^j) centres in K (a
/// single centre at level 0 under the standard convention) for j <= J, and
/// bounds the levels past J by the entropy tail inequality. eps_j starts at
/// the upper entropy value and grows until a cover with centres in K is
/// found. gamma_p(K, T) <= value.
ChainingResult chaining_upper(const ConvexBody& K, const ConvexBody& T, double p, int J, const Effort& effort,
                              GammaConvention convention = GammaConvention::Standard);

/// max over `points` of sum_j 2^(j/p) min_{c in M_j} gauge(T, x - c).
double evaluate_admissible(const ConvexBody& T, const AdmissibleSequence& seq, double p, const PointList& points);

class FiniteMetricSpace {
 public:
  /// Validates symmetry, zero diagonal, nonnegativity and the triangle
  /// inequality within tol.
  FiniteMetricSpace(Mat D, std::vector<std::string> labels = {}, double tol = 1e-9);

  /// Euclidean distances of `size` uniform points in [0, 1]^dim.
  static FiniteMetricSpace random_euclidean(int size, int dim, std::uint64_t seed);

  int size() const { return static_cast<int>(D_.rows()); }
  const Mat& distances() const { return D_; }
  const std::vector<std::string>& labels() const { return labels_; }
  FiniteMetricSpace scaled(double alpha) const;

 private:
  Mat D_;
  std::vector<std::string> labels_;
};

/// e_k of the space for k = 0 .. ceil(log2 |M|) (the last one is 0): the least
/// radius admitting at most 2^k centres from M. Brute force.
std::vector<double> finite_entropy_numbers(const FiniteMetricSpace& space);

struct FiniteGamma {
  double value = 0.0;
  /// Levels as point indices.
  std::vector<std::vector<int>> levels;
};

/// Exact gamma_p by enumeration of M_0 and M_1 (levels j >= 2 may equal M).
/// Requires |M| <= 12.
FiniteGamma gamma_exact_finite(const FiniteMetricSpace& space, double p,
                               GammaConvention convention = GammaConvention::Standard);

struct GammaEstimates {
  std::string pair_id;
  double p = 0.0;
  double sudakov_lo = 0.0;
  double dudley_hi = 0.0;
  double chaining_hi = 0.0;
  std::optional<double> exact;
  GammaConvention convention = GammaConvention::Standard;
};

/// All estimates for a finite space. dudley_hi is the integral form, and
/// chaining_hi the dyadic chaining bound under `convention`.
GammaEstimates gamma_estimates_finite(const FiniteMetricSpace& space, double p, GammaConvention convention,
                                      const std::string& id = "");

/// Estimates for a body pair from an entropy sequence plus a chaining run.
GammaEstimates gamma_estimates(const ConvexBody& K, const ConvexBody& T, double p, const EntropySequence& seq,
                               int J, const Effort& effort, GammaConvention convention = GammaConvention::Standard);

std::string gamma_csv(const std::vector<GammaEstimates>& rows);
std::string gamma_json(const std::vector<GammaEstimates>& rows);

struct MonteCarloResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
};

/// E support(K, G) for G ~ N(0, Q). Batches of 4096 draws use their own
/// mt19937_64 seeded from (seed, batch) and are summed in batch order, so the
/// result does not depend on `threads`. Requires samples >= 1000.
MonteCarloResult gaussian_sup_mc(const ConvexBody& K, const Mat& Q, std::size_t samples, std::uint64_t seed,
                                 int threads = 1);

}  // namespace polarkit
