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

#include "polarkit/lp.hpp"

#include <cmath>
#include <limits>

namespace polarkit::lp {
namespace {

class Tableau {
 public:
  Tableau(Eigen::Index rows, Eigen::Index cols) : t_(Mat::Zero(rows + 1, cols + 1)), basis_(rows, -1) {}

  double& at(Eigen::Index r, Eigen::Index c) { return t_(r, c); }
  double rhs(Eigen::Index r) const { return t_(r, t_.cols() - 1); }
  Eigen::Index rows() const { return t_.rows() - 1; }
  Eigen::Index cols() const { return t_.cols() - 1; }
  std::vector<Eigen::Index>& basis() { return basis_; }
  // Objective row is the last one; it stores reduced costs and -value.
  double reduced(Eigen::Index c) const { return t_(t_.rows() - 1, c); }
  double objective() const { return -t_(t_.rows() - 1, t_.cols() - 1); }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i != r && t_(i, c) != 0.0) t_.row(i) -= t_(i, c) * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = c;
  }

  void set_objective(const Vec& cost) {
    auto obj = t_.row(t_.rows() - 1);
    obj.setZero();
    obj.head(cost.size()) = cost.transpose();
    for (Eigen::Index r = 0; r < rows(); ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      if (b >= 0 && obj(b) != 0.0) obj -= obj(b) * t_.row(r);
    }
  }

  void drop_row(Eigen::Index r) {
    const Eigen::Index last = t_.rows() - 1;
    Mat next(t_.rows() - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(last - r) = t_.bottomRows(last - r);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  // Runs simplex iterations on the columns [0, active_cols).
  Status run(Eigen::Index active_cols, double tol, long max_iter) {
    for (long it = 0; it < max_iter; ++it) {
      Eigen::Index enter = -1;
      for (Eigen::Index c = 0; c < active_cols; ++c) {
        if (reduced(c) < -tol) {
          enter = c;
          break;
        }
      }
      if (enter < 0) return Status::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index r = 0; r < rows(); ++r) {
        const double a = t_(r, enter);
        if (a <= tol) continue;
        const double ratio = rhs(r) / a;
        if (leave < 0 || ratio < best - tol) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + tol &&
                   basis_[static_cast<std::size_t>(r)] < basis_[static_cast<std::size_t>(leave)]) {
          leave = r;
        }
      }
      if (leave < 0) return Status::Unbounded;
      pivot(leave, enter);
    }
    return Status::IterationLimit;
  }

 private:
  Mat t_;
  std::vector<Eigen::Index> basis_;
};

}  // namespace

const char* to_string(Status status) {
  switch (status) {
    case Status::Optimal: return "optimal";
    case Status::Infeasible: return "infeasible";
    case Status::Unbounded: return "unbounded";
    case Status::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

Result solve(const Problem& problem, double tol) {
  const Eigen::Index n = problem.c.size();
  const Eigen::Index m_ub = problem.A_ub.rows();
  const Eigen::Index m_eq = problem.A_eq.rows();
  if ((m_ub > 0 && problem.A_ub.cols() != n) || (m_eq > 0 && problem.A_eq.cols() != n) ||
      problem.b_ub.size() != m_ub || problem.b_eq.size() != m_eq) {
    throw InvalidArgument("lp::solve: inconsistent problem dimensions");
  }
  const Eigen::Index m = m_ub + m_eq;

  // Column layout: [x (n) | slacks (m_ub) | artificials (m) | rhs].
  const Eigen::Index slack0 = n;
  const Eigen::Index art0 = n + m_ub;
  Tableau tab(m, n + m_ub + m);
  for (Eigen::Index r = 0; r < m; ++r) {
    const bool is_ub = r < m_ub;
    const auto row = is_ub ? Vec(problem.A_ub.row(r).transpose()) : Vec(problem.A_eq.row(r - m_ub).transpose());
    double b = is_ub ? problem.b_ub(r) : problem.b_eq(r - m_ub);
    const double sign = b < 0.0 ? -1.0 : 1.0;
    for (Eigen::Index c = 0; c < n; ++c) tab.at(r, c) = sign * row(c);
    if (is_ub) tab.at(r, slack0 + r) = sign;
    tab.at(r, tab.cols()) = sign * b;
    if (is_ub && sign > 0.0) {
      tab.basis()[static_cast<std::size_t>(r)] = slack0 + r;
    } else {
      tab.at(r, art0 + r) = 1.0;
      tab.basis()[static_cast<std::size_t>(r)] = art0 + r;
    }
  }

  const long max_iter = 50 * (tab.cols() + tab.rows()) + 1000;
  Vec phase1 = Vec::Zero(tab.cols());
  bool need_phase1 = false;
  for (Eigen::Index r = 0; r < m; ++r) {
    if (tab.basis()[static_cast<std::size_t>(r)] >= art0) {
      phase1(tab.basis()[static_cast<std::size_t>(r)]) = 1.0;
      need_phase1 = true;
    }
  }
  Result result;
  if (need_phase1) {
    tab.set_objective(phase1);
    const Status s = tab.run(tab.cols(), tol, max_iter);
    if (s == Status::IterationLimit) {
      result.status = s;
      return result;
    }
    if (tab.objective() > 1e-8 * (1.0 + problem.b_ub.lpNorm<Eigen::Infinity>() + problem.b_eq.lpNorm<Eigen::Infinity>())) {
      result.status = Status::Infeasible;
      return result;
    }
    // Drive artificials out of the basis; drop redundant rows.
    for (Eigen::Index r = tab.rows() - 1; r >= 0; --r) {
      if (tab.basis()[static_cast<std::size_t>(r)] < art0) continue;
      Eigen::Index col = -1;
      for (Eigen::Index c = 0; c < art0; ++c) {
        if (std::abs(tab.at(r, c)) > 1e-9) {
          col = c;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(r, col);
      } else {
        tab.drop_row(r);
      }
    }
  }
  Vec cost = Vec::Zero(tab.cols());
  cost.head(n) = problem.c;
  tab.set_objective(cost);
  result.status = tab.run(art0, tol, max_iter);
  if (result.status != Status::Optimal) return result;
  result.x = Vec::Zero(n);
  for (Eigen::Index r = 0; r < tab.rows(); ++r) {
    const Eigen::Index b = tab.basis()[static_cast<std::size_t>(r)];
    if (b < n) result.x(b) = tab.rhs(r);
  }
  result.value = problem.c.dot(result.x);
  return result;
}

}  // namespace polarkit::lp
