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

#include "polarkit/body.hpp"

#include "polarkit/lp.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

namespace polarkit {

struct ConvexBody::Impl {
  std::variant<HPolytope, VPolytope, Ellipsoid, LpBall, LinearImage> rep;
  int n = 0;
  std::optional<Mat> facets;
  std::optional<Mat> vertices;
  Mat inverse;  // Q^{-1} for ellipsoids, M^{-1} for linear images
  double abs_det = 1.0;
};

namespace {

constexpr int kMaxEnumDim = 4;

bool is_inf(double p) { return std::isinf(p); }

double dual_exponent(double p) {
  if (p == 1.0) return ConvexBody::kInf;
  if (is_inf(p)) return 1.0;
  return p / (p - 1.0);
}

double lp_norm(const Vec& z, double p) {
  if (is_inf(p)) return z.cwiseAbs().maxCoeff();
  if (p == 1.0) return z.cwiseAbs().sum();
  if (p == 2.0) return z.norm();
  const double scale = z.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  return scale * std::pow((z.cwiseAbs() / scale).array().pow(p).sum(), 1.0 / p);
}

// Removes rows that duplicate an earlier row within tol (relative).
Mat unique_rows(const Mat& rows, double tol) {
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    bool dup = false;
    for (Eigen::Index j : keep) {
      const double scale = 1.0 + rows.row(j).cwiseAbs().maxCoeff();
      if ((rows.row(i) - rows.row(j)).cwiseAbs().maxCoeff() <= tol * scale) {
        dup = true;
        break;
      }
    }
    if (!dup) keep.push_back(i);
  }
  Mat out(static_cast<Eigen::Index>(keep.size()), rows.cols());
  for (std::size_t k = 0; k < keep.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = rows.row(keep[k]);
  return out;
}

void require_negation_closed(const Mat& rows, const char* what) {
  for (Eigen::Index i = 0; i < rows.rows(); ++i) {
    bool found = false;
    const double scale = 1.0 + rows.row(i).cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < rows.rows() && !found; ++j) {
      found = (rows.row(i) + rows.row(j)).cwiseAbs().maxCoeff() <= 1e-9 * scale;
    }
    if (!found) {
      throw InvalidArgument(std::string(what) + ": row " + std::to_string(i) +
                            " has no negated partner (body must be centrally symmetric)");
    }
  }
}

Mat lp_ball_vertices(const LpBall& ball) {
  const auto n = ball.r.size();
  if (ball.p == 1.0) {
    Mat v = Mat::Zero(2 * n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
      v(2 * i, i) = ball.r(i);
      v(2 * i + 1, i) = -ball.r(i);
    }
    return v;
  }
  const Eigen::Index count = Eigen::Index{1} << n;
  Mat v(count, n);
  for (Eigen::Index s = 0; s < count; ++s) {
    for (Eigen::Index i = 0; i < n; ++i) v(s, i) = ((s >> i) & 1) ? -ball.r(i) : ball.r(i);
  }
  return v;
}

Mat lp_ball_facets(const LpBall& ball) {
  LpBall dual{dual_exponent(ball.p), ball.r.cwiseInverse()};
  return lp_ball_vertices(dual);
}

double polytope_volume(const Mat& facets, const Mat& vertices) {
  const auto n = vertices.cols();
  if (n == 1) return 2.0 * vertices.cwiseAbs().maxCoeff();
  if (n > 3) throw Unsupported("volume: polytopes are supported only for dimension <= 3");
  double total = 0.0;
  for (Eigen::Index f = 0; f < facets.rows(); ++f) {
    const Vec g = facets.row(f).transpose();
    std::vector<Vec> pts;
    for (Eigen::Index v = 0; v < vertices.rows(); ++v) {
      const Vec x = vertices.row(v).transpose();
      if (std::abs(g.dot(x) - 1.0) <= 1e-8) pts.push_back(x);
    }
    if (static_cast<Eigen::Index>(pts.size()) < n) continue;
    double area = 0.0;
    if (n == 2) {
      for (const auto& a : pts) {
        for (const auto& b : pts) area = std::max(area, (a - b).norm());
      }
    } else {
      Vec c = Vec::Zero(3);
      for (const auto& p : pts) c += p;
      c /= static_cast<double>(pts.size());
      const Vec normal = g.normalized();
      Vec u = (pts.front() - c);
      if (u.norm() == 0.0) continue;
      u.normalize();
      const Vec w = normal.head<3>().cross(u.head<3>());
      std::sort(pts.begin(), pts.end(), [&](const Vec& a, const Vec& b) {
        return std::atan2((a - c).dot(w), (a - c).dot(u)) < std::atan2((b - c).dot(w), (b - c).dot(u));
      });
      Eigen::Vector3d acc = Eigen::Vector3d::Zero();
      for (std::size_t i = 0; i < pts.size(); ++i) {
        const Eigen::Vector3d a = (pts[i] - c).head<3>();
        const Eigen::Vector3d b = (pts[(i + 1) % pts.size()] - c).head<3>();
        acc += a.cross(b);
      }
      area = 0.5 * acc.norm();
    }
    total += area / g.norm();
  }
  return total / static_cast<double>(n);
}

}  // namespace

const char* to_string(BodyKind kind) {
  switch (kind) {
    case BodyKind::HPolytope: return "hpolytope";
    case BodyKind::VPolytope: return "vpolytope";
    case BodyKind::Ellipsoid: return "ellipsoid";
    case BodyKind::LpBall: return "lpball";
    case BodyKind::LinearImage: return "linear_image";
  }
  return "unknown";
}

Mat enumerate_vertices(const Mat& G, double tol) {
  const auto n = G.cols();
  const auto m = G.rows();
  if (n < 1 || n > kMaxEnumDim) throw Unsupported("enumerate_vertices: dimension must be in [1, 4]");
  std::vector<Vec> found;
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  if (m < n) return Mat(0, n);
  const double gscale = 1.0 + G.cwiseAbs().maxCoeff();
  while (true) {
    Mat sub(n, n);
    for (Eigen::Index i = 0; i < n; ++i) sub.row(i) = G.row(idx[static_cast<std::size_t>(i)]);
    Eigen::FullPivLU<Mat> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() == n) {
      const Vec x = lu.solve(Vec::Ones(n));
      const double slack = (G * x).maxCoeff() - 1.0;
      if (slack <= tol * gscale) {
        bool dup = false;
        for (const auto& v : found) {
          if ((v - x).cwiseAbs().maxCoeff() <= 1e-9 * (1.0 + v.cwiseAbs().maxCoeff())) {
            dup = true;
            break;
          }
        }
        if (!dup) found.push_back(x);
      }
    }
    // next combination
    Eigen::Index k = n - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - n + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (Eigen::Index j = k + 1; j < n; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  Mat out(static_cast<Eigen::Index>(found.size()), n);
  for (std::size_t i = 0; i < found.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = found[i].transpose();
  return out;
}

double vpolytope_gauge_lp(const Mat& V, const Vec& x) {
  if (x.norm() == 0.0) return 0.0;
  lp::Problem prob;
  prob.c = Vec::Ones(V.rows());
  prob.A_eq = V.transpose();
  prob.b_eq = x;
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) {
    throw Error(std::string("vpolytope gauge LP failed: ") + lp::to_string(res.status));
  }
  return res.value;
}

double hpolytope_support_lp(const Mat& A, const Vec& b, const Vec& y) {
  lp::Problem prob;
  prob.c = b;
  prob.A_eq = A.transpose();
  prob.b_eq = y;
  const auto res = lp::solve(prob);
  if (res.status != lp::Status::Optimal) {
    throw Error(std::string("hpolytope support LP failed: ") + lp::to_string(res.status));
  }
  return res.value;
}

ConvexBody ConvexBody::hpolytope(Mat A, Vec b) {
  if (A.rows() != b.size() || A.rows() == 0 || A.cols() == 0) {
    throw InvalidArgument("hpolytope: A must be m x n with m = len(b) > 0");
  }
  if ((b.array() <= 0.0).any()) throw InvalidArgument("hpolytope: every entry of b must be > 0");
  const auto n = A.cols();
  Mat G = b.cwiseInverse().asDiagonal() * A;
  require_negation_closed(G, "hpolytope");
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(n);
  if (n <= kMaxEnumDim) {
    Mat verts = enumerate_vertices(G);
    if (verts.rows() < n + 1 || Eigen::FullPivLU<Mat>(verts).rank() < n) {
      throw InvalidArgument("hpolytope: constraints do not describe a bounded body");
    }
    impl->vertices = std::move(verts);
    impl->facets = unique_rows(G, 1e-12);
  } else {
    for (Eigen::Index i = 0; i < n; ++i) {
      Vec e = Vec::Zero(n);
      e(i) = 1.0;
      lp::Problem prob;
      prob.c = b;
      prob.A_eq = A.transpose();
      prob.b_eq = e;
      if (lp::solve(prob).status != lp::Status::Optimal) {
        throw InvalidArgument("hpolytope: constraints do not describe a bounded body");
      }
    }
  }
  impl->rep = HPolytope{std::move(A), std::move(b)};
  return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::vpolytope(Mat V) {
  if (V.rows() == 0 || V.cols() == 0) throw InvalidArgument("vpolytope: empty vertex list");
  const auto n = V.cols();
  require_negation_closed(V, "vpolytope");
  if (Eigen::FullPivLU<Mat>(V).rank() < n) {
    throw InvalidArgument("vpolytope: vertices do not span R^n (degenerate body)");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(n);
  if (n <= kMaxEnumDim) {
    Mat facets = enumerate_vertices(V);
    impl->vertices = enumerate_vertices(facets);
    impl->facets = std::move(facets);
  }
  impl->rep = VPolytope{std::move(V)};
  return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::symmetric_hull(const Mat& points) {
  Mat V(points.rows() * 2, points.cols());
  V.topRows(points.rows()) = points;
  V.bottomRows(points.rows()) = -points;
  return vpolytope(unique_rows(V, 1e-14));
}

ConvexBody ConvexBody::ellipsoid(Mat Q) {
  if (Q.rows() != Q.cols() || Q.rows() == 0) throw InvalidArgument("ellipsoid: Q must be square");
  if ((Q - Q.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + Q.cwiseAbs().maxCoeff())) {
    throw InvalidArgument("ellipsoid: Q must be symmetric");
  }
  Eigen::LLT<Mat> llt(Q);
  if (llt.info() != Eigen::Success) throw InvalidArgument("ellipsoid: Q must be positive definite");
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  if (eig.eigenvalues().minCoeff() <= 1e-14 * eig.eigenvalues().maxCoeff()) {
    throw InvalidArgument("ellipsoid: Q must be positive definite");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(Q.rows());
  impl->inverse = llt.solve(Mat::Identity(Q.rows(), Q.cols()));
  impl->inverse = 0.5 * (impl->inverse + impl->inverse.transpose()).eval();
  impl->abs_det = std::sqrt(eig.eigenvalues().prod());
  impl->rep = Ellipsoid{std::move(Q)};
  return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::lp_ball(double p, Vec r) {
  if (!(p >= 1.0)) throw InvalidArgument("lpball: p must be in [1, inf]");
  if (r.size() == 0 || (r.array() <= 0.0).any() || !r.allFinite()) {
    throw InvalidArgument("lpball: radii must be positive and finite");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = static_cast<int>(r.size());
  LpBall ball{p, std::move(r)};
  if ((p == 1.0 || is_inf(p)) && impl->n <= kMaxEnumDim) {
    impl->vertices = lp_ball_vertices(ball);
    impl->facets = lp_ball_facets(ball);
  }
  impl->rep = std::move(ball);
  return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::linear_image(Mat M, const ConvexBody& inner) {
  if (M.rows() != M.cols() || M.rows() != inner.dim()) {
    throw InvalidArgument("linear_image: M must be n x n matching the inner body");
  }
  Eigen::FullPivLU<Mat> lu(M);
  const double scale = M.cwiseAbs().maxCoeff();
  if (scale == 0.0 || lu.rank() < M.rows() || std::abs(lu.determinant()) <= 1e-12 * std::pow(scale, M.rows())) {
    throw InvalidArgument("linear_image: matrix is singular");
  }
  auto impl = std::make_shared<Impl>();
  impl->n = inner.dim();
  impl->inverse = lu.inverse();
  impl->abs_det = std::abs(lu.determinant());
  if (auto f = inner.facets()) impl->facets = (*f) * impl->inverse;
  if (auto v = inner.vertices()) impl->vertices = (*v) * M.transpose();
  impl->rep = LinearImage{std::move(M), inner};
  return ConvexBody(std::move(impl));
}

ConvexBody ConvexBody::euclidean_ball(int n, double radius) {
  return ellipsoid(Mat::Identity(n, n) / (radius * radius));
}

int ConvexBody::dim() const { return impl_->n; }

BodyKind ConvexBody::kind() const { return static_cast<BodyKind>(impl_->rep.index()); }

double ConvexBody::gauge(const Vec& x) const {
  if (x.size() != impl_->n) throw InvalidArgument("gauge: dimension mismatch");
  const Impl& b = *impl_;
  switch (kind()) {
    case BodyKind::HPolytope: {
      const auto& h = std::get<HPolytope>(b.rep);
      return std::max(0.0, (h.A * x).cwiseQuotient(h.b).maxCoeff());
    }
    case BodyKind::VPolytope:
      if (b.facets) return std::max(0.0, ((*b.facets) * x).maxCoeff());
      return vpolytope_gauge_lp(std::get<VPolytope>(b.rep).V, x);
    case BodyKind::Ellipsoid:
      return std::sqrt(std::max(0.0, x.dot(std::get<Ellipsoid>(b.rep).Q * x)));
    case BodyKind::LpBall: {
      const auto& l = std::get<LpBall>(b.rep);
      return lp_norm(x.cwiseQuotient(l.r), l.p);
    }
    case BodyKind::LinearImage:
      return std::get<LinearImage>(b.rep).inner.gauge(b.inverse * x);
  }
  return 0.0;
}

double ConvexBody::support(const Vec& y) const {
  if (y.size() != impl_->n) throw InvalidArgument("support: dimension mismatch");
  const Impl& b = *impl_;
  switch (kind()) {
    case BodyKind::HPolytope: {
      if (b.vertices) return std::max(0.0, ((*b.vertices) * y).maxCoeff());
      const auto& h = std::get<HPolytope>(b.rep);
      return hpolytope_support_lp(h.A, h.b, y);
    }
    case BodyKind::VPolytope:
      return std::max(0.0, (std::get<VPolytope>(b.rep).V * y).maxCoeff());
    case BodyKind::Ellipsoid:
      return std::sqrt(std::max(0.0, y.dot(b.inverse * y)));
    case BodyKind::LpBall: {
      const auto& l = std::get<LpBall>(b.rep);
      return lp_norm(y.cwiseProduct(l.r), dual_exponent(l.p));
    }
    case BodyKind::LinearImage: {
      const auto& li = std::get<LinearImage>(b.rep);
      return li.inner.support(li.M.transpose() * y);
    }
  }
  return 0.0;
}

ConvexBody ConvexBody::polar() const {
  const Impl& b = *impl_;
  switch (kind()) {
    case BodyKind::HPolytope: {
      const auto& h = std::get<HPolytope>(b.rep);
      return vpolytope(h.b.cwiseInverse().asDiagonal() * h.A);
    }
    case BodyKind::VPolytope: {
      const auto& v = std::get<VPolytope>(b.rep);
      return hpolytope(v.V, Vec::Ones(v.V.rows()));
    }
    case BodyKind::Ellipsoid:
      return ellipsoid(b.inverse);
    case BodyKind::LpBall: {
      const auto& l = std::get<LpBall>(b.rep);
      return lp_ball(dual_exponent(l.p), l.r.cwiseInverse());
    }
    case BodyKind::LinearImage: {
      const auto& li = std::get<LinearImage>(b.rep);
      return linear_image(b.inverse.transpose(), li.inner.polar());
    }
  }
  throw Error("polar: unknown body kind");
}

ConvexBody ConvexBody::scaled(double s) const {
  if (!(s > 0.0) || !std::isfinite(s)) throw InvalidArgument("scaled: factor must be positive");
  const Impl& b = *impl_;
  switch (kind()) {
    case BodyKind::HPolytope: {
      const auto& h = std::get<HPolytope>(b.rep);
      return hpolytope(h.A, h.b * s);
    }
    case BodyKind::VPolytope:
      return vpolytope(std::get<VPolytope>(b.rep).V * s);
    case BodyKind::Ellipsoid:
      return ellipsoid(std::get<Ellipsoid>(b.rep).Q / (s * s));
    case BodyKind::LpBall: {
      const auto& l = std::get<LpBall>(b.rep);
      return lp_ball(l.p, l.r * s);
    }
    case BodyKind::LinearImage: {
      const auto& li = std::get<LinearImage>(b.rep);
      return linear_image(li.M * s, li.inner);
    }
  }
  throw Error("scaled: unknown body kind");
}

double ConvexBody::volume() const {
  const Impl& b = *impl_;
  const double n = static_cast<double>(impl_->n);
  switch (kind()) {
    case BodyKind::HPolytope:
    case BodyKind::VPolytope:
      if (impl_->n > 3 || !b.facets || !b.vertices) {
        throw Unsupported("volume: polytopes are supported only for dimension <= 3");
      }
      return polytope_volume(unique_rows(*b.facets, 1e-12), *b.vertices);
    case BodyKind::Ellipsoid: {
      const double unit = std::pow(std::numbers::pi, n / 2.0) / std::tgamma(n / 2.0 + 1.0);
      return unit / b.abs_det;
    }
    case BodyKind::LpBall: {
      const auto& l = std::get<LpBall>(b.rep);
      const double unit = is_inf(l.p) ? std::pow(2.0, n)
                                      : std::pow(2.0 * std::tgamma(1.0 / l.p + 1.0), n) / std::tgamma(n / l.p + 1.0);
      return unit * l.r.prod();
    }
    case BodyKind::LinearImage:
      return b.abs_det * std::get<LinearImage>(b.rep).inner.volume();
  }
  return 0.0;
}

bool ConvexBody::is_polyhedral() const {
  switch (kind()) {
    case BodyKind::HPolytope:
    case BodyKind::VPolytope: return true;
    case BodyKind::Ellipsoid: return false;
    case BodyKind::LpBall: {
      const double p = std::get<LpBall>(impl_->rep).p;
      return p == 1.0 || is_inf(p);
    }
    case BodyKind::LinearImage: return std::get<LinearImage>(impl_->rep).inner.is_polyhedral();
  }
  return false;
}

std::optional<Mat> ConvexBody::facets() const { return impl_->facets; }
std::optional<Mat> ConvexBody::vertices() const { return impl_->vertices; }

Vec ConvexBody::bounding_half_widths() const {
  Vec w(impl_->n);
  for (int i = 0; i < impl_->n; ++i) {
    Vec e = Vec::Zero(impl_->n);
    e(i) = 1.0;
    w(i) = support(e);
  }
  return w;
}

const HPolytope* ConvexBody::as_hpolytope() const { return std::get_if<HPolytope>(&impl_->rep); }
const VPolytope* ConvexBody::as_vpolytope() const { return std::get_if<VPolytope>(&impl_->rep); }
const Ellipsoid* ConvexBody::as_ellipsoid() const { return std::get_if<Ellipsoid>(&impl_->rep); }
const LpBall* ConvexBody::as_lp_ball() const { return std::get_if<LpBall>(&impl_->rep); }
const LinearImage* ConvexBody::as_linear_image() const { return std::get_if<LinearImage>(&impl_->rep); }

bool ConvexBody::same_as(const ConvexBody& other) const {
  if (impl_ == other.impl_) return true;
  if (kind() != other.kind() || dim() != other.dim()) return false;
  auto eq = [](const Mat& a, const Mat& b) { return a.rows() == b.rows() && a.cols() == b.cols() && a == b; };
  switch (kind()) {
    case BodyKind::HPolytope:
      return eq(as_hpolytope()->A, other.as_hpolytope()->A) && eq(as_hpolytope()->b, other.as_hpolytope()->b);
    case BodyKind::VPolytope: return eq(as_vpolytope()->V, other.as_vpolytope()->V);
    case BodyKind::Ellipsoid: return eq(as_ellipsoid()->Q, other.as_ellipsoid()->Q);
    case BodyKind::LpBall:
      return as_lp_ball()->p == other.as_lp_ball()->p && eq(as_lp_ball()->r, other.as_lp_ball()->r);
    case BodyKind::LinearImage:
      return eq(as_linear_image()->M, other.as_linear_image()->M) &&
             as_linear_image()->inner.same_as(other.as_linear_image()->inner);
  }
  return false;
}

std::optional<double> exact_inclusion_radius(const ConvexBody& K, const ConvexBody& T) {
  if (K.dim() != T.dim()) throw InvalidArgument("inclusion radius: dimension mismatch");
  if (K.same_as(T)) return 1.0;
  if (auto v = K.vertices()) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < v->rows(); ++i) r = std::max(r, T.gauge(v->row(i).transpose()));
    return r;
  }
  if (auto f = T.facets()) {
    double r = 0.0;
    for (Eigen::Index i = 0; i < f->rows(); ++i) r = std::max(r, K.support(f->row(i).transpose()));
    return r;
  }
  const auto* ek = K.as_ellipsoid();
  const auto* et = T.as_ellipsoid();
  if (ek && et) {
    Eigen::GeneralizedSelfAdjointEigenSolver<Mat> ges(et->Q, ek->Q);
    return std::sqrt(std::max(0.0, ges.eigenvalues().maxCoeff()));
  }
  const auto* lk = K.as_lp_ball();
  const auto* lt = T.as_lp_ball();
  if (lk && lt && lk->p == lt->p) return lk->r.cwiseQuotient(lt->r).maxCoeff();
  const auto* ik = K.as_linear_image();
  const auto* it = T.as_linear_image();
  if (ik && it && ik->M == it->M) return exact_inclusion_radius(ik->inner, it->inner);
  return std::nullopt;
}

MveeResult mvee(const ConvexBody& polytope, double tol, int max_iter) {
  auto verts = polytope.vertices();
  auto facets = polytope.facets();
  if (!verts || !facets) throw Unsupported("mvee: needs a polytope in dimension <= 4");
  const Mat& P = *verts;
  const auto n = P.cols();
  const auto m = P.rows();
  if (Eigen::FullPivLU<Mat>(P).rank() < n) throw InvalidArgument("mvee: vertices do not span R^n");
  Vec u = Vec::Constant(m, 1.0 / static_cast<double>(m));
  Mat Xinv;
  Vec lev(m);
  int it = 0;
  const double dn = static_cast<double>(n);
  for (; it < max_iter; ++it) {
    Mat X = P.transpose() * u.asDiagonal() * P;
    Xinv = X.ldlt().solve(Mat::Identity(n, n));
    for (Eigen::Index i = 0; i < m; ++i) lev(i) = P.row(i) * Xinv * P.row(i).transpose();
    Eigen::Index j = 0;
    const double mx = lev.maxCoeff(&j);
    if (mx <= dn * (1.0 + tol)) break;
    const double step = (mx - dn) / (dn * (mx - 1.0));
    u *= (1.0 - step);
    u(j) += step;
  }
  Mat X = P.transpose() * u.asDiagonal() * P;
  Xinv = X.ldlt().solve(Mat::Identity(n, n));
  for (Eigen::Index i = 0; i < m; ++i) lev(i) = P.row(i) * Xinv * P.row(i).transpose();
  Mat Q = Xinv / lev.maxCoeff();
  Q = 0.5 * (Q + Q.transpose()).eval();
  MveeResult out{ConvexBody::ellipsoid(Q), Q, 0.0, it};
  const Mat Qinv = Q.inverse();
  for (Eigen::Index f = 0; f < facets->rows(); ++f) {
    const Vec g = facets->row(f).transpose();
    out.john_ratio = std::max(out.john_ratio, std::sqrt(g.dot(Qinv * g)));
  }
  return out;
}

}  // namespace polarkit
