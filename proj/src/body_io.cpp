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

#include "polarkit/body_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace polarkit {

json vec_to_json(const Vec& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

Vec vec_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a JSON array of numbers");
  Vec v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    if (!j[i].is_number()) throw InvalidArgument("expected a JSON array of numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

json mat_to_json(const Mat& m) {
  json a = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) a.push_back(vec_to_json(m.row(r).transpose()));
  return a;
}

Mat mat_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw InvalidArgument("expected a non-empty JSON matrix");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    Vec row = vec_from_json(j[r]);
    if (row.size() != cols) throw InvalidArgument("ragged JSON matrix");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

json points_to_json(const PointList& pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back(vec_to_json(p));
  return a;
}

PointList points_from_json(const json& j) {
  if (!j.is_array()) throw InvalidArgument("expected a JSON array of points");
  PointList pts;
  for (const auto& e : j) pts.push_back(vec_from_json(e));
  return pts;
}

json body_to_json(const ConvexBody& body) {
  json j;
  j["kind"] = to_string(body.kind());
  if (const auto* h = body.as_hpolytope()) {
    j["A"] = mat_to_json(h->A);
    j["b"] = vec_to_json(h->b);
  } else if (const auto* v = body.as_vpolytope()) {
    j["V"] = mat_to_json(v->V);
  } else if (const auto* e = body.as_ellipsoid()) {
    j["Q"] = mat_to_json(e->Q);
  } else if (const auto* l = body.as_lp_ball()) {
    if (std::isinf(l->p)) {
      j["p"] = "inf";
    } else {
      j["p"] = l->p;
    }
    j["r"] = vec_to_json(l->r);
  } else if (const auto* li = body.as_linear_image()) {
    j["M"] = mat_to_json(li->M);
    j["inner"] = body_to_json(li->inner);
  }
  return j;
}

ConvexBody body_from_json(const json& j) {
  if (!j.is_object() || !j.contains("kind")) throw InvalidArgument("body: missing \"kind\"");
  const auto kind = j.at("kind").get<std::string>();
  auto field = [&](const char* name) -> const json& {
    if (!j.contains(name)) throw InvalidArgument("body " + kind + ": missing field \"" + name + "\"");
    return j.at(name);
  };
  if (kind == "hpolytope") return ConvexBody::hpolytope(mat_from_json(field("A")), vec_from_json(field("b")));
  if (kind == "vpolytope") return ConvexBody::vpolytope(mat_from_json(field("V")));
  if (kind == "ellipsoid") return ConvexBody::ellipsoid(mat_from_json(field("Q")));
  if (kind == "lpball") {
    const auto& p = field("p");
    double pv = 0.0;
    if (p.is_string()) {
      if (p.get<std::string>() != "inf") throw InvalidArgument("lpball: p must be a number or \"inf\"");
      pv = ConvexBody::kInf;
    } else {
      pv = p.get<double>();
    }
    return ConvexBody::lp_ball(pv, vec_from_json(field("r")));
  }
  if (kind == "linear_image") {
    return ConvexBody::linear_image(mat_from_json(field("M")), body_from_json(field("inner")));
  }
  throw InvalidArgument("body: unknown kind \"" + kind + "\"");
}

ConvexBody builtin_body(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  auto bad = [&]() { return InvalidArgument("unknown built-in body \"" + spec + "\""); };
  if (parts.size() < 2) throw bad();
  int n = 0;
  try {
    n = std::stoi(parts[1]);
  } catch (const std::exception&) {
    throw bad();
  }
  if (n < 1) throw bad();
  const auto& name = parts[0];
  if (name == "l1" && parts.size() == 2) return ConvexBody::unit_lp_ball(n, 1.0);
  if (name == "linf" && parts.size() == 2) return ConvexBody::unit_lp_ball(n, ConvexBody::kInf);
  if (name == "ball" && parts.size() == 2) return ConvexBody::euclidean_ball(n);
  if (name == "box" && parts.size() == 3) return ConvexBody::cube(n, std::stod(parts[2]));
  if (name == "lp" && parts.size() == 3) {
    const double p = parts[2] == "inf" ? ConvexBody::kInf : std::stod(parts[2]);
    return ConvexBody::unit_lp_ball(n, p);
  }
  throw bad();
}

ConvexBody load_body(const std::string& name_or_path) {
  if (name_or_path.find(':') != std::string::npos) {
    std::ifstream probe(name_or_path);
    if (!probe) return builtin_body(name_or_path);
  }
  std::ifstream in(name_or_path);
  if (!in) throw InvalidArgument("cannot open body file \"" + name_or_path + "\"");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw InvalidArgument("body file \"" + name_or_path + "\": " + e.what());
  }
  return body_from_json(j);
}

}  // namespace polarkit
