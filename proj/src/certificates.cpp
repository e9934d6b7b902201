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

#include "polarkit/certificates.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace polarkit {

namespace {

constexpr const char* kFormat = "polarkit-certificate";
constexpr int kVersion = 1;

json header(const char* kind, const ConvexBody& K, const ConvexBody& T) {
  return json{{"format", kFormat}, {"version", kVersion}, {"kind", kind}, {"K", body_to_json(K)}, {"T", body_to_json(T)}};
}

json count_json(std::size_t v) { return v == kUnknownCount ? json(nullptr) : json(v); }
std::size_t count_from(const json& j) { return j.is_null() ? kUnknownCount : j.get<std::size_t>(); }

json cover_json(const std::optional<CoverCertificate>& c) {
  if (!c) return nullptr;
  return {{"centers", points_to_json(c->centers)},
          {"rho", c->rho},
          {"delta", c->delta},
          {"spacing", vec_to_json(c->spacing)},
          {"restricted", c->restricted}};
}

std::optional<CoverCertificate> cover_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  CoverCertificate c;
  c.centers = points_from_json(j.at("centers"));
  c.rho = j.at("rho").get<double>();
  c.delta = j.at("delta").get<double>();
  c.spacing = vec_from_json(j.at("spacing"));
  c.restricted = j.at("restricted").get<bool>();
  return c;
}

json packing_json(const std::optional<PackingCertificate>& p) {
  if (!p) return nullptr;
  return {{"points", points_to_json(p->points)}, {"rho", p->rho}};
}

std::optional<PackingCertificate> packing_from(const json& j) {
  if (j.is_null()) return std::nullopt;
  PackingCertificate p;
  p.points = points_from_json(j.at("points"));
  p.rho = j.at("rho").get<double>();
  return p;
}

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string count_text(std::size_t v) { return v == kUnknownCount ? "inf" : std::to_string(v); }

// Witnesses must speak about the claimed scale and centre rule, otherwise a
// valid witness for another question could be attached.
std::optional<std::string> mismatch(const CountBracket& b, double rho, bool restricted) {
  if (b.hi_certificate && (b.hi_certificate->rho != rho || b.hi_certificate->restricted != restricted))
    return "cover certificate answers a different scale or centre rule than claimed";
  if (b.lo_certificate && b.lo_certificate->rho != rho)
    return "packing certificate answers a different scale than claimed";
  return std::nullopt;
}

VerifyReport verify_covering(const json& doc, const ConvexBody& K, const ConvexBody& T, const Tolerances& tol) {
  VerifyReport r;
  const double rho = doc.at("rho").get<double>();
  const bool restricted = doc.at("restricted").get<bool>();
  CountBracket b;
  b.lo = doc.at("lo").get<std::size_t>();
  b.hi = count_from(doc.at("hi"));
  b.hi_certificate = cover_from(doc.at("cover"));
  b.lo_certificate = packing_from(doc.at("packing"));
  r.claim = std::string(restricted ? "N'" : "N") + "(K, " + fmt(rho) + " T) in [" + std::to_string(b.lo) + ", " +
            count_text(b.hi) + "]";
  if (!(rho > 0) || !std::isfinite(rho)) {
    r.detail = "rho must be positive";
    return r;
  }
  auto bad = mismatch(b, rho, restricted);
  if (!bad) bad = refute_count_bracket(K, T, b, tol);
  r.ok = !bad;
  if (bad) r.detail = *bad;
  return r;
}

VerifyReport verify_entropy(const json& doc, const ConvexBody& K, const ConvexBody& T, const Tolerances& tol) {
  VerifyReport r;
  const int k = doc.at("k").get<int>();
  const double lo = doc.at("lo").get<double>();
  const double hi = doc.at("hi").is_null() ? std::numeric_limits<double>::infinity() : doc.at("hi").get<double>();
  r.claim = "e_" + std::to_string(k) + "(K, T) in [" + fmt(lo) + ", " + fmt(hi) + "]";
  if (k < 0 || k > 62) {
    r.detail = "k must lie in [0, 62]";
    return r;
  }
  if (!(lo >= 0) || !(lo <= hi)) {
    r.detail = "need 0 <= lo <= hi";
    return r;
  }
  const std::size_t budget = std::size_t{1} << k;
  if (std::isfinite(hi)) {
    // Upper side: a certified cover by at most 2^k translates of hi T.
    CountBracket up;
    up.hi_certificate = cover_from(doc.at("cover"));
    if (!up.hi_certificate) {
      r.detail = "finite hi without a cover certificate";
      return r;
    }
    up.hi = up.hi_certificate->centers.size();
    up.lo = 1;
    if (up.hi > budget) {
      r.detail = "cover uses " + std::to_string(up.hi) + " centres, more than 2^k";
      return r;
    }
    auto bad = mismatch(up, hi, false);
    if (!bad) bad = refute_count_bracket(K, T, up, tol);
    if (bad) {
      r.detail = "upper side: " + *bad;
      return r;
    }
  }
  if (lo > 0) {
    // Lower side: N(K, lo T) > 2^k, from the packing or the volume ratio at lo.
    CountBracket down;
    down.lo = budget + 1;
    down.hi = kUnknownCount;
    down.lo_certificate = packing_from(doc.at("packing"));
    if (!down.lo_certificate) {
      r.detail = "positive lo without a packing certificate";
      return r;
    }
    auto bad = mismatch(down, lo, false);
    if (!bad) bad = refute_count_bracket(K, T, down, tol);
    if (bad) {
      r.detail = "lower side: " + *bad;
      return r;
    }
  }
  r.ok = true;
  return r;
}

VerifyReport verify_separation_doc(const json& doc, const ConvexBody& K, const ConvexBody& T, const Tolerances& tol) {
  VerifyReport r;
  SeparationCertificate c;
  c.scale = doc.at("scale").get<double>();
  c.seed = doc.at("seed").get<std::uint64_t>();
  c.points = points_from_json(doc.at("points"));
  for (const auto& w : doc.at("witnesses")) c.witnesses.push_back(w.empty() ? Vec() : vec_from_json(w));
  r.claim = "M^(K, " + fmt(c.scale) + " T) >= " + std::to_string(c.points.size());
  if (auto bad = refute_separation(K, T, c, tol)) {
    r.detail = *bad;
    return r;
  }
  r.ok = true;
  return r;
}

}  // namespace

json covering_certificate_json(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted,
                               const CountBracket& bracket) {
  json j = header("covering", K, T);
  j["rho"] = rho;
  j["restricted"] = restricted;
  j["lo"] = bracket.lo;
  j["hi"] = count_json(bracket.hi);
  j["flags"] = bracket.flags;
  j["cover"] = cover_json(bracket.hi_certificate);
  j["packing"] = packing_json(bracket.lo_certificate);
  return j;
}


json entropy_certificate_json(const ConvexBody& K, const ConvexBody& T, const EntropyBracket& bracket) {
  json j = header("entropy", K, T);
  j["k"] = bracket.k;
  j["lo"] = bracket.lo;
  j["hi"] = std::isfinite(bracket.hi) ? json(bracket.hi) : json(nullptr);
  j["flags"] = bracket.flags;
  j["cover"] = cover_json(bracket.hi_certificate);
  // The lower side may rest on the volume ratio alone; an empty packing at
  // scale lo still tells the verifier where to look.
  auto packing = bracket.lo_certificate;
  if (!packing && bracket.lo > 0) packing = PackingCertificate{{}, bracket.lo};
  j["packing"] = packing_json(packing);
  return j;
}

json separation_certificate_json(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert) {
  json j = header("separation", K, T);
  j["scale"] = cert.scale;
  j["seed"] = cert.seed;
  j["points"] = points_to_json(cert.points);
  json w = json::array();
  for (const auto& v : cert.witnesses) w.push_back(v.size() == 0 ? json::array() : vec_to_json(v));
  j["witnesses"] = w;
  return j;
}

VerifyReport verify_certificate(const json& doc, const Tolerances& tol) {
  VerifyReport r;
  try {
    if (!doc.is_object() || doc.value("format", "") != kFormat) {
      r.detail = "not a polarkit certificate document";
      return r;
    }
    if (doc.at("version").get<int>() != kVersion) {
      r.detail = "unsupported certificate version";
      return r;
    }
    r.kind = doc.at("kind").get<std::string>();
    const auto K = body_from_json(doc.at("K"));
    const auto T = body_from_json(doc.at("T"));
    if (K.dim() != T.dim()) {
      r.detail = "K and T have different dimensions";
      return r;
    }
    VerifyReport out;
    if (r.kind == "covering") {
      out = verify_covering(doc, K, T, tol);
    } else if (r.kind == "entropy") {
      out = verify_entropy(doc, K, T, tol);
    } else if (r.kind == "separation") {
      out = verify_separation_doc(doc, K, T, tol);
    } else {
      r.detail = "unknown certificate kind '" + r.kind + "'";
      return r;
    }
    out.kind = r.kind;
    return out;
  } catch (const std::exception& e) {
    r.ok = false;
    r.detail = std::string("malformed document: ") + e.what();
    return r;
  }
}

}  // namespace polarkit
