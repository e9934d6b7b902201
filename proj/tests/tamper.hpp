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

// Random corruptions of certificate documents. Every operation leaves a
// claim that its witnesses cannot support, so verify must refute all of them.

#include "polarkit/certificates.hpp"

#include <random>
#include <string>
#include <utility>

namespace polarkit::testing {

inline std::pair<json, std::string> tamper(const json& doc, std::mt19937_64& rng) {
  json t = doc;
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  const auto K = body_from_json(doc.at("K"));
  auto outside = [&](const json& p) {
    Vec x = vec_from_json(p);
    const double g = K.gauge(x);
    if (!(g > 1e-9)) x = Vec::Ones(x.size());
    return vec_to_json(3.0 * x / std::max(K.gauge(x), 1e-12));
  };
  const std::string kind = doc.at("kind");
  for (;;) {
    t = doc;
    switch (pick(kind == "separation" ? 9 : 8) + (kind == "separation" ? 100 : kind == "entropy" ? 200 : 0)) {
      // covering
      case 0:
        t["lo"] = doc["hi"].is_null() ? json(1000000) : json(doc["hi"].get<std::size_t>() + 1);
        return {t, "lo above hi"};
      case 1:
        if (doc["packing"].is_null() || doc["packing"]["points"].size() < 2) continue;
        {
          const std::size_t n = doc["packing"]["points"].size(), i = pick(n), j = (i + 1 + pick(n - 1)) % n;
          t["packing"]["points"][j] = doc["packing"]["points"][i];
        }
        return {t, "packing points collide"};
      case 2:
        if (doc["packing"].is_null() || doc["packing"]["points"].empty()) continue;
        {
          const std::size_t i = pick(doc["packing"]["points"].size());
          t["packing"]["points"][i] = outside(doc["packing"]["points"][i]);
        }
        return {t, "packing point outside K"};
      case 3:
        if (doc["cover"].is_null() || doc["cover"]["centers"].size() < 2) continue;
        t["hi"] = doc["cover"]["centers"].size() - 1;
        t["lo"] = std::min(doc["lo"].get<std::size_t>(), t["hi"].get<std::size_t>());
        return {t, "hi below the number of centres"};
      case 4:
        if (doc["cover"].is_null()) continue;
        t["rho"] = doc["rho"].get<double>() * 0.5;
        return {t, "claim at another scale"};
      case 5:
        t["lo"] = std::max<std::size_t>(doc["lo"].get<std::size_t>(), doc["packing"].is_null() ? 1 : doc["packing"]["points"].size()) + 1000000000;
        t["hi"] = nullptr;
        t["cover"] = nullptr;
        return {t, "lo beyond every lower witness"};
      case 6:
        if (doc["cover"].is_null()) continue;
        t["cover"] = nullptr;
        return {t, "cover witness removed"};
      case 7:
        t["kind"] = "no-such-kind";
        return {t, "unknown kind"};
      // separation
      case 100:
      case 101:
        if (doc["points"].size() < 2) continue;
        {
          const std::size_t j = 1 + pick(doc["points"].size() - 1);
          t["points"][j] = doc["points"][j - 1];
        }
        return {t, "point repeated"};
      case 102:
      case 103:
        if (doc["points"].size() < 2) continue;
        {
          const std::size_t j = 1 + pick(doc["points"].size() - 1);
          for (auto& v : t["witnesses"][j]) v = -v.get<double>();
        }
        return {t, "witness negated"};
      case 104:
        {
          const std::size_t j = pick(doc["points"].size());
          t["points"][j] = outside(doc["points"][j]);
        }
        return {t, "point outside K"};
      case 105:
        if (doc["points"].size() < 2) continue;
        t["witnesses"].erase(t["witnesses"].size() - 1);
        return {t, "witness missing"};
      case 106:
        if (doc["points"].size() < 2) continue;
        {
          const std::size_t j = 1 + pick(doc["points"].size() - 1);
          for (auto& v : t["witnesses"][j]) v = 4.0 * v.get<double>();
        }
        return {t, "witness outside the polar of T"};
      case 107:
        t["points"] = json::array();
        t["witnesses"] = json::array();
        return {t, "empty sequence"};
      case 108:
        t.erase("T");
        return {t, "body missing"};
      // entropy
      case 200:
        if (doc["hi"].is_null()) continue;
        t["hi"] = doc["hi"].get<double>() * 0.5;
        t["lo"] = std::min(doc["lo"].get<double>(), t["hi"].get<double>());
        return {t, "hi moved off its cover"};
      case 201:
        if (!(doc["lo"].get<double>() > 0)) continue;
        t["lo"] = std::min(doc["lo"].get<double>() * 2.0, doc["hi"].is_null() ? 1e300 : doc["hi"].get<double>());
        if (t["lo"] == doc["lo"]) continue;
        return {t, "lo moved off its packing"};
      case 202:
        if (doc["cover"].is_null()) continue;
        t["k"] = 0;
        if (doc["cover"]["centers"].size() < 2) continue;
        t["lo"] = 0.0;
        return {t, "cover larger than 2^k"};
      case 203:
        if (doc["packing"].is_null() || doc["packing"]["points"].size() < 2) continue;
        {
          const std::size_t n = doc["packing"]["points"].size(), i = pick(n), j = (i + 1 + pick(n - 1)) % n;
          t["packing"]["points"][j] = doc["packing"]["points"][i];
          if (!(doc["lo"].get<double>() > 0)) continue;
        }
        return {t, "packing points collide"};
      case 204:
        if (doc["hi"].is_null()) continue;
        t["cover"] = nullptr;
        return {t, "cover witness removed"};
      case 205:
        t["lo"] = -1.0;
        return {t, "negative lo"};
      case 206:
        t["version"] = 99;
        return {t, "unknown version"};
      case 207:
        t["format"] = "something-else";
        return {t, "wrong format"};
      default:
        continue;
    }
  }
}

}  // namespace polarkit::testing
