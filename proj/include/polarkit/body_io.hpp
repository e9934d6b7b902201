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

#include <json.hpp>

#include <string>

namespace polarkit {

using json = nlohmann::json;

/// Body literals:
///   {"kind":"hpolytope","A":[[...],...],"b":[...]}
///   {"kind":"vpolytope","V":[[...],...]}
///   {"kind":"ellipsoid","Q":[[...],...]}
///   {"kind":"lpball","p":2.5,"r":[...]}          (p may be the string "inf")
///   {"kind":"linear_image","M":[[...],...],"inner":{...}}
json body_to_json(const ConvexBody& body);
ConvexBody body_from_json(const json& j);

json vec_to_json(const Vec& v);
Vec vec_from_json(const json& j);
json mat_to_json(const Mat& m);
Mat mat_from_json(const json& j);
json points_to_json(const PointList& pts);
PointList points_from_json(const json& j);

/// Named built-ins: "l1:N", "linf:N", "ball:N", "box:N:HALFWIDTH", "lp:N:P".
ConvexBody builtin_body(const std::string& spec);

/// A body argument is a built-in name when it matches one, otherwise a path to a JSON file.
ConvexBody load_body(const std::string& name_or_path);

}  // namespace polarkit
