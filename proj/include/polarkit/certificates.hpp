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

#include "polarkit/body_io.hpp"
#include "polarkit/covering.hpp"
#include "polarkit/separation.hpp"

#include <string>
#include <vector>

namespace polarkit {

/// Self-contained certificate documents: both bodies, the claim, and every
/// witness, so a document can be re-checked with nothing else at hand.
///
///   {"format":"polarkit-certificate","version":1,"kind":"covering"|"entropy"|"separation",
///    "K":{body},"T":{body}, ...claim and witness fields...}
json covering_certificate_json(const ConvexBody& K, const ConvexBody& T, double rho, bool restricted,
                               const CountBracket& bracket);
json entropy_certificate_json(const ConvexBody& K, const ConvexBody& T, const EntropyBracket& bracket);
json separation_certificate_json(const ConvexBody& K, const ConvexBody& T, const SeparationCertificate& cert);

struct VerifyReport {
  bool ok = false;
  std::string kind;
  /// Human-readable statement of what was (or was not) confirmed.
  std::string claim;
  /// First refuted check; empty when ok.
  std::string detail;
};

/// Re-checks a certificate document from scratch. Malformed documents are
/// refuted (ok = false) rather than thrown, with the parse problem as detail.
VerifyReport verify_certificate(const json& doc, const Tolerances& tol = {});

}  // namespace polarkit
