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
#include "polarkit/effort.hpp"
#include "polarkit/gamma.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace polarkit::cli {

struct Config {
  Effort effort;
  GammaConvention convention = GammaConvention::Standard;
  /// Output format; empty selects the command's default.
  std::string format;
  /// Primary output path; empty writes to stdout.
  std::string out;
  LogLevel log_level = LogLevel::Warning;
};

/// A shared option: its flag name (also the config-file key), help text, and
/// the environment variable that mirrors it.
struct Setting {
  std::string key;
  std::string help;
  std::string env() const;
};

const std::vector<Setting>& settings();

/// Merges values by precedence: `given` (command line, then environment, as
/// collected by the parser) over the JSON config file over defaults. Unknown
/// file keys and invalid values raise InvalidArgument naming the key.
Config build_config(const std::map<std::string, std::string>& given, const std::optional<json>& file);

/// Reads a JSON config file; raises InvalidArgument when unreadable.
json read_config_file(const std::string& path);

}  // namespace polarkit::cli
