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

#include "polarkit/effort.hpp"

#include <atomic>
#include <iostream>
#include <mutex>
#include <set>

namespace polarkit {
namespace {
std::atomic<int> g_level{static_cast<int>(LogLevel::Warning)};
std::mutex g_mutex;
std::set<std::string> g_seen;  // warnings already printed
}  // namespace

void set_log_level(LogLevel level) { g_level = static_cast<int>(level); }
LogLevel log_level() { return static_cast<LogLevel>(g_level.load()); }

void log_warning(const std::string& message) {
  if (g_level.load() < static_cast<int>(LogLevel::Warning)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  if (!g_seen.insert(message).second) return;
  std::clog << "polarkit: warning: " << message << '\n';
}

void log_info(const std::string& message) {
  if (g_level.load() < static_cast<int>(LogLevel::Info)) return;
  std::lock_guard<std::mutex> lock(g_mutex);
  std::clog << "polarkit: " << message << '\n';
}

}  // namespace polarkit
