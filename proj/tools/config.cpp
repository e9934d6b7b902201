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

#include "config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

namespace polarkit::cli {

namespace {

using Apply = std::function<void(Config&, const std::string&)>;

[[noreturn]] void bad(const std::string& key, const std::string& why, const std::string& text) {
  throw InvalidArgument(key + ": " + why + " (got \"" + text + "\")");
}

unsigned long long parse_unsigned(const std::string& key, const std::string& text, unsigned long long min_value) {
  std::size_t used = 0;
  unsigned long long v = 0;
  if (text.empty() || text[0] == '-' || text[0] == '+') bad(key, "expected a nonnegative integer", text);
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    bad(key, "expected a nonnegative integer", text);
  }
  if (used != text.size()) bad(key, "expected a nonnegative integer", text);
  if (v < min_value) bad(key, "must be at least " + std::to_string(min_value), text);
  return v;
}

double parse_positive(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    bad(key, "expected a number", text);
  }
  if (used != text.size()) bad(key, "expected a number", text);
  if (!(v > 0) || !std::isfinite(v)) bad(key, "must be positive", text);
  return v;
}

template <typename T>
Apply count_field(T Effort::*field, unsigned long long min_value, unsigned long long max_value) {
  return [=](Config& c, const std::string& text) {
    // The key is prefixed by build_config.
    const auto v = parse_unsigned("", text, min_value);
    if (v > max_value) throw InvalidArgument("value too large (got \"" + text + "\")");
    c.effort.*field = static_cast<T>(v);
  };
}

struct Entry {
  Setting setting;
  Apply apply;
};

const std::vector<Entry>& entries() {
  static const std::vector<Entry> table = [] {
    constexpr auto kIntMax = static_cast<unsigned long long>(std::numeric_limits<int>::max());
    constexpr auto kSizeMax = static_cast<unsigned long long>(std::numeric_limits<std::size_t>::max());
    std::vector<Entry> t;
    auto add = [&](std::string key, std::string help, Apply apply) {
      t.push_back({{std::move(key), std::move(help)}, std::move(apply)});
    };
    add("seed", "random seed (default 0)", [](Config& c, const std::string& s) {
      c.effort.seed = parse_unsigned("seed", s, 0);
    });
    add("threads", "worker threads (default 1)", count_field(&Effort::threads, 1, 1024));
    add("bisect-tol", "relative width at which entropy bisection stops (default 0.05)",
        [](Config& c, const std::string& s) { c.effort.bisect_tol = parse_positive("bisect-tol", s); });
    add("max-bisect-steps", "bisection step cap (default 40)", count_field(&Effort::max_bisect_steps, 1, kIntMax));
    add("eta", "relative slack in inequality checks (default 1e-6)",
        [](Config& c, const std::string& s) { c.effort.tol.eta = parse_positive("eta", s); });
    add("abs-tol", "absolute tolerance of geometric tests (default 1e-9)",
        [](Config& c, const std::string& s) { c.effort.tol.abs = parse_positive("abs-tol", s); });
    add("grid-budget", "largest grid or cell count per step (default 2000000)",
        count_field(&Effort::grid_budget, 1, kSizeMax));
    add("packing-exact-cutoff", "exact packing up to this many candidates (default 400)",
        count_field(&Effort::packing_exact_cutoff, 0, kSizeMax));
    add("cover-exact-elements", "exact set cover up to this many elements (default 60)",
        count_field(&Effort::cover_exact_elements, 0, kSizeMax));
    add("cover-exact-candidates", "exact set cover up to this many candidates (default 400)",
        count_field(&Effort::cover_exact_candidates, 0, kSizeMax));
    add("exact-node-budget", "branch-and-bound node cap (default 200000)",
        count_field(&Effort::exact_node_budget, 1, kSizeMax));
    add("pair-budget", "candidate x template work cap per cover level (default 20000000)",
        count_field(&Effort::pair_budget, 1, kSizeMax));
    add("finest-level", "finest cover lattice level (default 6)", count_field(&Effort::finest_level, 0, 20));
    add("refine-restarts", "cover refinement restarts, 0 disables (default 8)",
        count_field(&Effort::refine_restarts, 0, kIntMax));
    add("refine-iterations", "iterations per refinement restart (default 40)",
        count_field(&Effort::refine_iterations, 1, kIntMax));
    add("restarts", "separation greedy restarts (default 16)", count_field(&Effort::restarts, 1, kIntMax));
    add("convention", "admissible-sequence convention: standard or literal (default standard)",
        [](Config& c, const std::string& s) {
          try {
            c.convention = parse_convention(s);
          } catch (const std::exception&) {
            bad("convention", "expected standard or literal", s);
          }
        });
    add("format", "output format: text, csv, json or svg (command dependent)", [](Config& c, const std::string& s) {
      if (s != "text" && s != "csv" && s != "json" && s != "svg") bad("format", "expected text, csv, json or svg", s);
      c.format = s;
    });
    add("out", "write the primary output to this file instead of stdout",
        [](Config& c, const std::string& s) { c.out = s; });
    add("log-level", "quiet, warning or info (default warning)", [](Config& c, const std::string& s) {
      if (s == "quiet") c.log_level = LogLevel::Quiet;
      else if (s == "warning") c.log_level = LogLevel::Warning;
      else if (s == "info") c.log_level = LogLevel::Info;
      else bad("log-level", "expected quiet, warning or info", s);
    });
    return t;
  }();
  return table;
}

// Config files may hold numbers, strings or booleans; all go through the
// same text parser as the command line.
std::string scalar_text(const std::string& key, const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_unsigned()) return std::to_string(v.get<unsigned long long>());
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  if (v.is_number_float()) {
    std::ostringstream out;
    out.precision(17);
    out << v.get<double>();
    return out.str();
  }
  throw InvalidArgument(key + ": expected a number or string in the config file");
}

}  // namespace

std::string Setting::env() const {
  std::string name = "POLARKIT_";
  for (char ch : key) name += ch == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
  return name;
}

const std::vector<Setting>& settings() {
  static const std::vector<Setting> list = [] {
    std::vector<Setting> s;
    for (const auto& e : entries()) s.push_back(e.setting);
    return s;
  }();
  return list;
}

Config build_config(const std::map<std::string, std::string>& given, const std::optional<json>& file) {
  Config c;
  auto apply = [](const Entry& e, Config& cfg, const std::string& text) {
    try {
      e.apply(cfg, text);
    } catch (const InvalidArgument& ex) {
      const std::string msg = ex.what();
      // Messages from shared parsers may lack the key.
      if (msg.rfind(e.setting.key + ":", 0) == 0) throw;
      throw InvalidArgument(e.setting.key + ": " + (msg.rfind(": ", 0) == 0 ? msg.substr(2) : msg));
    }
  };
  if (file) {
    if (!file->is_object()) throw InvalidArgument("config file: expected a JSON object");
    for (const auto& [key, value] : file->items()) {
      const auto it = std::find_if(entries().begin(), entries().end(),
                                   [&](const Entry& e) { return e.setting.key == key; });
      if (it == entries().end()) throw InvalidArgument("config file: unknown key \"" + key + "\"");
      if (!given.count(key)) apply(*it, c, scalar_text(key, value));
    }
  }
  for (const auto& [key, text] : given) {
    const auto it =
        std::find_if(entries().begin(), entries().end(), [&](const Entry& e) { return e.setting.key == key; });
    if (it == entries().end()) throw InvalidArgument("unknown setting \"" + key + "\"");
    apply(*it, c, text);
  }
  return c;
}

json read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("config: cannot read \"" + path + "\"");
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw InvalidArgument("config: \"" + path + "\" is not valid JSON: " + e.what());
  }
}

}  // namespace polarkit::cli
