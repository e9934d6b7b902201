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

#include "polarkit/combinatorics.hpp"
#include "polarkit/common.hpp"

#include <doctest.h>

#include <random>

using namespace polarkit;
using namespace polarkit::combinatorics;

namespace {

bool covers(const SetCover& inst, const std::vector<std::size_t>& chosen) {
  std::vector<char> hit(inst.num_elements, 0);
  for (auto s : chosen)
    for (auto e : inst.sets[s]) hit[e] = 1;
  return std::all_of(hit.begin(), hit.end(), [](char c) { return c != 0; });
}

std::size_t brute_cover(const SetCover& inst) {
  const std::size_t S = inst.sets.size();
  std::size_t best = S + 1;
  for (std::uint32_t mask = 0; mask < (1u << S); ++mask) {
    std::vector<std::size_t> chosen;
    for (std::size_t s = 0; s < S; ++s)
      if (mask >> s & 1) chosen.push_back(s);
    if (chosen.size() < best && covers(inst, chosen)) best = chosen.size();
  }
  return best;
}

std::size_t brute_mis(const ConflictGraph& g) {
  const std::size_t n = g.size();
  std::size_t best = 0;
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i)
      for (std::size_t j = i + 1; j < n && ok; ++j)
        if ((mask >> i & 1) && (mask >> j & 1) && g[i].test(j)) ok = false;
    if (ok) best = std::max<std::size_t>(best, std::popcount(mask));
  }
  return best;
}

}  // namespace

TEST_CASE("bitset basics") {
  Bitset b(130);
  b.set(0);
  b.set(64);
  b.set(129);
  CHECK(b.count() == 3);
  CHECK(b.next(1) == 64);
  CHECK(b.next(65) == 129);
  b.reset(129);
  CHECK(b.next(65) == 130);
  Bitset all(130);
  all.set_all();
  CHECK(all.count() == 130);
  CHECK(b.is_subset_of(all));
  CHECK(b.count_and(all) == 2);
}

TEST_CASE("greedy cover picks largest sets and lowest index on ties") {
  SetCover inst{6, {{0, 1}, {0, 1, 2}, {3, 4, 5}, {2, 3}, {5}}};
  const auto chosen = greedy_cover(inst);
  CHECK(chosen == std::vector<std::size_t>{1, 2});
  SetCover bad{2, {{0}}};
  CHECK_THROWS_AS(greedy_cover(bad), InvalidArgument);
}

TEST_CASE("prune drops redundant sets") {
  SetCover inst{3, {{0}, {1}, {2}, {0, 1, 2}}};
  CHECK(prune_redundant(inst, {0, 1, 2, 3}) == std::vector<std::size_t>{0, 1, 2});
  CHECK(prune_redundant(inst, {3, 0}) == std::vector<std::size_t>{3});
}

TEST_CASE("exact cover beats greedy on the classic trap") {
  // Greedy takes the 8-element middle set, then needs two more; optimum is 2.
  SetCover inst{14, {}};
  inst.sets.push_back({0, 1, 2, 3, 4, 5, 6});
  inst.sets.push_back({7, 8, 9, 10, 11, 12, 13});
  inst.sets.push_back({0, 1, 2, 3, 7, 8, 9, 10});
  inst.sets.push_back({4, 5, 11, 12});
  inst.sets.push_back({6, 13});
  const auto g = greedy_cover(inst);
  CHECK(g.size() == 3);
  const auto r = exact_cover(inst, g, 60, 400, 100000);
  CHECK(r.attempted);
  CHECK(r.optimal);
  CHECK(r.chosen.size() == 2);
  CHECK(covers(inst, r.chosen));
}

TEST_CASE("exact cover and MIS agree with brute force on random instances") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t E = 3 + rng() % 10, S = 3 + rng() % 10;
    SetCover inst{E, std::vector<std::vector<std::uint32_t>>(S)};
    for (std::size_t s = 0; s < S; ++s)
      for (std::size_t e = 0; e < E; ++e)
        if (rng() % 3 == 0) inst.sets[s].push_back(static_cast<std::uint32_t>(e));
    for (std::size_t e = 0; e < E; ++e) inst.sets[rng() % S].push_back(static_cast<std::uint32_t>(e));
    for (auto& s : inst.sets) {
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    const auto r = exact_cover(inst, {}, 60, 400, 1000000);
    REQUIRE(r.optimal);
    CHECK(covers(inst, r.chosen));
    CHECK(r.chosen.size() == brute_cover(inst));

    const std::size_t n = 2 + rng() % 12;
    ConflictGraph g(n, Bitset(n));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
        if (rng() % 2) {
          g[i].set(j);
          g[j].set(i);
        }
    const auto mis = max_independent_set(g, 1000000);
    REQUIRE(mis.optimal);
    CHECK(mis.vertices.size() == brute_mis(g));
    for (auto a : mis.vertices)
      for (auto b : mis.vertices) CHECK_FALSE(g[a].test(b));
    CHECK(greedy_independent_set(g).size() <= mis.vertices.size());
  }
}
