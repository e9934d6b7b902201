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

#include <algorithm>
#include <numeric>
#include <queue>
#include <utility>

namespace polarkit::combinatorics {

std::vector<std::size_t> greedy_cover(const SetCover& instance) {
  const std::size_t E = instance.num_elements, S = instance.sets.size();
  // Element -> sets index so gains can be maintained decrementally.
  std::vector<std::size_t> start(E + 1, 0);
  for (const auto& s : instance.sets)
    for (auto e : s) ++start[e + 1];
  for (std::size_t e = 0; e < E; ++e) {
    if (start[e + 1] == 0) throw InvalidArgument("greedy_cover: element " + std::to_string(e) + " is in no set");
    start[e + 1] += start[e];
  }
  std::vector<std::uint32_t> owners(start[E]);
  {
    std::vector<std::size_t> fill(start.begin(), start.end() - 1);
    for (std::size_t s = 0; s < S; ++s)
      for (auto e : instance.sets[s]) owners[fill[e]++] = static_cast<std::uint32_t>(s);
  }
  std::vector<std::size_t> gain(S);
  // (gain, -index): larger gain first, then lower index. Entries whose gain
  // changed since insertion are re-queued when they surface.
  using Entry = std::pair<std::size_t, std::ptrdiff_t>;
  std::priority_queue<Entry> heap;
  for (std::size_t s = 0; s < S; ++s) {
    gain[s] = instance.sets[s].size();
    if (gain[s] > 0) heap.emplace(gain[s], -static_cast<std::ptrdiff_t>(s));
  }
  std::vector<char> covered(E, 0);
  std::size_t remaining = E;
  std::vector<std::size_t> chosen;
  while (remaining > 0 && !heap.empty()) {
    auto [stored, neg] = heap.top();
    heap.pop();
    const auto s = static_cast<std::size_t>(-neg);
    if (gain[s] == 0) continue;
    if (gain[s] < stored) {
      heap.emplace(gain[s], neg);
      continue;
    }
    chosen.push_back(s);
    for (auto e : instance.sets[s]) {
      if (covered[e]) continue;
      covered[e] = 1;
      --remaining;
      for (std::size_t k = start[e]; k < start[e + 1]; ++k) --gain[owners[k]];
    }
  }
  return chosen;
}

std::vector<std::size_t> prune_redundant(const SetCover& instance, std::vector<std::size_t> chosen) {
  std::vector<std::size_t> multiplicity(instance.num_elements, 0);
  for (auto s : chosen)
    for (auto e : instance.sets[s]) ++multiplicity[e];
  for (std::size_t k = chosen.size(); k-- > 0;) {
    const auto& set = instance.sets[chosen[k]];
    const bool redundant = std::all_of(set.begin(), set.end(), [&](auto e) { return multiplicity[e] > 1; });
    if (redundant) {
      for (auto e : set) --multiplicity[e];
      chosen.erase(chosen.begin() + static_cast<std::ptrdiff_t>(k));
    }
  }
  return chosen;
}

namespace {

class CoverSearch {
 public:
  CoverSearch(std::vector<Bitset> sets, std::vector<Bitset> element_sets, std::size_t budget)
      : sets_(std::move(sets)), element_sets_(std::move(element_sets)), budget_(budget) {}

  bool run(Bitset uncovered, std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    std::vector<std::size_t> current;
    dfs(uncovered, current);
    return nodes_ <= budget_;
  }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  std::size_t lower_bound(const Bitset& uncovered) const {
    const std::size_t n = uncovered.count();
    std::size_t max_gain = 0;
    for (const auto& s : sets_) max_gain = std::max(max_gain, s.count_and(uncovered));
    if (max_gain == 0) return static_cast<std::size_t>(-1) / 2;
    std::size_t bound = (n + max_gain - 1) / max_gain;
    // Elements with pairwise disjoint covering families need distinct sets.
    Bitset used(sets_.size());
    std::size_t disjoint = 0;
    for (std::size_t e = uncovered.next(0); e < uncovered.size(); e = uncovered.next(e + 1)) {
      if (!element_sets_[e].intersects(used)) {
        used |= element_sets_[e];
        ++disjoint;
      }
    }
    return std::max(bound, disjoint);
  }

  void dfs(const Bitset& uncovered, std::vector<std::size_t>& current) {
    if (++nodes_ > budget_) return;
    if (uncovered.none()) {
      if (current.size() < best_.size()) best_ = current;
      return;
    }
    if (current.size() + lower_bound(uncovered) >= best_.size()) return;
    std::size_t pick = uncovered.size();
    std::size_t fewest = static_cast<std::size_t>(-1);
    for (std::size_t e = uncovered.next(0); e < uncovered.size(); e = uncovered.next(e + 1)) {
      const std::size_t c = element_sets_[e].count();
      if (c < fewest) {
        fewest = c;
        pick = e;
      }
    }
    std::vector<std::pair<std::size_t, std::size_t>> options;
    const Bitset& fam = element_sets_[pick];
    for (std::size_t s = fam.next(0); s < fam.size(); s = fam.next(s + 1)) {
      options.emplace_back(sets_[s].count_and(uncovered), s);
    }
    std::sort(options.begin(), options.end(), [](const auto& a, const auto& b) {
      return a.first != b.first ? a.first > b.first : a.second < b.second;
    });
    for (const auto& [gain, s] : options) {
      Bitset next = uncovered;
      next.subtract(sets_[s]);
      current.push_back(s);
      dfs(next, current);
      current.pop_back();
      if (nodes_ > budget_) return;
    }
  }

  std::vector<Bitset> sets_;
  std::vector<Bitset> element_sets_;
  std::vector<std::size_t> best_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
};

}  // namespace

ExactCoverResult exact_cover(const SetCover& instance, const std::vector<std::size_t>& incumbent,
                             std::size_t max_elements, std::size_t max_sets, std::size_t node_budget) {
  ExactCoverResult out;
  out.chosen = incumbent.empty() ? prune_redundant(instance, greedy_cover(instance)) : incumbent;
  const std::size_t E = instance.num_elements;
  const std::size_t S = instance.sets.size();
  if (E == 0) {
    out.chosen.clear();
    out.optimal = out.attempted = true;
    return out;
  }
  // Keep the reduction itself affordable.
  const double words_e = static_cast<double>(E) / 64.0 + 1.0, words_s = static_cast<double>(S) / 64.0 + 1.0;
  if (static_cast<double>(E) * static_cast<double>(E) * words_s > 3e7 ||
      static_cast<double>(S) * static_cast<double>(S) * words_e > 3e7)
    return out;

  std::vector<Bitset> set_bits(S, Bitset(E));
  std::vector<Bitset> elem_bits(E, Bitset(S));
  for (std::size_t s = 0; s < S; ++s) {
    for (auto e : instance.sets[s]) {
      set_bits[s].set(e);
      elem_bits[e].set(s);
    }
  }
  std::vector<char> set_alive(S, 1), elem_alive(E, 1);
  for (std::size_t s = 0; s < S; ++s) set_alive[s] = instance.sets[s].empty() ? 0 : 1;

  bool changed = true;
  while (changed) {
    changed = false;
    // Live views restricted to live elements / sets.
    Bitset live_e(E), live_s(S);
    for (std::size_t e = 0; e < E; ++e)
      if (elem_alive[e]) live_e.set(e);
    for (std::size_t s = 0; s < S; ++s)
      if (set_alive[s]) live_s.set(s);
    std::vector<std::size_t> order;
    for (std::size_t s = 0; s < S; ++s)
      if (set_alive[s]) order.push_back(s);
    std::vector<Bitset> restricted(S);
    for (auto s : order) {
      restricted[s] = set_bits[s];
      restricted[s] &= live_e;
    }
    std::stable_sort(order.begin(), order.end(),
                     [&](auto a, auto b) { return restricted[a].count() > restricted[b].count(); });
    for (std::size_t i = 0; i < order.size(); ++i) {
      const auto a = order[i];
      if (!set_alive[a]) continue;
      if (restricted[a].none()) {
        set_alive[a] = 0;
        changed = true;
        continue;
      }
      for (std::size_t j = 0; j < i; ++j) {
        const auto b = order[j];
        if (set_alive[b] && restricted[a].is_subset_of(restricted[b])) {
          set_alive[a] = 0;
          changed = true;
          break;
        }
      }
    }
    live_s = Bitset(S);
    for (std::size_t s = 0; s < S; ++s)
      if (set_alive[s]) live_s.set(s);
    std::vector<Bitset> fam(E);
    for (std::size_t e = 0; e < E; ++e) {
      if (!elem_alive[e]) continue;
      fam[e] = elem_bits[e];
      fam[e] &= live_s;
    }
    for (std::size_t e = 0; e < E; ++e) {
      if (!elem_alive[e]) continue;
      for (std::size_t f = 0; f < E; ++f) {
        if (f == e || !elem_alive[f]) continue;
        // Covering f forces covering e; on equal families keep the lower index.
        if (fam[f].is_subset_of(fam[e]) && (!(fam[f] == fam[e]) || f < e)) {
          elem_alive[e] = 0;
          changed = true;
          break;
        }
      }
    }
  }

  std::vector<std::size_t> set_ids, elem_ids;
  for (std::size_t s = 0; s < S; ++s)
    if (set_alive[s]) set_ids.push_back(s);
  for (std::size_t e = 0; e < E; ++e)
    if (elem_alive[e]) elem_ids.push_back(e);
  out.reduced_elements = elem_ids.size();
  out.reduced_sets = set_ids.size();
  if (elem_ids.size() > max_elements || set_ids.size() > max_sets) return out;
  out.attempted = true;

  const std::size_t e2 = elem_ids.size(), s2 = set_ids.size();
  std::vector<Bitset> rs(s2, Bitset(e2)), re(e2, Bitset(s2));
  for (std::size_t i = 0; i < s2; ++i) {
    for (std::size_t j = 0; j < e2; ++j) {
      if (set_bits[set_ids[i]].test(elem_ids[j])) {
        rs[i].set(j);
        re[j].set(i);
      }
    }
  }
  // Only the incumbent's size matters to the search: it is the initial bound.
  std::vector<std::size_t> seed(out.chosen.size(), 0);
  CoverSearch search(rs, re, node_budget);
  Bitset all(e2);
  all.set_all();
  const bool finished = search.run(all, seed);
  if (search.best().size() < out.chosen.size()) {
    out.chosen.clear();
    for (auto s : search.best()) out.chosen.push_back(set_ids[s]);
    std::sort(out.chosen.begin(), out.chosen.end());
  }
  out.optimal = finished;
  return out;
}

std::vector<std::size_t> greedy_independent_set(const ConflictGraph& conflicts) {
  const std::size_t n = conflicts.size();
  Bitset alive(n);
  alive.set_all();
  std::vector<std::size_t> chosen;
  while (!alive.none()) {
    std::size_t best = n, best_deg = static_cast<std::size_t>(-1);
    for (std::size_t v = alive.next(0); v < n; v = alive.next(v + 1)) {
      const std::size_t d = conflicts[v].count_and(alive);
      if (d < best_deg) {
        best_deg = d;
        best = v;
      }
    }
    chosen.push_back(best);
    alive.subtract(conflicts[best]);
    alive.reset(best);
  }
  std::sort(chosen.begin(), chosen.end());
  return chosen;
}

namespace {

class CliqueSearch {
 public:
  CliqueSearch(std::vector<Bitset> adjacency, std::size_t budget) : adj_(std::move(adjacency)), budget_(budget) {}

  void run(std::vector<std::size_t> incumbent) {
    best_ = std::move(incumbent);
    Bitset all(adj_.size());
    all.set_all();
    std::vector<std::size_t> current;
    expand(all, current);
  }
  bool finished() const { return nodes_ <= budget_; }
  const std::vector<std::size_t>& best() const { return best_; }

 private:
  void expand(Bitset candidates, std::vector<std::size_t>& current) {
    if (++nodes_ > budget_) return;
    // Greedy colouring of the candidates: vertices in one colour class are
    // pairwise non-adjacent, so the number of classes bounds the clique.
    std::vector<std::size_t> order, colour;
    Bitset uncoloured = candidates;
    std::size_t k = 0;
    while (!uncoloured.none()) {
      ++k;
      Bitset q = uncoloured;
      while (!q.none()) {
        const std::size_t v = q.next(0);
        q.reset(v);
        q.subtract(adj_[v]);
        uncoloured.reset(v);
        order.push_back(v);
        colour.push_back(k);
      }
    }
    for (std::size_t i = order.size(); i-- > 0;) {
      if (current.size() + colour[i] <= best_.size()) return;
      const std::size_t v = order[i];
      current.push_back(v);
      Bitset next = candidates;
      next &= adj_[v];
      if (next.none()) {
        if (current.size() > best_.size()) best_ = current;
      } else {
        expand(next, current);
      }
      current.pop_back();
      candidates.reset(v);
      if (nodes_ > budget_) return;
    }
  }

  std::vector<Bitset> adj_;
  std::vector<std::size_t> best_;
  std::size_t budget_;
  std::size_t nodes_ = 0;
};

}  // namespace

IndependentSetResult max_independent_set(const ConflictGraph& conflicts, std::size_t node_budget) {
  const std::size_t n = conflicts.size();
  std::vector<Bitset> compat(n, Bitset(n));
  for (std::size_t i = 0; i < n; ++i) {
    compat[i].set_all();
    compat[i].subtract(conflicts[i]);
    compat[i].reset(i);
  }
  CliqueSearch search(std::move(compat), node_budget);
  search.run(greedy_independent_set(conflicts));
  IndependentSetResult out{search.best(), search.finished()};
  std::sort(out.vertices.begin(), out.vertices.end());
  return out;
}

}  // namespace polarkit::combinatorics
