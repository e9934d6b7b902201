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

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace polarkit::combinatorics {

class Bitset {
 public:
  Bitset() = default;
  explicit Bitset(std::size_t size) : words_((size + 63) / 64, 0), size_(size) {}

  std::size_t size() const { return size_; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1; }
  void set_all() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool none() const {
    for (auto w : words_)
      if (w) return false;
    return true;
  }
  std::size_t count_and(const Bitset& o) const {
    std::size_t c = 0;
    for (std::size_t k = 0; k < words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(words_[k] & o.words_[k]));
    return c;
  }
  bool is_subset_of(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & ~o.words_[k]) return false;
    return true;
  }
  bool intersects(const Bitset& o) const {
    for (std::size_t k = 0; k < words_.size(); ++k)
      if (words_[k] & o.words_[k]) return true;
    return false;
  }
  Bitset& operator&=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= o.words_[k];
    return *this;
  }
  Bitset& operator|=(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  Bitset& subtract(const Bitset& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] &= ~o.words_[k];
    return *this;
  }
  /// Index of the first set bit at or after `from`, or size() when none.
  std::size_t next(std::size_t from) const {
    if (from >= size_) return size_;
    std::size_t k = from >> 6;
    std::uint64_t w = words_[k] & (~std::uint64_t{0} << (from & 63));
    while (true) {
      if (w) return std::min(size_, (k << 6) + static_cast<std::size_t>(std::countr_zero(w)));
      if (++k >= words_.size()) return size_;
      w = words_[k];
    }
  }
  bool operator==(const Bitset& o) const { return size_ == o.size_ && words_ == o.words_; }

 private:
  void trim() {
    if (size_ & 63) words_.back() &= (std::uint64_t{1} << (size_ & 63)) - 1;
  }
  std::vector<std::uint64_t> words_;
  std::size_t size_ = 0;
};

/// sets[s] lists the distinct element ids (< num_elements) covered by set s.
struct SetCover {
  std::size_t num_elements = 0;
  std::vector<std::vector<std::uint32_t>> sets;
};

/// Classic greedy: repeatedly take the set covering the most uncovered
/// elements; ties go to the lowest set index. Throws InvalidArgument when some
/// element is in no set.
std::vector<std::size_t> greedy_cover(const SetCover& instance);

/// Drops chosen sets (latest first) whose elements are covered by the others.
std::vector<std::size_t> prune_redundant(const SetCover& instance, std::vector<std::size_t> chosen);

struct ExactCoverResult {
  std::vector<std::size_t> chosen;
  bool optimal = false;      // search completed within limits
  bool attempted = false;    // reduced instance fit the size limits
  std::size_t reduced_elements = 0;
  std::size_t reduced_sets = 0;
};

/// Branch and bound after dominance reduction. Starts from `incumbent`, a
/// feasible cover (greedy when empty); returns it unchanged when the reduced instance exceeds
/// max_elements x max_sets or the node budget runs out first.
ExactCoverResult exact_cover(const SetCover& instance, const std::vector<std::size_t>& incumbent,
                             std::size_t max_elements, std::size_t max_sets, std::size_t node_budget);

/// conflicts[i] has bit j set when vertices i and j may not both be chosen.
using ConflictGraph = std::vector<Bitset>;

/// Min-degree greedy independent set; ties to the lowest index.
std::vector<std::size_t> greedy_independent_set(const ConflictGraph& conflicts);

struct IndependentSetResult {
  std::vector<std::size_t> vertices;
  bool optimal = false;
};

/// Maximum independent set by colouring-bounded branch and bound (maximum
/// clique of the complement graph).
IndependentSetResult max_independent_set(const ConflictGraph& conflicts, std::size_t node_budget);

}  // namespace polarkit::combinatorics
