// Copyright 2026 The pacmarket Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace pacmarket {

using Good = std::size_t;

/// A set of goods drawn from a universe {0, ..., k-1}.
///
/// Stored as a word-packed bitset. Universes of up to 128 goods live inline
/// without heap allocation. Binary operations require both operands to share
/// the same universe size.
class Bundle {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  Bundle() = default;
  explicit Bundle(std::size_t universe);
  Bundle(std::size_t universe, std::initializer_list<Good> goods);
  Bundle(std::size_t universe, const std::vector<Good>& goods);

  static Bundle full(std::size_t universe);
  // Low `universe` bits of `mask`; universe must be <= 64.
  static Bundle from_mask(std::size_t universe, Word mask);

  std::size_t universe() const { return universe_; }
  std::size_t size() const;
  bool empty() const;

  bool contains(Good g) const;
  void insert(Good g);
  void erase(Good g);
  void clear();

  bool intersects(const Bundle& other) const;
  bool is_subset_of(const Bundle& other) const;
  bool is_strict_subset_of(const Bundle& other) const;

  Bundle& operator|=(const Bundle& other);
  Bundle& operator&=(const Bundle& other);
  // Set difference.
  Bundle& operator-=(const Bundle& other);

  friend Bundle operator|(Bundle a, const Bundle& b) { return a |= b; }
  friend Bundle operator&(Bundle a, const Bundle& b) { return a &= b; }
  friend Bundle operator-(Bundle a, const Bundle& b) { return a -= b; }

  Bundle complement() const;

  // Lowest member, or universe() when empty.
  Good first() const;
  // Lowest member strictly greater than g, or universe() when none.
  Good next(Good g) const;

  std::vector<Good> members() const;
  // Only valid when universe() <= 64.
  Word mask() const;

  template <typename F>
  void for_each(F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      Word bits = words_[w];
      while (bits != 0) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(bits));
        f(w * kWordBits + bit);
        bits &= bits - 1;
      }
    }
  }

  std::string to_string() const;

  friend bool operator==(const Bundle& a, const Bundle& b) {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }
  // Lexicographic on universe then words; gives bundles a stable order.
  friend bool operator<(const Bundle& a, const Bundle& b);

 private:
  void check_good(Good g) const;
  void check_same_universe(const Bundle& other) const;

  std::size_t universe_ = 0;
  boost::container::small_vector<Word, 2> words_;
};

struct BundleHash {
  std::size_t operator()(const Bundle& b) const;
};

}  // namespace pacmarket
