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

#include "pacmarket/bundle.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace pacmarket {

namespace {
std::size_t word_count(std::size_t universe) {
  return (universe + Bundle::kWordBits - 1) / Bundle::kWordBits;
}
}  // namespace

Bundle::Bundle(std::size_t universe) : universe_(universe), words_(word_count(universe), 0) {}

Bundle::Bundle(std::size_t universe, std::initializer_list<Good> goods) : Bundle(universe) {
  for (Good g : goods) insert(g);
}

Bundle::Bundle(std::size_t universe, const std::vector<Good>& goods) : Bundle(universe) {
  for (Good g : goods) insert(g);
}

Bundle Bundle::full(std::size_t universe) {
  Bundle b(universe);
  for (auto& w : b.words_) w = ~Word{0};
  const std::size_t tail = universe % kWordBits;
  if (tail != 0) b.words_.back() = (Word{1} << tail) - 1;
  return b;
}

Bundle Bundle::from_mask(std::size_t universe, Word mask) {
  if (universe > kWordBits) throw std::out_of_range("from_mask requires universe <= 64");
  Bundle b(universe);
  if (universe == 0) return b;
  const Word keep = universe == kWordBits ? ~Word{0} : (Word{1} << universe) - 1;
  b.words_[0] = mask & keep;
  return b;
}

std::size_t Bundle::size() const {
  std::size_t n = 0;
  for (Word w : words_) n += static_cast<std::size_t>(std::popcount(w));
  return n;
}

bool Bundle::empty() const {
  return std::all_of(words_.begin(), words_.end(), [](Word w) { return w == 0; });
}

void Bundle::check_good(Good g) const {
  if (g >= universe_) {
    throw std::out_of_range("good " + std::to_string(g) + " outside universe of " +
                            std::to_string(universe_));
  }
}

void Bundle::check_same_universe(const Bundle& other) const {
  if (other.universe_ != universe_) {
    throw std::invalid_argument("bundle universes differ: " + std::to_string(universe_) + " vs " +
                                std::to_string(other.universe_));
  }
}

bool Bundle::contains(Good g) const {
  if (g >= universe_) return false;
  return (words_[g / kWordBits] >> (g % kWordBits)) & 1U;
}

void Bundle::insert(Good g) {
  check_good(g);
  words_[g / kWordBits] |= Word{1} << (g % kWordBits);
}

void Bundle::erase(Good g) {
  check_good(g);
  words_[g / kWordBits] &= ~(Word{1} << (g % kWordBits));
}

void Bundle::clear() {
  for (auto& w : words_) w = 0;
}

bool Bundle::intersects(const Bundle& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & other.words_[i]) != 0) return true;
  }
  return false;
}

bool Bundle::is_subset_of(const Bundle& other) const {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if ((words_[i] & ~other.words_[i]) != 0) return false;
  }
  return true;
}

bool Bundle::is_strict_subset_of(const Bundle& other) const {
  return is_subset_of(other) && words_ != other.words_;
}

Bundle& Bundle::operator|=(const Bundle& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
  return *this;
}

Bundle& Bundle::operator&=(const Bundle& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
  return *this;
}

Bundle& Bundle::operator-=(const Bundle& other) {
  check_same_universe(other);
  for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
  return *this;
}

Bundle Bundle::complement() const { return full(universe_) - *this; }

Good Bundle::first() const {
  for (std::size_t w = 0; w < words_.size(); ++w) {
    if (words_[w] != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(words_[w]));
  }
  return universe_;
}

Good Bundle::next(Good g) const {
  Good start = g + 1;
  if (start >= universe_) return universe_;
  std::size_t w = start / kWordBits;
  Word bits = words_[w] & (~Word{0} << (start % kWordBits));
  while (true) {
    if (bits != 0) return w * kWordBits + static_cast<std::size_t>(std::countr_zero(bits));
    if (++w == words_.size()) return universe_;
    bits = words_[w];
  }
}

std::vector<Good> Bundle::members() const {
  std::vector<Good> out;
  out.reserve(size());
  for_each([&](Good g) { out.push_back(g); });
  return out;
}

Bundle::Word Bundle::mask() const {
  if (universe_ > kWordBits) throw std::out_of_range("mask() requires universe <= 64");
  return words_.empty() ? 0 : words_[0];
}

std::string Bundle::to_string() const {
  std::ostringstream os;
  os << '{';
  bool first_member = true;
  for_each([&](Good g) {
    if (!first_member) os << ',';
    os << g;
    first_member = false;
  });
  os << '}';
  return os.str();
}

bool operator<(const Bundle& a, const Bundle& b) {
  if (a.universe_ != b.universe_) return a.universe_ < b.universe_;
  return std::lexicographical_compare(a.words_.begin(), a.words_.end(), b.words_.begin(),
                                      b.words_.end());
}

std::size_t BundleHash::operator()(const Bundle& b) const {
  std::size_t h = b.universe() * 0x9E3779B97F4A7C15ULL;
  if (b.universe() <= Bundle::kWordBits) return h ^ (b.mask() * 0xBF58476D1CE4E5B9ULL);
  b.for_each([&](Good g) { h = (h ^ g) * 0x100000001B3ULL; });
  return h;
}

}  // namespace pacmarket
