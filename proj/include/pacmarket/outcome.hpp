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

#include <cstddef>
#include <string>
#include <vector>

#include "pacmarket/bundle.hpp"
#include "pacmarket/valuation.hpp"

namespace pacmarket {

/// A good's posted price: a nonnegative amount, or BURN (price +infinity).
class Price {
 public:
  constexpr Price() = default;
  constexpr explicit Price(double amount) : amount_(amount) {}
  static constexpr Price burn() {
    Price p;
    p.burnt_ = true;
    return p;
  }

  constexpr bool is_burn() const { return burnt_; }
  // Meaningless when is_burn().
  constexpr double amount() const { return amount_; }

  friend constexpr bool operator==(const Price&, const Price&) = default;

 private:
  double amount_ = 0.0;
  bool burnt_ = false;
};

/// Sum of prices; any burnt member makes the total infinite.
struct PriceTotal {
  double amount = 0.0;
  bool infinite = false;
};

/// An allocation (pairwise disjoint bundles) with a posted price vector.
struct Outcome {
  Outcome() = default;
  Outcome(std::size_t players, std::size_t goods);

  std::size_t players() const { return allocation.size(); }
  std::size_t goods() const { return prices.size(); }

  PriceTotal price_of(const Bundle& bundle) const;
  std::vector<Good> burnt_goods() const;
  std::size_t burnt_count() const;
  // Goods held by nobody.
  Bundle unallocated() const;

  std::vector<Bundle> allocation;
  std::vector<Price> prices;
  // Per-player lower bounds on the true value of the player's own bundle,
  // recorded by learners that can certify them. Empty when unavailable.
  std::vector<double> certified_values;
};

/// True iff the bundle's price total is at most `budget`. Burnt members make
/// a bundle unaffordable at any budget.
bool affordable(const Outcome& outcome, const Bundle& bundle, double budget);

/// Structural diagnostics: out-of-range goods, goods allocated twice,
/// allocated goods priced BURN, negative prices. Empty when the outcome is valid.
std::vector<std::string> validate_outcome(const Outcome& outcome, std::size_t goods);

}  // namespace pacmarket
