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

#include "pacmarket/outcome.hpp"

#include <cmath>

namespace pacmarket {

Outcome::Outcome(std::size_t players, std::size_t goods)
    : allocation(players, Bundle(goods)), prices(goods, Price(0.0)) {}

PriceTotal Outcome::price_of(const Bundle& bundle) const {
  PriceTotal total;
  bundle.for_each([&](Good g) {
    if (g >= prices.size() || prices[g].is_burn()) {
      total.infinite = true;
    } else {
      total.amount += prices[g].amount();
    }
  });
  return total;
}

std::vector<Good> Outcome::burnt_goods() const {
  std::vector<Good> out;
  for (Good g = 0; g < prices.size(); ++g) {
    if (prices[g].is_burn()) out.push_back(g);
  }
  return out;
}

std::size_t Outcome::burnt_count() const { return burnt_goods().size(); }

Bundle Outcome::unallocated() const {
  Bundle held(goods());
  for (const auto& a : allocation) held |= a;
  return held.complement();
}

bool affordable(const Outcome& outcome, const Bundle& bundle, double budget) {
  const PriceTotal t = outcome.price_of(bundle);
  return !t.infinite && t.amount <= budget;
}

std::vector<std::string> validate_outcome(const Outcome& outcome, std::size_t goods) {
  std::vector<std::string> problems;
  if (outcome.prices.size() != goods) {
    problems.push_back("price vector has " + std::to_string(outcome.prices.size()) + " entries, expected " +
                       std::to_string(goods));
  }
  std::vector<int> owner(goods, -1);
  for (std::size_t i = 0; i < outcome.allocation.size(); ++i) {
    const Bundle& a = outcome.allocation[i];
    if (a.universe() != goods) {
      problems.push_back("bundle of player " + std::to_string(i) + " has universe " +
                         std::to_string(a.universe()) + ", expected " + std::to_string(goods));
      continue;
    }
    a.for_each([&](Good g) {
      if (owner[g] >= 0) {
        problems.push_back("good " + std::to_string(g) + " allocated twice (players " +
                           std::to_string(owner[g]) + " and " + std::to_string(i) + ")");
      } else {
        owner[g] = static_cast<int>(i);
      }
      if (g < outcome.prices.size() && outcome.prices[g].is_burn()) {
        problems.push_back("good " + std::to_string(g) + " is allocated to player " + std::to_string(i) +
                           " but priced BURN");
      }
    });
  }
  for (Good g = 0; g < outcome.prices.size(); ++g) {
    const Price& p = outcome.prices[g];
    if (!p.is_burn() && (!std::isfinite(p.amount()) || p.amount() < 0.0)) {
      problems.push_back("good " + std::to_string(g) + " has invalid price " + std::to_string(p.amount()));
    }
  }
  return problems;
}

}  // namespace pacmarket
