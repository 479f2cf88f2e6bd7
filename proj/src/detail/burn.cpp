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

#include "detail/burn.hpp"

namespace pacmarket::detail {

void price_evenly(Outcome& out, const Bundle& a, double b) {
  if (a.empty()) return;
  const double each = b / static_cast<double>(a.size());
  a.for_each([&](Good g) { out.prices[g] = Price(each); });
}

void give_leftovers(Outcome& out, Player to) {
  if (out.players() == 0) return;
  Bundle left = out.unallocated();
  for (Good g : out.burnt_goods()) left.erase(g);
  left.for_each([&](Good g) { out.prices[g] = Price(0.0); });
  out.allocation[to] |= left;
}

namespace {

bool burn_once(Outcome& out, std::vector<double>& recorded, const SampleSet& samples, const BudgetVector& budgets) {
  const std::size_t n = out.players();
  for (Player i = 0; i < n; ++i) {
    for (const auto& rec : samples) {
      if (rec.bundle.empty() || !(recorded[i] < rec.values[i])) continue;
      // Monotone truth: a sample inside A_i is never worth more than A_i.
      // Reduced values can sit an ulp below the same bundle's sample value.
      if (rec.bundle.is_subset_of(out.allocation[i])) continue;
      if (!affordable(out, rec.bundle, budgets[i])) continue;

      Bundle free = rec.bundle;
      for (const auto& a : out.allocation) free -= a;
      if (!free.empty()) {
        out.prices[free.first()] = Price::burn();
        return true;
      }
      // Every good is held; take from the poorest holder.
      for (Player j = n; j-- > 0;) {
        const Bundle overlap = out.allocation[j] & rec.bundle;
        if (overlap.empty()) continue;
        const Good g = overlap.first();
        out.allocation[j].erase(g);
        out.prices[g] = Price::burn();
        price_evenly(out, out.allocation[j], budgets[j]);
        recorded[j] = 0.0;
        return true;
      }
    }
  }
  return false;
}

}  // namespace

void burn_until_consistent(Outcome& out, std::vector<double>& recorded, const SampleSet& samples,
                           const BudgetVector& budgets) {
  while (burn_once(out, recorded, samples, budgets)) {
  }
}

}  // namespace pacmarket::detail
