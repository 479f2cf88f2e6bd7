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

#include "pacmarket/additive.hpp"

#include <unordered_set>

#include "detail/burn.hpp"
#include "pacmarket/errors.hpp"

namespace pacmarket {

namespace {

struct Item {
  Bundle bundle;
  std::vector<double> values;
};

void drop_duplicates(std::vector<Item>& items) {
  std::unordered_set<Bundle, BundleHash> seen;
  std::vector<Item> out;
  out.reserve(items.size());
  for (auto& it : items) {
    if (seen.insert(it.bundle).second) out.push_back(std::move(it));
  }
  items = std::move(out);
}

}  // namespace

ReducedSamples preprocess_additive(const SampleSet& samples) {
  const std::size_t n = samples.players();
  std::vector<Item> items;
  for (const auto& rec : samples) {
    if (!rec.bundle.empty()) items.push_back({rec.bundle, rec.values});
  }
  drop_duplicates(items);

  for (bool changed = true; changed;) {
    changed = false;
    for (std::size_t b = 0; b < items.size(); ++b) {
      for (std::size_t a = 0; a < items.size(); ++a) {
        if (a == b || !items[a].bundle.is_strict_subset_of(items[b].bundle)) continue;
        items[b].bundle -= items[a].bundle;
        for (Player i = 0; i < n; ++i) items[b].values[i] -= items[a].values[i];
        changed = true;
        a = static_cast<std::size_t>(-1);  // rescan: b shrank
      }
    }
    if (changed) drop_duplicates(items);
  }

  ReducedSamples out;
  out.values = Matrix(n, items.size());
  for (std::size_t j = 0; j < items.size(); ++j) {
    for (Player i = 0; i < n; ++i) out.values(i, j) = items[j].values[i];
    out.bundles.push_back(std::move(items[j].bundle));
  }
  return out;
}

Outcome direct_additive(const SampleSet& samples, const BudgetVector& budgets) {
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  if (budgets.size() != n) throw DataError("budget vector length does not match the samples");
  Outcome out(n, k);
  out.certified_values.assign(n, 0.0);
  if (n == 0) return out;

  const ReducedSamples reduced = preprocess_additive(samples);
  std::vector<bool> alive(reduced.size(), true);

  for (Player i = 0; i < n; ++i) {
    std::size_t best = reduced.size();
    for (std::size_t j = 0; j < reduced.size(); ++j) {
      if (alive[j] && (best == reduced.size() || reduced.values(i, j) > reduced.values(i, best))) best = j;
    }
    if (best == reduced.size()) continue;
    const Bundle& chosen = reduced.bundles[best];
    out.allocation[i] = chosen;
    out.certified_values[i] = reduced.values(i, best);
    detail::price_evenly(out, chosen, budgets[i]);
    for (std::size_t j = 0; j < reduced.size(); ++j) {
      if (alive[j] && reduced.bundles[j].intersects(chosen)) alive[j] = false;
    }
  }

  detail::burn_until_consistent(out, out.certified_values, samples, budgets);

  Bundle held(k);
  for (const auto& a : out.allocation) held |= a;
  for (Good g : out.burnt_goods()) held.insert(g);
  for (std::size_t j = 0; j < reduced.size(); ++j) {
    if (!alive[j] || reduced.bundles[j].intersects(held)) continue;
    Player owner = 0;
    for (Player i = 1; i < n; ++i) {
      if (reduced.values(i, j) > reduced.values(owner, j)) owner = i;
    }
    out.allocation[owner] |= reduced.bundles[j];
    held |= reduced.bundles[j];
  }
  detail::give_leftovers(out, 0);
  return out;
}

}  // namespace pacmarket
