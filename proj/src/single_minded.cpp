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

#include "pacmarket/single_minded.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "pacmarket/errors.hpp"

namespace pacmarket {

ValuationProfile DesiredSets::as_profile(std::size_t goods) const { return SingleMinded(goods, sets); }

DesiredSets learn_desired_sets(const SampleSet& samples) {
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  std::vector<std::optional<Bundle>> acc(n);
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const auto& rec = samples[j];
    for (Player i = 0; i < n; ++i) {
      const double v = rec.values[i];
      if (v != 0.0 && v != 1.0) {
        throw DataError("sample " + std::to_string(j) + " has value " + std::to_string(v) + " for player " +
                        std::to_string(i) + "; single-minded values must be 0 or 1");
      }
      if (v == 1.0) {
        if (acc[i]) {
          *acc[i] &= rec.bundle;
        } else {
          acc[i] = rec.bundle;
        }
      }
    }
  }
  DesiredSets out;
  out.sets.reserve(n);
  for (Player i = 0; i < n; ++i) {
    // An empty intersection can only come from inconsistent data.
    if (acc[i] && acc[i]->empty()) {
      throw DataError("positive samples of player " + std::to_string(i) + " have an empty intersection");
    }
    out.sets.push_back(acc[i] ? *acc[i] : Bundle::full(k));
  }
  return out;
}

namespace {

bool near_equal(double a, double b) {
  return a == b || std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b));
}

}  // namespace

Outcome sm_equilibrium(const DesiredSets& desired, const BudgetVector& budgets, Leftovers leftovers) {
  const std::size_t n = desired.players();
  if (budgets.size() != n) throw DataError("budget vector length does not match the desired sets");
  if (n == 0) return Outcome(0, 0);
  const std::size_t k = desired.sets.front().universe();
  for (const auto& d : desired.sets) {
    if (d.universe() != k) throw DataError("desired sets have mismatched universes");
  }

  Outcome out(n, k);
  std::vector<double> remaining = budgets.values();
  std::vector<Bundle> demand = desired.sets;
  const double n2 = static_cast<double>(n) * static_cast<double>(n);

  std::vector<Player> demanders;
  for (Good g = 0; g < k; ++g) {
    demanders.clear();
    for (Player i = 0; i < n; ++i) {
      if (demand[i].contains(g)) demanders.push_back(i);
    }
    if (demanders.empty()) continue;
    if (demanders.size() == 1) {
      out.allocation[demanders.front()].insert(g);
      continue;
    }

    std::sort(demanders.begin(), demanders.end(),
              [&](Player a, Player b) { return remaining[a] > remaining[b] || (remaining[a] == remaining[b] && a < b); });
    const Player s = demanders[0];
    const Player t = demanders[1];
    const double step = (remaining[s] - remaining[t]) / n2;
    double price = remaining[t] + step;
    remaining[s] -= price;
    for (bool moved = true; moved;) {
      moved = false;
      for (Player j = 0; j < n; ++j) {
        if (j == s || !near_equal(remaining[j], remaining[s])) continue;
        if (remaining[s] - step <= 0.0) break;
        remaining[s] -= step;
        price += step;
        moved = true;
        break;
      }
    }
    out.allocation[s].insert(g);
    out.prices[g] = Price(price);

    for (Player i = 0; i < n; ++i) {
      if (demand[i].empty()) continue;
      const PriceTotal owed = out.price_of(demand[i] - out.allocation[i]);
      if (owed.amount > remaining[i]) demand[i].clear();
    }
  }

  if (leftovers == Leftovers::kLastPlayer) out.allocation[n - 1] |= out.unallocated();
  return out;
}

}  // namespace pacmarket
