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

#include "pacmarket/submodular.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "detail/burn.hpp"
#include "pacmarket/errors.hpp"

namespace pacmarket {

namespace {

void check_floors(const std::vector<double>& floors, std::size_t n) {
  if (floors.size() != n) {
    throw DataError("expected " + std::to_string(n) + " value floors, got " + std::to_string(floors.size()));
  }
  for (double c : floors) {
    if (!std::isfinite(c) || c < 0.0) throw DataError("value floors must be finite and nonnegative");
  }
}

}  // namespace

SubmodReduced preprocess_submod(const SampleSet& samples, const std::vector<double>& floors) {
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  const std::size_t m = samples.size();
  check_floors(floors, n);

  std::vector<std::size_t> order;
  for (std::size_t j = 0; j < m; ++j) {
    if (!samples[j].bundle.empty()) order.push_back(j);
  }
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return samples[a].bundle.size() < samples[b].bundle.size();
  });

  std::vector<Bundle> bundles;
  std::vector<std::vector<double>> values;
  for (std::size_t j = 0; j < m; ++j) {
    const Bundle& orig = samples[j].bundle;
    if (orig.empty()) continue;
    Bundle cur = orig;
    std::vector<double> v = samples[j].values;
    for (std::size_t s : order) {
      const Bundle& sub = samples[s].bundle;
      if (sub.size() >= orig.size()) break;
      if (!sub.is_strict_subset_of(cur)) continue;
      cur -= sub;
      for (Player i = 0; i < n; ++i) v[i] = std::max(0.0, v[i] - samples[s].values[i]);
    }
    if (cur.empty()) continue;
    bundles.push_back(std::move(cur));
    values.push_back(std::move(v));
  }

  SubmodReduced out;
  std::unordered_map<Bundle, std::size_t, BundleHash> index;
  std::vector<std::vector<double>> kept;
  for (std::size_t a = 0; a < bundles.size(); ++a) {
    bool superset = false;
    for (std::size_t b = 0; b < bundles.size() && !superset; ++b) {
      superset = bundles[b].is_strict_subset_of(bundles[a]);
    }
    if (superset) continue;
    auto [it, fresh] = index.try_emplace(bundles[a], out.bundles.size());
    if (fresh) {
      out.bundles.push_back(bundles[a]);
      kept.push_back(values[a]);
    } else {
      auto& dst = kept[it->second];
      for (Player i = 0; i < n; ++i) dst[i] = std::max(dst[i], values[a][i]);
    }
  }
  out.values = Matrix(n, out.bundles.size());
  for (std::size_t j = 0; j < kept.size(); ++j) {
    for (Player i = 0; i < n; ++i) out.values(i, j) = kept[j][i];
  }

  const Bundle unseen = samples.observed().complement();
  out.floors = floors;
  for (Player i = 0; i < n; ++i) {
    Bundle high(k);
    Bundle low(k);
    for (const auto& rec : samples) (rec.values[i] >= floors[i] ? high : low) |= rec.bundle;
    out.fallbacks.push_back((high - low) | unseen);
  }
  return out;
}

Outcome direct_submod(const SampleSet& samples, const BudgetVector& budgets, const std::vector<double>& floors) {
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  if (budgets.size() != n) throw DataError("budget vector length does not match the samples");
  const SubmodReduced reduced = preprocess_submod(samples, floors);
  Outcome out(n, k);
  out.certified_values.assign(n, 0.0);
  if (n == 0) return out;

  std::vector<bool> alive(reduced.bundles.size(), true);
  Bundle taken(k);
  for (Player i = 0; i < n; ++i) {
    std::size_t best = reduced.bundles.size();
    for (std::size_t j = 0; j < reduced.bundles.size(); ++j) {
      if (alive[j] && (best == reduced.bundles.size() || reduced.values(i, j) > reduced.values(i, best))) best = j;
    }
    const bool below_floor = best == reduced.bundles.size() || reduced.values(i, best) < floors[i];
    const Bundle& fallback = reduced.fallbacks[i];
    Bundle chosen(k);
    if (below_floor && !fallback.empty() && !fallback.intersects(taken)) {
      chosen = fallback;
      out.certified_values[i] = floors[i];
    } else if (best != reduced.bundles.size()) {
      chosen = reduced.bundles[best];
      out.certified_values[i] = reduced.values(i, best);
    } else {
      continue;
    }
    out.allocation[i] = chosen;
    taken |= chosen;
    detail::price_evenly(out, chosen, budgets[i]);
    for (std::size_t j = 0; j < reduced.bundles.size(); ++j) {
      if (alive[j] && reduced.bundles[j].intersects(chosen)) alive[j] = false;
    }
  }

  detail::burn_until_consistent(out, out.certified_values, samples, budgets);
  detail::give_leftovers(out, 0);
  return out;
}

}  // namespace pacmarket
