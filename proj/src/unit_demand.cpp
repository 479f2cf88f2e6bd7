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

#include "pacmarket/unit_demand.hpp"

#include <algorithm>
#include <numeric>

#include "detail/burn.hpp"
#include "pacmarket/errors.hpp"

namespace pacmarket {

UnitDemandEstimate::UnitDemandEstimate(std::size_t players, std::size_t goods)
    : players_(players),
      goods_(goods),
      est_(players * goods, std::numeric_limits<double>::infinity()),
      seen_(goods, false) {}

std::optional<double> UnitDemandEstimate::estimate(Player i, Good g) const {
  if (!seen_[g]) return std::nullopt;
  return est_[i * goods_ + g];
}

void UnitDemandEstimate::set(Player i, Good g, double v) {
  seen_[g] = true;
  est_[i * goods_ + g] = v;
}

UnitDemandEstimate learn_ud_estimate(const SampleSet& samples) {
  UnitDemandEstimate est(samples.players(), samples.goods());
  for (const auto& rec : samples) {
    rec.bundle.for_each([&](Good g) {
      for (Player i = 0; i < samples.players(); ++i) {
        const auto cur = est.estimate(i, g);
        if (!cur || rec.values[i] < *cur) est.set(i, g, rec.values[i]);
      }
    });
  }
  return est;
}

namespace {

void check_dimensions(const SampleSet& samples, const BudgetVector& budgets) {
  if (budgets.size() != samples.players()) {
    throw DataError("budget vector has " + std::to_string(budgets.size()) + " players, samples have " +
                    std::to_string(samples.players()));
  }
}

}  // namespace

Outcome indirect_ud(const SampleSet& samples, const BudgetVector& budgets, Rng* tie_rng) {
  check_dimensions(samples, budgets);
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  Outcome out(n, k);
  if (n == 0) return out;

  const UnitDemandEstimate est = learn_ud_estimate(samples);
  Bundle pool = samples.observed();
  Bundle unobserved = pool.complement();
  bool observed_phase = true;

  for (Player i = 0; i < n; ++i) {
    if (pool.empty() && observed_phase) {
      pool = unobserved;
      observed_phase = false;
    }
    if (pool.empty()) break;

    Good pick = pool.first();
    if (observed_phase) {
      double best = -std::numeric_limits<double>::infinity();
      std::vector<Good> ties;
      pool.for_each([&](Good g) {
        const double v = *est.estimate(i, g);
        if (v > best) {
          best = v;
          ties.assign(1, g);
        } else if (v == best) {
          ties.push_back(g);
        }
      });
      pick = ties.front();
      if (tie_rng != nullptr && ties.size() > 1) pick = ties[tie_rng->uniform_int(0, ties.size() - 1)];
    }
    out.allocation[i].insert(pick);
    out.prices[pick] = Price(budgets[i]);
    pool.erase(pick);
  }
  detail::give_leftovers(out, n - 1);
  return out;
}

Outcome direct_ud(const SampleSet& samples, const BudgetVector& budgets) {
  check_dimensions(samples, budgets);
  const std::size_t n = samples.players();
  const std::size_t k = samples.goods();
  const std::size_t m = samples.size();
  Outcome out(n, k);
  out.certified_values.assign(n, 0.0);
  if (n == 0) return out;

  Bundle allocated(k);
  std::vector<std::size_t> order(m);
  // levels[l] = [begin, end) into `order`, highest value first.
  std::vector<std::pair<std::size_t, std::size_t>> levels;
  std::vector<Bundle> lower_union;

  for (Player i = 0; i < n; ++i) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return samples[a].values[i] > samples[b].values[i]; });
    levels.clear();
    for (std::size_t s = 0; s < m;) {
      std::size_t e = s + 1;
      while (e < m && samples[order[e]].values[i] == samples[order[s]].values[i]) ++e;
      levels.emplace_back(s, e);
      s = e;
    }
    // lower_union[l]: union of every sample valued strictly below level l.
    lower_union.assign(levels.size(), Bundle(k));
    Bundle acc(k);
    for (std::size_t l = levels.size(); l-- > 0;) {
      lower_union[l] = acc;
      for (std::size_t s = levels[l].first; s < levels[l].second; ++s) acc |= samples[order[s]].bundle;
    }

    for (std::size_t l = 0; l < levels.size(); ++l) {
      Bundle candidate = samples[order[levels[l].first]].bundle;
      for (std::size_t s = levels[l].first + 1; s < levels[l].second && !candidate.empty(); ++s) {
        candidate &= samples[order[s]].bundle;
      }
      candidate -= lower_union[l];
      if (candidate.empty() || candidate.intersects(allocated)) continue;

      detail::price_evenly(out, candidate, budgets[i]);
      allocated |= candidate;
      out.certified_values[i] = samples[order[levels[l].first]].values[i];
      out.allocation[i] = std::move(candidate);
      break;
    }
  }

  const Bundle unobserved = samples.observed().complement();
  out.allocation[0] |= unobserved;
  detail::give_leftovers(out, n - 1);
  return out;
}

}  // namespace pacmarket
