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

#include "pacmarket/market.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "pacmarket/errors.hpp"

namespace pacmarket {

BudgetVector::BudgetVector(std::vector<double> budgets) : budgets_(std::move(budgets)) {
  for (std::size_t i = 0; i < budgets_.size(); ++i) {
    if (!std::isfinite(budgets_[i]) || budgets_[i] <= 0.0) {
      throw DataError("budget of player " + std::to_string(i) + " must be positive and finite");
    }
    if (i > 0 && !(budgets_[i] < budgets_[i - 1])) {
      throw DataError("budgets must be strictly decreasing (player " + std::to_string(i) + ")");
    }
  }
}

double BudgetVector::total() const { return std::accumulate(budgets_.begin(), budgets_.end(), 0.0); }

void SampleSet::add(Bundle bundle, std::vector<double> values) {
  if (bundle.universe() != goods_) throw DataError("sample bundle universe does not match k");
  if (values.size() != players_) throw DataError("sample value vector length does not match n");
  for (double v : values) {
    if (!std::isfinite(v)) throw DataError("sample values must be finite");
  }
  records_.push_back({std::move(bundle), std::move(values)});
}

SampleSet SampleSet::prefix(std::size_t m) const {
  SampleSet out(players_, goods_);
  const std::size_t take = std::min(m, records_.size());
  out.records_.assign(records_.begin(), records_.begin() + static_cast<std::ptrdiff_t>(take));
  return out;
}

Bundle SampleSet::observed() const {
  Bundle u(goods_);
  for (const auto& r : records_) u |= r.bundle;
  return u;
}

MarketInstance::MarketInstance(BudgetVector budgets, ValuationProfile valuations, bool budget_normalized)
    : budgets_(std::move(budgets)), valuations_(std::move(valuations)), budget_normalized_(budget_normalized) {
  if (valuations_.players() != budgets_.size()) {
    throw DataError("valuation profile has " + std::to_string(valuations_.players()) +
                    " players but budget vector has " + std::to_string(budgets_.size()));
  }
  if (budget_normalized_) {
    for (Player i = 0; i < players(); ++i) {
      const double top = valuations_.max_singleton(i);
      if (std::abs(top - budgets_[i]) > 1e-9 * budgets_[i]) {
        throw DataError("market flagged budget-normalized but player " + std::to_string(i) +
                        " has max single-good value " + std::to_string(top) + " != budget " +
                        std::to_string(budgets_[i]));
      }
    }
  }
}

void MarketInstance::observe(SampleSet& samples, Bundle bundle) const {
  std::vector<double> values(players());
  for (Player i = 0; i < players(); ++i) values[i] = value(i, bundle);
  samples.add(std::move(bundle), std::move(values));
}

void MarketInstance::check_consistent(const SampleSet& samples) const {
  if (samples.players() != players() || samples.goods() != goods()) {
    throw DataError("sample set dimensions do not match market");
  }
  for (std::size_t j = 0; j < samples.size(); ++j) {
    for (Player i = 0; i < players(); ++i) {
      if (samples[j].values[i] != value(i, samples[j].bundle)) {
        throw DataError("sample " + std::to_string(j) + " records value " +
                        std::to_string(samples[j].values[i]) + " for player " + std::to_string(i) +
                        " but the market says " + std::to_string(value(i, samples[j].bundle)));
      }
    }
  }
}

}  // namespace pacmarket
