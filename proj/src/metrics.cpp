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

#include "pacmarket/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "pacmarket/errors.hpp"

namespace pacmarket {

namespace {

constexpr double kSlack = 1e-9;

bool within_budget(double price, double budget) { return price <= budget * (1.0 + kSlack); }

bool strictly_better(double candidate, double own) {
  return candidate > own + kSlack * std::max(1.0, std::abs(own));
}

template <class OwnValue, class SampleValue>
LossReport loss_over(const Outcome& outcome, const SampleSet& samples, const BudgetVector& budgets,
                     OwnValue own, SampleValue sample_value) {
  if (samples.empty()) throw DataError("empirical loss needs at least one sample");
  const std::size_t n = budgets.size();
  LossReport report;
  std::size_t bad = 0;
  for (std::size_t j = 0; j < samples.size(); ++j) {
    const Bundle& s = samples[j].bundle;
    const PriceTotal price = outcome.price_of(s);
    if (price.infinite) continue;
    bool any = false;
    for (Player i = 0; i < n; ++i) {
      if (price.amount <= budgets[i] && own(i) < sample_value(i, j)) {
        report.violating.emplace_back(i, j);
        any = true;
      }
    }
    if (any) ++bad;
  }
  report.empirical = static_cast<double>(bad) / static_cast<double>(samples.size());
  return report;
}

}  // namespace

int loss_indicator(const Outcome& outcome, const Bundle& bundle, const ValuationProfile& truth,
                   const BudgetVector& budgets) {
  const PriceTotal price = outcome.price_of(bundle);
  if (price.infinite) return 0;
  for (Player i = 0; i < budgets.size(); ++i) {
    if (price.amount <= budgets[i] && truth.eval(i, outcome.allocation[i]) < truth.eval(i, bundle)) return 1;
  }
  return 0;
}

LossReport empirical_loss(const Outcome& outcome, const SampleSet& samples, const ValuationProfile& truth,
                          const BudgetVector& budgets) {
  std::vector<double> own(budgets.size());
  for (Player i = 0; i < own.size(); ++i) own[i] = truth.eval(i, outcome.allocation[i]);
  return loss_over(
      outcome, samples, budgets, [&](Player i) { return own[i]; },
      [&](Player i, std::size_t j) { return truth.eval(i, samples[j].bundle); });
}

LossReport empirical_loss(const Outcome& outcome, const SampleSet& samples, const std::vector<double>& own_values,
                          const BudgetVector& budgets) {
  if (own_values.size() != budgets.size()) throw DataError("own-value vector length does not match n");
  return loss_over(
      outcome, samples, budgets, [&](Player i) { return own_values[i]; },
      [&](Player i, std::size_t j) { return samples[j].values[i]; });
}

double estimate_expected_loss(const Outcome& outcome, const MarketInstance& market, const DistributionSpec& spec,
                              std::size_t trials, Rng& rng) {
  if (trials == 0) throw std::invalid_argument("trials must be at least 1");
  std::size_t hits = 0;
  for (std::size_t t = 0; t < trials; ++t) {
    hits += loss_indicator(outcome, sample_bundle(spec, rng), market.valuations(), market.budgets());
  }
  return static_cast<double>(hits) / static_cast<double>(trials);
}

double welfare(const std::vector<Bundle>& allocation, const ValuationProfile& truth) {
  double w = 0.0;
  for (Player i = 0; i < allocation.size(); ++i) w += truth.eval(i, allocation[i]);
  return w;
}

double efficiency_ratio(double achieved, double optimal) {
  if (!(optimal > 0.0)) throw UndefinedError("efficiency ratio is undefined for zero optimal welfare");
  return achieved / optimal;
}

double efficiency_ratio(const std::vector<Bundle>& allocation, const ValuationProfile& truth,
                        const std::vector<Bundle>& optimal) {
  return efficiency_ratio(welfare(allocation, truth), welfare(optimal, truth));
}

bool is_envy_free(const Outcome& outcome, const ValuationProfile& truth, const BudgetVector& budgets) {
  const std::size_t n = outcome.players();
  for (Player i = 0; i < n; ++i) {
    const double own = truth.eval(i, outcome.allocation[i]);
    for (Player j = 0; j < n; ++j) {
      if (i == j || !affordable(outcome, outcome.allocation[j], budgets[i])) continue;
      if (own < truth.eval(i, outcome.allocation[j])) return false;
    }
  }
  return true;
}

bool is_walrasian(const Outcome& outcome, const MarketInstance& market) {
  const std::size_t n = market.players();
  const std::size_t k = market.goods();
  if (k > 22) throw std::invalid_argument("is_walrasian enumerates 2^k bundles; k = " + std::to_string(k) + " > 22");
  if (outcome.players() != n || outcome.goods() != k) throw DataError("outcome does not match the market shape");

  std::vector<double> own(n);
  for (Player i = 0; i < n; ++i) {
    const PriceTotal p = outcome.price_of(outcome.allocation[i]);
    if (p.infinite || !within_budget(p.amount, market.budgets()[i])) return false;
    own[i] = market.value(i, outcome.allocation[i]);
  }

  // Gray-code walk: one good toggles per step.
  Bundle cur(k);
  double price = 0.0;
  std::size_t burnt = 0;
  const std::uint64_t total = std::uint64_t{1} << k;
  for (std::uint64_t step = 1; step < total; ++step) {
    const Good g = static_cast<Good>(std::countr_zero(step));
    const double sign = cur.contains(g) ? -1.0 : 1.0;
    if (sign > 0) {
      cur.insert(g);
    } else {
      cur.erase(g);
    }
    if (outcome.prices[g].is_burn()) {
      burnt = sign > 0 ? burnt + 1 : burnt - 1;
    } else {
      price += sign * outcome.prices[g].amount();
    }
    if (burnt > 0) continue;
    for (Player i = 0; i < n; ++i) {
      if (within_budget(price, market.budgets()[i]) && strictly_better(market.value(i, cur), own[i])) return false;
    }
  }
  return true;
}

std::size_t sample_complexity(std::size_t k, double eps, double delta, double multiplier) {
  if (!(eps > 0.0 && eps < 1.0)) throw std::invalid_argument("eps must lie in (0, 1)");
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(multiplier > 0.0) || !std::isfinite(multiplier)) throw std::invalid_argument("multiplier must be positive");
  const double m = (multiplier / eps) * (static_cast<double>(k) * std::log(1.0 / eps) + std::log(1.0 / delta));
  return static_cast<std::size_t>(std::ceil(m));
}

}  // namespace pacmarket
