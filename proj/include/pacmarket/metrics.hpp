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
#include <utility>
#include <vector>

#include "pacmarket/distributions.hpp"
#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"
#include "pacmarket/rng.hpp"

namespace pacmarket {

struct LossReport {
  double empirical = 0.0;
  // (player, sample index) for every player that both prefers and can afford the sample.
  std::vector<std::pair<Player, std::size_t>> violating;
};

/// 1 iff some player strictly prefers `bundle` to their allocation and can
/// afford it at the outcome's prices.
int loss_indicator(const Outcome& outcome, const Bundle& bundle, const ValuationProfile& truth,
                   const BudgetVector& budgets);

/// Mean of loss_indicator over the samples. Throws DataError when empty.
LossReport empirical_loss(const Outcome& outcome, const SampleSet& samples, const ValuationProfile& truth,
                          const BudgetVector& budgets);

/// Same, without a valuation oracle: sample values come from the records and
/// own-bundle values from `own_values` (typically outcome.certified_values).
/// With lower bounds for `own_values` this overstates the true loss.
LossReport empirical_loss(const Outcome& outcome, const SampleSet& samples, const std::vector<double>& own_values,
                          const BudgetVector& budgets);

/// Monte Carlo estimate of the expected loss over fresh draws from `spec`.
double estimate_expected_loss(const Outcome& outcome, const MarketInstance& market, const DistributionSpec& spec,
                              std::size_t trials, Rng& rng);

double welfare(const std::vector<Bundle>& allocation, const ValuationProfile& truth);

/// welfare(allocation) / welfare(optimal). Throws UndefinedError when the
/// optimum has zero welfare.
double efficiency_ratio(const std::vector<Bundle>& allocation, const ValuationProfile& truth,
                        const std::vector<Bundle>& optimal);
double efficiency_ratio(double achieved, double optimal);

/// For all i, j: v_i(A_i) >= v_i(A_j), or player i cannot afford A_j.
bool is_envy_free(const Outcome& outcome, const ValuationProfile& truth, const BudgetVector& budgets);

/// Exhaustive equilibrium check over all 2^k bundles: each player's bundle is
/// affordable and no affordable bundle is worth strictly more. Prices and
/// values are compared with a 1e-9 relative slack. Throws std::invalid_argument
/// for k > 22.
bool is_walrasian(const Outcome& outcome, const MarketInstance& market);

/// ceil((C / eps) * (k ln(1/eps) + ln(1/delta))). eps and delta in (0, 1), C > 0.
std::size_t sample_complexity(std::size_t k, double eps, double delta, double multiplier = 1.0);

}  // namespace pacmarket
