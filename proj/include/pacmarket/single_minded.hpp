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

#include <vector>

#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"

namespace pacmarket {

/// Learned desired set per player. Contains the true desired set whenever
/// the samples were generated by a single-minded profile.
struct DesiredSets {
  std::vector<Bundle> sets;

  std::size_t players() const { return sets.size(); }
  // The learned sets as a single-minded valuation profile.
  ValuationProfile as_profile(std::size_t goods) const;
};

/// Intersection of each player's positively valued samples, or all of G when
/// a player has none. Throws DataError on a value outside {0, 1}.
DesiredSets learn_desired_sets(const SampleSet& samples);

/// Where goods nobody demands end up.
enum class Leftovers {
  kLastPlayer,  // given to the poorest player at price 0
  kUnassigned,  // kept by nobody at price 0; needed for envy-freeness under
                // the true valuations when learned sets are loose
};

/// Exact equilibrium for single-minded players with distinct budgets.
///
/// Goods are processed in index order. A good wanted by one active player is
/// given away at price 0; a contested good is sold to the active demander
/// with the largest remaining budget at a price just above the runner-up's
/// remaining budget, after which every player whose unbought demand no longer
/// fits their remaining budget drops out. Leftovers follow `leftovers`.
Outcome sm_equilibrium(const DesiredSets& desired, const BudgetVector& budgets,
                       Leftovers leftovers = Leftovers::kLastPlayer);

}  // namespace pacmarket
