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

/// Samples after superset reduction: no bundle is a strict subset of another.
/// values(i, j) is player i's value for bundles[j].
struct ReducedSamples {
  std::vector<Bundle> bundles;
  Matrix values;

  std::size_t size() const { return bundles.size(); }
};

/// Repeatedly replaces a strict superset T of some bundle S by T \ S, with
/// value v(T) - v(S), until no nesting remains. Empty bundles are dropped and
/// duplicates keep their first occurrence. Exact for additive truth.
ReducedSamples preprocess_additive(const SampleSet& samples);

/// Consistent outcome for additive markets.
///
/// Players in budget order take their best reduced bundle that is still free,
/// priced at their budget split evenly. Goods are then burnt until no player
/// can afford a training sample worth more than their recorded value.
/// Surviving untouched reduced bundles go to their highest-value player at
/// price 0, and remaining goods to player 0 at price 0.
///
/// certified_values holds each player's recorded value, which is exact at
/// allocation time and reset to 0 once a good is taken from the player.
Outcome direct_additive(const SampleSet& samples, const BudgetVector& budgets);

}  // namespace pacmarket
