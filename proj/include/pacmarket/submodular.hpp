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

/// Reduced bundles with value underestimates, plus each player's fallback
/// bundle F_i and value floor c_i.
struct SubmodReduced {
  std::vector<Bundle> bundles;
  Matrix values;                 // values(i, j) <= v_i(bundles[j]) for submodular truth
  std::vector<Bundle> fallbacks;  // F_i
  std::vector<double> floors;     // c_i
};

/// Strips every strictly contained original sample out of each sample
/// (smallest first, ties by index), subtracting its value and clamping at 0.
/// Bundles that still strictly contain another reduced bundle are dropped,
/// and duplicates keep the larger estimate per player.
///
/// F_i is the union of samples worth at least c_i to player i, minus every
/// sample worth less, plus all goods that appear in no sample.
SubmodReduced preprocess_submod(const SampleSet& samples, const std::vector<double>& floors);

/// Consistent outcome for monotone submodular markets. Each c_i must not
/// exceed player i's best single-good value; all zeros is always valid.
///
/// Players in budget order take F_i (recorded at value c_i) when every
/// surviving reduced bundle is worth less than c_i to them and F_i is still
/// free, otherwise their best surviving reduced bundle. Goods are then burnt
/// as in direct_additive and leftovers go to player 0 at price 0.
Outcome direct_submod(const SampleSet& samples, const BudgetVector& budgets, const std::vector<double>& floors);

}  // namespace pacmarket
