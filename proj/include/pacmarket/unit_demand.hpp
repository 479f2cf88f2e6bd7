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

#include <limits>
#include <optional>
#include <vector>

#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"
#include "pacmarket/rng.hpp"

namespace pacmarket {

/// Per-good value estimates learned from samples: the smallest sample value
/// among samples containing the good. Goods that never appear are unseen.
class UnitDemandEstimate {
 public:
  UnitDemandEstimate(std::size_t players, std::size_t goods);

  std::size_t players() const { return players_; }
  std::size_t goods() const { return goods_; }

  bool seen(Good g) const { return seen_[g]; }
  // nullopt for unseen goods.
  std::optional<double> estimate(Player i, Good g) const;
  void set(Player i, Good g, double v);

 private:
  std::size_t players_;
  std::size_t goods_;
  std::vector<double> est_;
  std::vector<bool> seen_;
};

UnitDemandEstimate learn_ud_estimate(const SampleSet& samples);

/// Indirect learning: estimate singleton values, then run serial dictatorship
/// on the estimates in budget order, each pick priced at the picker's budget.
/// Observed goods are exhausted before unobserved ones. Ties go to the lowest
/// good index, or are broken uniformly at random when `tie_rng` is given.
Outcome indirect_ud(const SampleSet& samples, const BudgetVector& budgets, Rng* tie_rng = nullptr);

/// Direct learning of a consistent outcome. For each player in budget order,
/// walks the distinct sample values from the top; at each value level the
/// candidate is the intersection of the samples at that level minus every
/// lower-valued sample. The first candidate that is nonempty and disjoint
/// from earlier allocations is allocated, priced at the budget split evenly.
Outcome direct_ud(const SampleSet& samples, const BudgetVector& budgets);

}  // namespace pacmarket
