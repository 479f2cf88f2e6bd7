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

namespace pacmarket::detail {

// Burns goods until no player can afford an original sample they value above
// their recorded value `recorded[i]`. Samples inside a player's own bundle
// are skipped. Scans players, then samples, by index
// and handles the first violation found before rescanning. At most one good
// is burnt per violation, so the loop runs at most k times.
void burn_until_consistent(Outcome& out, std::vector<double>& recorded, const SampleSet& samples,
                           const BudgetVector& budgets);

// Splits budget b evenly over the members of a.
void price_evenly(Outcome& out, const Bundle& a, double b);

// Non-burnt goods nobody holds go to `to` at price 0.
void give_leftovers(Outcome& out, Player to);

}  // namespace pacmarket::detail
