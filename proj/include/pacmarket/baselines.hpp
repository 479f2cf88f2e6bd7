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

#include <cstdint>
#include <optional>
#include <vector>

#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"

namespace pacmarket {

/// Serial dictatorship on the true unit-demand values: each player in budget
/// order takes their best remaining good at a price equal to their budget.
/// Leftovers go to the last player at price 0. Throws DataError for other
/// valuation families.
Outcome optimal_ud_equilibrium(const MarketInstance& market);

/// Welfare-maximal allocation for additive truth: every good goes to the
/// player valuing it most (lowest index on ties). Budgets are ignored.
std::vector<Bundle> opt_welfare_additive(const MarketInstance& market);

/// Welfare-maximal partition for any valuation family by branch and bound.
/// Throws ResourceLimitError after `node_limit` search nodes.
std::vector<Bundle> opt_welfare_bruteforce(const MarketInstance& market, std::uint64_t node_limit = 50'000'000);

struct SmWelfareOptimum {
  // Largest number of players with mutually disjoint desired sets. This is
  // an upper bound on the welfare of any single-minded equilibrium.
  std::size_t packing = 0;
  Outcome outcome;
  // True when `outcome` passed the exhaustive equilibrium check, in which
  // case its welfare equals `packing`.
  bool verified = false;
};

/// Maximum disjoint packing of desired sets, realized as an outcome that
/// prices each winner's set at their budget and gives leftovers to the last
/// player. Every maximum packing is tried until one verifies as an
/// equilibrium (k <= 22 only). Requires n <= 20; throws ResourceLimitError
/// after `node_limit` search nodes. Returns nullopt for other families.
std::optional<SmWelfareOptimum> optimal_sm_welfare_equilibrium(const MarketInstance& market,
                                                                std::uint64_t node_limit = 10'000'000);

struct FractionalAllocation {
  Matrix shares;               // n x k, columns sum to at most 1
  std::vector<double> prices;  // per good
  std::size_t iterations = 0;
};

/// Equilibrium of the divisible linear Fisher market via proportional
/// response dynamics. Stops when the largest bid change drops below
/// `tolerance`. Every 16 rounds the support the bids have settled on is also
/// guessed and, when it is a forest, solved exactly; an exact solution that
/// passes every equilibrium condition is returned early. Throws
/// ResourceLimitError if neither happens within `iterations` rounds.
FractionalAllocation divisible_additive_equilibrium(const MarketInstance& market, std::size_t iterations = 10'000,
                                                    double tolerance = 1e-8);

}  // namespace pacmarket
