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
#include <optional>
#include <vector>

#include "pacmarket/bundle.hpp"
#include "pacmarket/valuation.hpp"

namespace pacmarket {

/// Player budgets, strictly decreasing and positive. Player 0 is the richest.
class BudgetVector {
 public:
  BudgetVector() = default;
  explicit BudgetVector(std::vector<double> budgets);

  std::size_t size() const { return budgets_.size(); }
  double operator[](Player i) const { return budgets_[i]; }
  const std::vector<double>& values() const { return budgets_; }
  double total() const;

 private:
  std::vector<double> budgets_;
};

struct SampleRecord {
  Bundle bundle;
  std::vector<double> values;  // one entry per player
};

/// Observed bundles with each player's value for them. Duplicates allowed.
class SampleSet {
 public:
  SampleSet(std::size_t players, std::size_t goods) : players_(players), goods_(goods) {}

  std::size_t players() const { return players_; }
  std::size_t goods() const { return goods_; }
  std::size_t size() const { return records_.size(); }
  bool empty() const { return records_.empty(); }

  void add(Bundle bundle, std::vector<double> values);
  const SampleRecord& operator[](std::size_t j) const { return records_[j]; }
  const std::vector<SampleRecord>& records() const { return records_; }

  // First `m` records, used by sweeps that grow the training set.
  SampleSet prefix(std::size_t m) const;
  // Union of all observed bundles.
  Bundle observed() const;

  auto begin() const { return records_.begin(); }
  auto end() const { return records_.end(); }

 private:
  std::size_t players_;
  std::size_t goods_;
  std::vector<SampleRecord> records_;
};

class MarketInstance {
 public:
  MarketInstance(BudgetVector budgets, ValuationProfile valuations, bool budget_normalized = false);

  std::size_t players() const { return budgets_.size(); }
  std::size_t goods() const { return valuations_.goods(); }
  const BudgetVector& budgets() const { return budgets_; }
  const ValuationProfile& valuations() const { return valuations_; }
  bool budget_normalized() const { return budget_normalized_; }

  double value(Player i, const Bundle& b) const { return valuations_.eval(i, b); }

  // Evaluates every player on `bundle` and appends the record.
  void observe(SampleSet& samples, Bundle bundle) const;
  // Throws DataError if any recorded value disagrees with the true profile.
  void check_consistent(const SampleSet& samples) const;

 private:
  BudgetVector budgets_;
  ValuationProfile valuations_;
  bool budget_normalized_;
};

}  // namespace pacmarket
