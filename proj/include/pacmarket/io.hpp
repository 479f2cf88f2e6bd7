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

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"

namespace pacmarket::io {

// Samples: one JSON object per line, {"bundle":[goods],"values":[v_1..v_n]}.
void write_samples(std::ostream& out, const SampleSet& samples);
// `goods` fixes k; without it k is one past the largest good seen.
SampleSet read_samples(std::istream& in, std::optional<std::size_t> goods = std::nullopt);

// Outcome: {"allocation":[[...]...],"prices":[...],"burn":[...]} where burnt
// goods carry a null price. Optional extra keys: "budgets" and
// "certified_values".
std::string outcome_to_json(const Outcome& outcome, const BudgetVector* budgets = nullptr);
Outcome outcome_from_json(const std::string& text);
// The "budgets" key of an outcome document, if present.
std::optional<BudgetVector> outcome_budgets(const std::string& text);

// Market: {"n","k","budgets","family", plus "values" | "desired" |
// "values"+"slots"+"threshold", and optional "budget_normalized"}.
std::string market_to_json(const MarketInstance& market);
MarketInstance market_from_json(const std::string& text);

// Budgets: a JSON array, or an object {"budgets":[...], "k": K}.
struct BudgetFile {
  BudgetVector budgets;
  std::optional<std::size_t> goods;
};
BudgetFile budgets_from_json(const std::string& text);

std::vector<double> doubles_from_json(const std::string& text);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace pacmarket::io
