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
#include <string>
#include <variant>
#include <vector>

#include "pacmarket/bundle.hpp"
#include "pacmarket/market.hpp"
#include "pacmarket/rng.hpp"

namespace pacmarket {

/// Each good is included independently with its own probability.
struct ProductDist {
  std::vector<double> probabilities;
};

/// Uniform over all bundles of exactly `size` goods.
struct FixedSizeDist {
  std::size_t size;
};

/// Uniform over all 2^k bundles.
struct UniformPowerSetDist {};

/// Finite support with explicit weights.
struct ExplicitDist {
  std::vector<Bundle> bundles;
  std::vector<double> weights;
};

/// Generative description of a bundle distribution over k goods.
class DistributionSpec {
 public:
  using Variant = std::variant<ProductDist, FixedSizeDist, UniformPowerSetDist, ExplicitDist>;

  DistributionSpec(std::size_t goods, Variant v);

  static DistributionSpec product(std::size_t goods, double p);
  static DistributionSpec product(std::vector<double> probabilities);
  static DistributionSpec fixed_size(std::size_t goods, std::size_t size);
  static DistributionSpec uniform(std::size_t goods);
  static DistributionSpec explicit_support(std::size_t goods, std::vector<Bundle> bundles,
                                           std::vector<double> weights);

  /// Parses the config spelling: `product:0.5`, `product:0.1,0.2,...`,
  /// `fixed:3`, `uniform`, or `explicit:{0,1}=0.5;{2}=0.5`.
  static DistributionSpec parse(const std::string& text, std::size_t goods);
  std::string to_string() const;

  std::size_t goods() const { return goods_; }
  const Variant& variant() const { return v_; }

 private:
  std::size_t goods_;
  Variant v_;
  std::vector<double> cumulative_;  // explicit support only
  friend Bundle sample_bundle(const DistributionSpec&, Rng&);
};

Bundle sample_bundle(const DistributionSpec& spec, Rng& rng);

/// Draws m bundles i.i.d. and records every player's true value for each.
SampleSet make_sample_set(const MarketInstance& market, const DistributionSpec& spec, std::size_t m, Rng& rng);

enum class AdversarialKind { kUnitDemand, kSingleMinded, kAdditive };

struct AdversarialInstance {
  MarketInstance market;          // hidden truth, drawn from the consistent family
  SampleSet samples;              // the single observed sample
  std::vector<Good> favourite;    // favourite (or desired) good per player
  Bundle observed;                // G, or G' for the additive n < k case
};

/// Budgets b_i = b_1 - delta_i with 0 = delta_1 < delta_2 < ... < delta_n.
/// `kind` fixes the constraint on the offsets: for unit demand they sum to
/// delta * b_1, for additive the largest equals delta * b_1 / k.
std::vector<double> adversarial_budgets(AdversarialKind kind, std::size_t n, std::size_t k, double delta,
                                        double top_budget);

/// Valuation profile of the worst-case family for a given favourite-good
/// assignment. Unit demand gives the favourite good value b_i and every other
/// good a tiny distinct value below 1e-9 * b_n, so rows stay tie-free.
ValuationProfile adversarial_truth(AdversarialKind kind, const std::vector<double>& budgets, std::size_t k,
                                   const std::vector<Good>& favourite,
                                   const std::vector<Player>& outside_owner = {});

/// Worst-case instances behind the information-theoretic efficiency bounds.
/// delta is ignored for the single-minded kind.
AdversarialInstance adversarial_instance(AdversarialKind kind, std::size_t n, std::size_t k, double delta, Rng& rng);

}  // namespace pacmarket
