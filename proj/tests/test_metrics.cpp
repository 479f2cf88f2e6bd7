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

#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "pacmarket/errors.hpp"
#include "pacmarket/metrics.hpp"
#include "pacmarket/single_minded.hpp"
#include "pacmarket/unit_demand.hpp"
#include "support.hpp"

using namespace pacmarket;

namespace {

MarketInstance example_market() {
  return MarketInstance(BudgetVector({2, 1}), UnitDemand(Matrix::from_rows({{0, 5, 3}, {4, 1, 2}})));
}

// Player 0 holds their worthless good.
Outcome example_indirect() {
  Outcome o(2, 3);
  o.allocation[0] = Bundle(3, {0});
  o.allocation[1] = Bundle(3, {1, 2});
  o.prices = {Price(2), Price(1), Price(0)};
  return o;
}

}  // namespace

TEST_CASE("loss indicator") {
  const auto m = example_market();
  const auto o = example_indirect();
  CHECK(loss_indicator(o, Bundle(3, {2}), m.valuations(), m.budgets()) == 1);
  CHECK(loss_indicator(o, Bundle(3, {0, 1}), m.valuations(), m.budgets()) == 0);
  CHECK(loss_indicator(o, Bundle(3), m.valuations(), m.budgets()) == 0);
  Outcome burnt = o;
  burnt.prices[2] = Price::burn();
  CHECK(loss_indicator(burnt, Bundle(3, {2}), m.valuations(), m.budgets()) == 0);
}

TEST_CASE("ties are not violations") {
  const MarketInstance m(BudgetVector({1}), Additive(Matrix::from_rows({{1, 1}})));
  Outcome o(1, 2);
  o.allocation[0] = Bundle(2, {0});
  CHECK(loss_indicator(o, Bundle(2, {1}), m.valuations(), m.budgets()) == 0);
}

TEST_CASE("empirical loss") {
  const auto m = example_market();
  SampleSet s(2, 3);
  s.add(Bundle(3, {0, 1}), {5, 4});
  s.add(Bundle(3, {2}), {3, 2});
  const auto r = empirical_loss(example_indirect(), s, m.valuations(), m.budgets());
  CHECK(r.empirical == 0.5);
  REQUIRE(r.violating.size() == 1);
  CHECK(r.violating[0] == std::pair<Player, std::size_t>{0, 1});
  CHECK_THROWS_AS(empirical_loss(example_indirect(), SampleSet(2, 3), m.valuations(), m.budgets()), DataError);

  const auto own = empirical_loss(example_indirect(), s, std::vector<double>{0, 4}, m.budgets());
  CHECK(own.empirical == 0.5);
}

TEST_CASE("empirical loss is the mean of indicators") {
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto market = testing::random_market(static_cast<testing::Kind>(trial % 4), 3, 5, rng);
    const auto samples = make_sample_set(market, DistributionSpec::uniform(5), 20, rng);
    Outcome o(3, 5);
    for (Good g = 0; g < 5; ++g) {
      o.allocation[rng.uniform_int(0, 2)].insert(g);
      o.prices[g] = rng.bernoulli(0.1) ? Price::burn() : Price(rng.uniform(0, 4));
    }
    double sum = 0;
    for (const auto& rec : samples) {
      const int ind = loss_indicator(o, rec.bundle, market.valuations(), market.budgets());
      REQUIRE(ind == testing::oracle_loss(o, market, testing::mask_of(rec.bundle)));
      sum += ind;
    }
    const auto r = empirical_loss(o, samples, market.valuations(), market.budgets());
    REQUIRE(r.empirical == sum / 20);
  }
}

TEST_CASE("expected loss estimates") {
  const auto m = example_market();
  const auto spec = DistributionSpec::parse("explicit:{0,1}=0.5;{2}=0.5", 3);
  Rng rng(42);
  CHECK(std::abs(estimate_expected_loss(example_indirect(), m, spec, 10000, rng) - 0.5) < 0.03);
  const Outcome direct = direct_ud(make_sample_set(m, spec, 20, rng), m.budgets());
  CHECK(estimate_expected_loss(direct, m, spec, 1000, rng) == 0);
}

TEST_CASE("welfare and ratios") {
  const auto m = example_market();
  const std::vector<Bundle> none(2, Bundle(3));
  CHECK(welfare(none, m.valuations()) == 0);
  const auto a = example_indirect().allocation;
  CHECK(welfare(a, m.valuations()) == 2);
  CHECK(efficiency_ratio(a, m.valuations(), a) == 1);
  CHECK_THROWS_AS(efficiency_ratio(a, m.valuations(), none), UndefinedError);
  CHECK(efficiency_ratio(1, 4) == 0.25);
}

TEST_CASE("envy") {
  const auto m = example_market();
  Outcome o(2, 3);
  CHECK(is_envy_free(o, m.valuations(), m.budgets()));
  o.allocation[1] = Bundle(3, {1});
  CHECK_FALSE(is_envy_free(o, m.valuations(), m.budgets()));
  o.prices[1] = Price(3);
  CHECK(is_envy_free(o, m.valuations(), m.budgets()));
}

TEST_CASE("walrasian check") {
  const auto m = example_market();
  Outcome o(2, 3);
  o.allocation[0] = Bundle(3, {1});
  o.allocation[1] = Bundle(3, {0, 2});
  o.prices = {Price(0), Price(2), Price(0)};
  CHECK(is_walrasian(o, m));
  // A free good player 0 values more than nothing.
  Outcome bad(2, 3);
  bad.allocation[1] = Bundle(3, {0});
  CHECK_FALSE(is_walrasian(bad, m));
  const MarketInstance big(BudgetVector({1}), Additive(Matrix(1, 23)));
  CHECK_THROWS_AS(is_walrasian(Outcome(1, 23), big), std::invalid_argument);
}

TEST_CASE("walrasian check agrees with the plain oracle") {
  Rng rng(43);
  int positives = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const std::size_t n = rng.uniform_int(1, 4);
    const std::size_t k = rng.uniform_int(1, 6);
    const auto market = testing::random_market(static_cast<testing::Kind>(trial % 4), n, k, rng);
    Outcome o(n, k);
    for (Good g = 0; g < k; ++g) {
      o.allocation[rng.uniform_int(0, n - 1)].insert(g);
      o.prices[g] = Price(rng.bernoulli(0.3) ? 0.0 : rng.uniform(0, 12));
    }
    const bool w = is_walrasian(o, market);
    REQUIRE(w == testing::oracle_walrasian(o, market));
    if (w) {
      ++positives;
      REQUIRE(is_envy_free(o, market.valuations(), market.budgets()));
    }
  }
  CHECK(positives > 0);
}

TEST_CASE("sample complexity") {
  CHECK(sample_complexity(1, 0.5, 0.5) == 3);
  CHECK(sample_complexity(30, 0.05, 0.01) == 1890);
  CHECK(sample_complexity(10, 0.1, 0.05) == static_cast<std::size_t>(std::ceil(10 * (10 * std::log(10.0) + std::log(20.0)))));
  CHECK(sample_complexity(1, 0.5, 0.5, 2.0) == 6);
  CHECK(sample_complexity(5, 0.999, 0.5) == 1);
  CHECK_THROWS(sample_complexity(1, 0, 0.5));
  CHECK_THROWS(sample_complexity(1, 0.5, 1));
  CHECK_THROWS(sample_complexity(1, 0.5, 0.5, 0));
}
