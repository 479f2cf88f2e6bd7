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

#include "doctest.h"
#include "pacmarket/additive.hpp"
#include "pacmarket/baselines.hpp"
#include "pacmarket/errors.hpp"
#include "pacmarket/metrics.hpp"
#include "pacmarket/single_minded.hpp"
#include "pacmarket/submodular.hpp"
#include "pacmarket/unit_demand.hpp"
#include "support.hpp"

using namespace pacmarket;

TEST_CASE("serial dictatorship equilibrium") {
  const MarketInstance one(BudgetVector({1}), UnitDemand(Matrix::from_rows({{1, 3, 2}})));
  const Outcome o = optimal_ud_equilibrium(one);
  CHECK(o.allocation[0] == Bundle::full(3));
  CHECK(o.prices[1].amount() == 1);

  const MarketInstance same(BudgetVector({3, 2, 1}), UnitDemand(Matrix::from_rows({{3, 2, 1}, {3, 2, 1}, {3, 2, 1}})));
  const Outcome s = optimal_ud_equilibrium(same);
  CHECK(s.allocation[0] == Bundle(3, {0}));
  CHECK(s.allocation[1] == Bundle(3, {1}));
  CHECK(s.allocation[2] == Bundle(3, {2}));
  CHECK_THROWS_AS(optimal_ud_equilibrium(MarketInstance(BudgetVector({1}), Additive(Matrix::from_rows({{1}})))),
                  DataError);
}

TEST_CASE("serial dictatorship is an equilibrium with the unique equilibrium welfare") {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform_int(1, 5);
    const std::size_t k = rng.uniform_int(1, 8);
    const auto market = testing::random_market(testing::Kind::kUnitDemand, n, k, rng);
    const Outcome o = optimal_ud_equilibrium(market);
    REQUIRE(is_walrasian(o, market));
    REQUIRE(welfare(o.allocation, market.valuations()) ==
            doctest::Approx(testing::oracle_serial_welfare(market.valuations().get_if<UnitDemand>()->values)));
  }
}

TEST_CASE("equilibrium welfare matches exhaustive search on 3x3 markets") {
  // Enumerate every assignment with serial-style prices and keep equilibria.
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const auto market = testing::random_market(testing::Kind::kUnitDemand, 3, 3, rng);
    const double target = welfare(optimal_ud_equilibrium(market).allocation, market.valuations());
    int found = 0;
    for (int code = 0; code < 27; ++code) {
      Outcome o(3, 3);
      int c = code;
      for (Good g = 0; g < 3; ++g, c /= 3) o.allocation[c % 3].insert(g);
      // Price each player's best good at their budget, the rest at 0.
      for (Player i = 0; i < 3; ++i) {
        if (o.allocation[i].empty()) continue;
        Good best = o.allocation[i].first();
        o.allocation[i].for_each([&](Good g) {
          if (market.valuations().singleton(i, g) > market.valuations().singleton(i, best)) best = g;
        });
        o.prices[best] = Price(market.budgets()[i]);
      }
      if (!is_walrasian(o, market)) continue;
      ++found;
      CHECK(welfare(o.allocation, market.valuations()) == doctest::Approx(target));
    }
    CHECK(found > 0);
  }
}

TEST_CASE("additive optimum") {
  const MarketInstance one(BudgetVector({1}), Additive(Matrix::from_rows({{1, 2}})));
  CHECK(opt_welfare_additive(one)[0] == Bundle::full(2));
  const MarketInstance cross(BudgetVector({2, 1}), Additive(Matrix::from_rows({{2, 1}, {1, 2}})));
  const auto a = opt_welfare_additive(cross);
  CHECK(a[0] == Bundle(2, {0}));
  CHECK(a[1] == Bundle(2, {1}));
}

TEST_CASE("brute-force optimum matches the exhaustive oracle") {
  Rng rng(53);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = rng.uniform_int(1, 4);
    const std::size_t k = rng.uniform_int(1, 6);
    const auto market = testing::random_market(static_cast<testing::Kind>(trial % 4), n, k, rng);
    const auto a = opt_welfare_bruteforce(market);
    REQUIRE(validate_outcome([&] {
              Outcome o(n, k);
              o.allocation = a;
              return o;
            }(),
                             k)
                .empty());
    REQUIRE(welfare(a, market.valuations()) == doctest::Approx(testing::oracle_opt_welfare(market)));
    if (trial % 4 == 2) {
      REQUIRE(welfare(a, market.valuations()) ==
              doctest::Approx(welfare(opt_welfare_additive(market), market.valuations())));
    }
  }
  const MarketInstance solo(BudgetVector({1}), ThresholdSubmodular(Matrix::from_rows({{1, 1, 1}}), {0, 1, 2}, 2));
  CHECK(opt_welfare_bruteforce(solo)[0] == Bundle::full(3));
}

TEST_CASE("brute-force optimum on 3x3 unit demand is a max-weight matching") {
  Rng rng(54);
  for (int trial = 0; trial < 50; ++trial) {
    const auto market = testing::random_market(testing::Kind::kUnitDemand, 3, 3, rng);
    const auto& v = market.valuations().get_if<UnitDemand>()->values;
    double best = 0;
    const int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perms) best = std::max(best, v(0, p[0]) + v(1, p[1]) + v(2, p[2]));
    CHECK(welfare(opt_welfare_bruteforce(market), market.valuations()) == doctest::Approx(best));
  }
}

TEST_CASE("brute-force node limit") {
  Rng rng(55);
  const auto market = testing::random_market(testing::Kind::kSubmodular, 6, 12, rng);
  CHECK_THROWS_AS(opt_welfare_bruteforce(market, 10), ResourceLimitError);
}

TEST_CASE("optimum dominates every learned allocation") {
  Rng rng(56);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = rng.uniform_int(1, 4);
    const std::size_t k = rng.uniform_int(1, 6);
    const auto kind = static_cast<testing::Kind>(trial % 4);
    const auto market = testing::random_market(kind, n, k, rng);
    const auto samples = make_sample_set(market, testing::random_spec(k, trial, rng), 20, rng);
    Outcome o;
    switch (kind) {
      case testing::Kind::kUnitDemand: o = direct_ud(samples, market.budgets()); break;
      case testing::Kind::kSingleMinded: o = sm_equilibrium(learn_desired_sets(samples), market.budgets()); break;
      case testing::Kind::kAdditive: o = direct_additive(samples, market.budgets()); break;
      case testing::Kind::kSubmodular: o = direct_submod(samples, market.budgets(), std::vector<double>(n, 0)); break;
    }
    REQUIRE(welfare(opt_welfare_bruteforce(market), market.valuations()) >=
            welfare(o.allocation, market.valuations()) - 1e-9);
  }
}

TEST_CASE("single-minded optimal equilibrium") {
  {
    const MarketInstance m(BudgetVector({3, 2, 1}), SingleMinded(4, {Bundle(4, {0}), Bundle(4, {1, 2}), Bundle(4, {3})}));
    const auto r = optimal_sm_welfare_equilibrium(m);
    REQUIRE(r);
    CHECK(r->packing == 3);
    CHECK(r->verified);
  }
  {
    const MarketInstance m(BudgetVector({3, 2, 1}), SingleMinded(2, {Bundle(2, {0}), Bundle(2, {0}), Bundle(2, {0})}));
    const auto r = optimal_sm_welfare_equilibrium(m);
    REQUIRE(r);
    CHECK(r->packing == 1);
    CHECK(r->verified);
    CHECK(welfare(r->outcome.allocation, m.valuations()) == 1);
  }
  CHECK_FALSE(optimal_sm_welfare_equilibrium(MarketInstance(BudgetVector({1}), Additive(Matrix::from_rows({{1}})))));
  Rng rng(57);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 5;
    const std::size_t k = rng.uniform_int(1, 8);
    const auto m = testing::random_market(testing::Kind::kSingleMinded, n, k, rng);
    const auto r = optimal_sm_welfare_equilibrium(m);
    REQUIRE(r);
    REQUIRE(r->packing == testing::oracle_packing(m.valuations().get_if<SingleMinded>()->desired));
    if (r->verified) {
      REQUIRE(is_walrasian(r->outcome, m));
      REQUIRE(welfare(r->outcome.allocation, m.valuations()) == r->packing);
    }
  }
}

TEST_CASE("proportional response equilibrium") {
  {
    const MarketInstance m(BudgetVector({2}), Additive(Matrix::from_rows({{1, 3}})));
    const auto f = divisible_additive_equilibrium(m);
    CHECK(f.shares(0, 0) == doctest::Approx(1));
    CHECK(f.shares(0, 1) == doctest::Approx(1));
    CHECK(f.prices[0] + f.prices[1] == doctest::Approx(2));
  }
  {
    const MarketInstance m(BudgetVector({1.0001, 1}), Additive(Matrix::from_rows({{1, 1}, {1, 1}})));
    const auto f = divisible_additive_equilibrium(m);
    for (Player i = 0; i < 2; ++i) {
      for (Good g = 0; g < 2; ++g) CHECK(std::abs(f.shares(i, g) - 0.5) < 0.01);
    }
  }
  Rng rng(58);
  for (int trial = 0; trial < 30; ++trial) {
    const auto m = testing::random_market(testing::Kind::kAdditive, rng.uniform_int(1, 8), rng.uniform_int(1, 8), rng);
    const auto f = divisible_additive_equilibrium(m);
    double total = 0;
    for (double p : f.prices) total += p;
    CHECK(total == doctest::Approx(m.budgets().total()).epsilon(1e-6));
    for (Good g = 0; g < m.goods(); ++g) {
      double col = 0;
      for (Player i = 0; i < m.players(); ++i) col += f.shares(i, g);
      CHECK(col <= 1 + 1e-9);
    }
  }
  const MarketInstance hard(BudgetVector({2, 1}), Additive(Matrix::from_rows({{1, 0.5}, {0.5, 1}})));
  CHECK_THROWS_AS(divisible_additive_equilibrium(hard, 2, 1e-15), ResourceLimitError);
}
