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

// Shared fixtures and brute-force oracles for the test suite. The oracles
// work on raw masks and matrices so they do not reuse library evaluation.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <vector>

#include "pacmarket/distributions.hpp"
#include "pacmarket/market.hpp"
#include "pacmarket/outcome.hpp"
#include "pacmarket/rng.hpp"
#include "pacmarket/valuation.hpp"

namespace testing {

using namespace pacmarket;

inline std::vector<double> random_budgets(std::size_t n, Rng& rng, double lo = 1.0, double hi = 10.0) {
  std::vector<double> b(n);
  for (bool ok = false; !ok;) {
    for (auto& x : b) x = rng.uniform(lo, hi);
    std::sort(b.begin(), b.end(), std::greater<>());
    ok = std::adjacent_find(b.begin(), b.end()) == b.end();
  }
  return b;
}

inline Matrix random_matrix(std::size_t n, std::size_t k, Rng& rng, double lo = 0.0, double hi = 1.0) {
  Matrix m(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < k; ++g) m(i, g) = rng.uniform(lo, hi);
  }
  return m;
}

// Scales each row so its maximum equals the player's budget.
inline Matrix normalize_rows(Matrix m, const std::vector<double>& budgets) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    std::size_t top = 0;
    for (std::size_t g = 0; g < m.cols(); ++g) {
      if (m(i, g) > m(i, top)) top = g;
    }
    const double s = budgets[i] / m(i, top);
    for (std::size_t g = 0; g < m.cols(); ++g) m(i, g) *= s;
    m(i, top) = budgets[i];
  }
  return m;
}

inline std::vector<Bundle> random_desired(std::size_t n, std::size_t k, Rng& rng, std::size_t max_size) {
  std::vector<Bundle> d;
  for (std::size_t i = 0; i < n; ++i) {
    Bundle b(k);
    const std::size_t s = rng.uniform_int(1, std::min(max_size, k));
    while (b.size() < s) b.insert(rng.uniform_int(0, k - 1));
    d.push_back(b);
  }
  return d;
}

inline ThresholdSubmodular random_threshold(std::size_t n, std::size_t k, Rng& rng, const std::vector<double>* budgets) {
  Matrix v = random_matrix(n, k, rng, 0.05, 1.0);
  if (budgets != nullptr) v = normalize_rows(v, *budgets);
  const std::size_t slots = rng.uniform_int(1, k);
  std::vector<std::size_t> slot_of(k);
  for (auto& s : slot_of) s = rng.uniform_int(0, slots - 1);
  // Make sure slot ids are dense.
  for (std::size_t s = 0; s < std::min(slots, k); ++s) slot_of[s] = s;
  return ThresholdSubmodular(v, slot_of, rng.uniform_int(1, slots));
}

enum class Kind { kUnitDemand, kSingleMinded, kAdditive, kSubmodular };

// Random market of the given family. Monotone families are budget-normalized.
inline MarketInstance random_market(Kind kind, std::size_t n, std::size_t k, Rng& rng) {
  const auto b = random_budgets(n, rng);
  switch (kind) {
    case Kind::kUnitDemand:
      return MarketInstance(BudgetVector(b), UnitDemand(normalize_rows(random_matrix(n, k, rng, 0.05, 1.0), b)), true);
    case Kind::kAdditive:
      return MarketInstance(BudgetVector(b), Additive(normalize_rows(random_matrix(n, k, rng, 0.05, 1.0), b)), true);
    case Kind::kSubmodular:
      return MarketInstance(BudgetVector(b), random_threshold(n, k, rng, &b), true);
    case Kind::kSingleMinded:
      return MarketInstance(BudgetVector(b), SingleMinded(k, random_desired(n, k, rng, 3)));
  }
  throw std::logic_error("kind");
}

// One of the four distribution families, chosen by `which`.
inline DistributionSpec random_spec(std::size_t k, std::size_t which, Rng& rng) {
  switch (which % 4) {
    case 0:
      return DistributionSpec::product(k, rng.uniform(0.2, 0.8));
    case 1:
      return DistributionSpec::fixed_size(k, rng.uniform_int(1, k));
    case 2:
      return DistributionSpec::uniform(k);
    default: {
      std::vector<Bundle> support;
      std::vector<double> w;
      const std::size_t s = rng.uniform_int(1, 6);
      for (std::size_t j = 0; j < s; ++j) {
        Bundle b(k);
        for (Good g = 0; g < k; ++g) {
          if (rng.bernoulli(0.4)) b.insert(g);
        }
        if (b.empty()) b.insert(rng.uniform_int(0, k - 1));
        support.push_back(b);
        w.push_back(1.0 / static_cast<double>(s));
      }
      return DistributionSpec::explicit_support(k, support, w);
    }
  }
}

// ---------------------------------------------------------------------------
// Oracles over raw masks.

inline std::uint64_t mask_of(const Bundle& b) {
  std::uint64_t m = 0;
  for (Good g : b.members()) m |= std::uint64_t{1} << g;
  return m;
}

inline double oracle_value(const ValuationProfile& v, std::size_t i, std::uint64_t mask) {
  const std::size_t k = v.goods();
  if (const auto* ud = v.get_if<UnitDemand>()) {
    double best = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      if (mask >> g & 1) best = std::max(best, ud->values(i, g));
    }
    return best;
  }
  if (const auto* add = v.get_if<Additive>()) {
    double s = 0.0;
    for (std::size_t g = 0; g < k; ++g) {
      if (mask >> g & 1) s += add->values(i, g);
    }
    return s;
  }
  if (const auto* sm = v.get_if<SingleMinded>()) {
    const std::uint64_t d = mask_of(sm->desired[i]);
    return (mask & d) == d ? 1.0 : 0.0;
  }
  const auto* ts = v.get_if<ThresholdSubmodular>();
  std::vector<double> best(ts->slot_count, 0.0);
  for (std::size_t g = 0; g < k; ++g) {
    if (mask >> g & 1) best[ts->slot_of[g]] = std::max(best[ts->slot_of[g]], ts->values(i, g));
  }
  std::sort(best.begin(), best.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t t = 0; t < std::min(ts->threshold, best.size()); ++t) s += best[t];
  return s;
}

// Best welfare over all n^k assignments of goods to players.
inline double oracle_opt_welfare(const MarketInstance& m) {
  const std::size_t n = m.players();
  const std::size_t k = m.goods();
  std::vector<std::uint64_t> masks(n, 0);
  double best = 0.0;
  std::function<void(std::size_t)> rec = [&](std::size_t g) {
    if (g == k) {
      double w = 0.0;
      for (std::size_t i = 0; i < n; ++i) w += oracle_value(m.valuations(), i, masks[i]);
      best = std::max(best, w);
      return;
    }
    for (std::size_t i = 0; i < n; ++i) {
      masks[i] |= std::uint64_t{1} << g;
      rec(g + 1);
      masks[i] &= ~(std::uint64_t{1} << g);
    }
  };
  rec(0);
  return best;
}

// Plain 2^k equilibrium check with price sums recomputed per bundle.
inline bool oracle_walrasian(const Outcome& o, const MarketInstance& m) {
  const std::size_t n = m.players();
  const std::size_t k = m.goods();
  auto price = [&](std::uint64_t mask, bool& burnt) {
    double p = 0.0;
    burnt = false;
    for (std::size_t g = 0; g < k; ++g) {
      if (!(mask >> g & 1)) continue;
      if (o.prices[g].is_burn()) burnt = true;
      else p += o.prices[g].amount();
    }
    return p;
  };
  for (std::size_t i = 0; i < n; ++i) {
    bool burnt = false;
    const std::uint64_t own = mask_of(o.allocation[i]);
    const double p = price(own, burnt);
    if (burnt || p > m.budgets()[i] * (1 + 1e-9)) return false;
    const double v = oracle_value(m.valuations(), i, own);
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << k); ++s) {
      const double ps = price(s, burnt);
      if (burnt || ps > m.budgets()[i] * (1 + 1e-9)) continue;
      if (oracle_value(m.valuations(), i, s) > v + 1e-9 * std::max(1.0, v)) return false;
    }
  }
  return true;
}

// Loss over explicit masks, using strict comparisons and exact budgets.
inline int oracle_loss(const Outcome& o, const MarketInstance& m, std::uint64_t s) {
  double p = 0.0;
  for (std::size_t g = 0; g < m.goods(); ++g) {
    if (!(s >> g & 1)) continue;
    if (o.prices[g].is_burn()) return 0;
    p += o.prices[g].amount();
  }
  for (std::size_t i = 0; i < m.players(); ++i) {
    if (p <= m.budgets()[i] &&
        oracle_value(m.valuations(), i, mask_of(o.allocation[i])) < oracle_value(m.valuations(), i, s)) {
      return 1;
    }
  }
  return 0;
}

// Largest set of players with pairwise disjoint desired sets.
inline std::size_t oracle_packing(const std::vector<Bundle>& desired) {
  const std::size_t n = desired.size();
  std::size_t best = 0;
  for (std::uint64_t w = 0; w < (std::uint64_t{1} << n); ++w) {
    std::uint64_t used = 0;
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      if (!(w >> i & 1)) continue;
      const std::uint64_t d = mask_of(desired[i]);
      ok = (used & d) == 0;
      used |= d;
    }
    if (ok) best = std::max<std::size_t>(best, static_cast<std::size_t>(__builtin_popcountll(w)));
  }
  return best;
}

// Serial dictatorship over raw values.
inline double oracle_serial_welfare(const Matrix& v) {
  std::vector<bool> taken(v.cols(), false);
  double w = 0.0;
  for (std::size_t i = 0; i < v.rows(); ++i) {
    std::size_t pick = v.cols();
    for (std::size_t g = 0; g < v.cols(); ++g) {
      if (!taken[g] && (pick == v.cols() || v(i, g) > v(i, pick))) pick = g;
    }
    if (pick == v.cols()) break;
    taken[pick] = true;
    w += v(i, pick);
  }
  return w;
}

}  // namespace testing
