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

#include "pacmarket/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "pacmarket/errors.hpp"

namespace pacmarket {

DistributionSpec::DistributionSpec(std::size_t goods, Variant v) : goods_(goods), v_(std::move(v)) {
  if (const auto* p = std::get_if<ProductDist>(&v_)) {
    if (p->probabilities.size() != goods_) throw DataError("product distribution needs one probability per good");
    for (double q : p->probabilities) {
      if (!(q >= 0.0 && q <= 1.0)) throw DataError("product probabilities must lie in [0, 1]");
    }
  } else if (const auto* f = std::get_if<FixedSizeDist>(&v_)) {
    if (f->size < 1 || f->size > goods_) {
      throw DataError("fixed-size distribution needs 1 <= s <= k (s=" + std::to_string(f->size) +
                      ", k=" + std::to_string(goods_) + ")");
    }
  } else if (const auto* e = std::get_if<ExplicitDist>(&v_)) {
    if (e->bundles.empty() || e->bundles.size() != e->weights.size()) {
      throw DataError("explicit distribution needs one weight per support bundle");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < e->bundles.size(); ++j) {
      if (e->bundles[j].universe() != goods_) throw DataError("explicit support bundle has wrong universe");
      if (!(e->weights[j] >= 0.0)) throw DataError("explicit weights must be nonnegative");
      total += e->weights[j];
      cumulative_.push_back(total);
    }
    if (std::abs(total - 1.0) > 1e-12) throw DataError("explicit weights must sum to 1");
  }
}

DistributionSpec DistributionSpec::product(std::size_t goods, double p) {
  return {goods, ProductDist{std::vector<double>(goods, p)}};
}

DistributionSpec DistributionSpec::product(std::vector<double> probabilities) {
  const std::size_t k = probabilities.size();
  return {k, ProductDist{std::move(probabilities)}};
}

DistributionSpec DistributionSpec::fixed_size(std::size_t goods, std::size_t size) {
  return {goods, FixedSizeDist{size}};
}

DistributionSpec DistributionSpec::uniform(std::size_t goods) { return {goods, UniformPowerSetDist{}}; }

DistributionSpec DistributionSpec::explicit_support(std::size_t goods, std::vector<Bundle> bundles,
                                                    std::vector<double> weights) {
  return {goods, ExplicitDist{std::move(bundles), std::move(weights)}};
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(cur);
  return out;
}

double parse_double(const std::string& s) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw DataError("expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw DataError("expected a number, got '" + s + "'");
  return v;
}

std::size_t parse_count(const std::string& s) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception&) {
    throw DataError("expected a count, got '" + s + "'");
  }
  if (used != s.size() || s.empty() || s[0] == '-') throw DataError("expected a count, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

DistributionSpec DistributionSpec::parse(const std::string& text, std::size_t goods) {
  const auto colon = text.find(':');
  const std::string kind = text.substr(0, colon);
  const std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "uniform") return uniform(goods);
  if (kind == "fixed") return fixed_size(goods, parse_count(body));
  if (kind == "product") {
    const auto parts = split(body, ',');
    if (parts.size() == 1) return product(goods, parse_double(parts[0]));
    std::vector<double> ps;
    for (const auto& p : parts) ps.push_back(parse_double(p));
    if (ps.size() != goods) throw DataError("product distribution lists " + std::to_string(ps.size()) +
                                            " probabilities for " + std::to_string(goods) + " goods");
    return product(std::move(ps));
  }
  if (kind == "explicit") {
    std::vector<Bundle> bundles;
    std::vector<double> weights;
    for (const auto& entry : split(body, ';')) {
      const auto eq = entry.find('=');
      if (eq == std::string::npos || entry.front() != '{' || entry[eq - 1] != '}') {
        throw DataError("explicit entry must look like {0,1}=0.5, got '" + entry + "'");
      }
      Bundle b(goods);
      const std::string inner = entry.substr(1, eq - 2);
      if (!inner.empty()) {
        for (const auto& g : split(inner, ',')) {
          const std::size_t idx = parse_count(g);
          if (idx >= goods) throw DataError("explicit support mentions good " + g + " outside k");
          b.insert(idx);
        }
      }
      bundles.push_back(std::move(b));
      weights.push_back(parse_double(entry.substr(eq + 1)));
    }
    return explicit_support(goods, std::move(bundles), std::move(weights));
  }
  throw DataError("unknown distribution '" + text + "'");
}

std::string DistributionSpec::to_string() const {
  return std::visit(
      [&](const auto& d) -> std::string {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, UniformPowerSetDist>) {
          return "uniform";
        } else if constexpr (std::is_same_v<T, FixedSizeDist>) {
          return "fixed:" + std::to_string(d.size);
        } else if constexpr (std::is_same_v<T, ProductDist>) {
          const auto& ps = d.probabilities;
          const bool all_same = std::all_of(ps.begin(), ps.end(), [&](double q) { return q == ps.front(); });
          if (all_same && !ps.empty()) return "product:" + format_double(ps.front());
          std::string s = "product:";
          for (std::size_t g = 0; g < ps.size(); ++g) s += (g ? "," : "") + format_double(ps[g]);
          return s;
        } else {
          std::string s = "explicit:";
          for (std::size_t j = 0; j < d.bundles.size(); ++j) {
            if (j) s += ';';
            s += d.bundles[j].to_string() + "=" + format_double(d.weights[j]);
          }
          return s;
        }
      },
      v_);
}

Bundle sample_bundle(const DistributionSpec& spec, Rng& rng) {
  const std::size_t k = spec.goods();
  return std::visit(
      [&](const auto& d) -> Bundle {
        using T = std::decay_t<decltype(d)>;
        Bundle b(k);
        if constexpr (std::is_same_v<T, ProductDist>) {
          for (Good g = 0; g < k; ++g) {
            if (rng.bernoulli(d.probabilities[g])) b.insert(g);
          }
        } else if constexpr (std::is_same_v<T, UniformPowerSetDist>) {
          for (Good g = 0; g < k; ++g) {
            if (rng.bernoulli(0.5)) b.insert(g);
          }
        } else if constexpr (std::is_same_v<T, FixedSizeDist>) {
          // Floyd's sampling: s draws, no rejection loop.
          for (std::size_t j = k - d.size; j < k; ++j) {
            const Good t = rng.uniform_int(0, j);
            b.insert(b.contains(t) ? j : t);
          }
        } else {
          const double u = rng.uniform01() * spec.cumulative_.back();
          auto it = std::upper_bound(spec.cumulative_.begin(), spec.cumulative_.end(), u);
          if (it == spec.cumulative_.end()) --it;
          b = d.bundles[static_cast<std::size_t>(it - spec.cumulative_.begin())];
        }
        return b;
      },
      spec.variant());
}

SampleSet make_sample_set(const MarketInstance& market, const DistributionSpec& spec, std::size_t m, Rng& rng) {
  if (spec.goods() != market.goods()) throw DataError("distribution and market disagree on k");
  SampleSet samples(market.players(), market.goods());
  for (std::size_t j = 0; j < m; ++j) market.observe(samples, sample_bundle(spec, rng));
  return samples;
}

std::vector<double> adversarial_budgets(AdversarialKind kind, std::size_t n, std::size_t k, double delta,
                                        double top_budget) {
  if (n < 2 || k < 2) throw DataError("adversarial instances need n, k >= 2");
  std::vector<double> offsets(n, 0.0);
  switch (kind) {
    case AdversarialKind::kUnitDemand: {
      // n-1 strictly increasing positive offsets, each below b_1, summing to
      // delta * b_1: feasible exactly when delta < n - 1.
      if (!(delta > 0.0 && delta < static_cast<double>(n - 1))) {
        throw DataError("unit-demand worst case needs delta in (0, n-1)");
      }
      const double mean = delta * top_budget / static_cast<double>(n - 1);
      const double spread = std::min(mean, top_budget - mean) / static_cast<double>(n);
      const double centre = static_cast<double>(n) / 2.0;
      for (std::size_t i = 1; i < n; ++i) offsets[i] = mean + spread * (static_cast<double>(i) - centre);
      break;
    }
    case AdversarialKind::kAdditive: {
      if (!(delta > 0.0 && delta < static_cast<double>(k))) {
        throw DataError("additive worst case needs delta in (0, k)");
      }
      const double last = delta * top_budget / static_cast<double>(k);
      for (std::size_t i = 1; i < n; ++i) offsets[i] = last * static_cast<double>(i) / static_cast<double>(n - 1);
      break;
    }
    case AdversarialKind::kSingleMinded:
      for (std::size_t i = 1; i < n; ++i) offsets[i] = top_budget * static_cast<double>(i) / static_cast<double>(n);
      break;
  }
  std::vector<double> budgets(n);
  for (std::size_t i = 0; i < n; ++i) budgets[i] = top_budget - offsets[i];
  return budgets;
}

ValuationProfile adversarial_truth(AdversarialKind kind, const std::vector<double>& budgets, std::size_t k,
                                   const std::vector<Good>& favourite, const std::vector<Player>& outside_owner) {
  const std::size_t n = budgets.size();
  if (favourite.size() != n) throw DataError("need one favourite good per player");
  switch (kind) {
    case AdversarialKind::kUnitDemand: {
      const double tiny = 1e-9 * budgets.back() / static_cast<double>(k + 1);
      Matrix v(n, k);
      for (Player i = 0; i < n; ++i) {
        for (Good g = 0; g < k; ++g) v(i, g) = tiny * static_cast<double>(g + 1);
        v(i, favourite[i]) = budgets[i];
      }
      return UnitDemand(std::move(v));
    }
    case AdversarialKind::kSingleMinded: {
      std::vector<Bundle> desired;
      for (Player i = 0; i < n; ++i) desired.emplace_back(k, std::initializer_list<Good>{favourite[i]});
      return SingleMinded(k, std::move(desired));
    }
    case AdversarialKind::kAdditive: {
      Matrix v(n, k);
      for (Player i = 0; i < n; ++i) v(i, favourite[i]) = budgets[i];
      if (!outside_owner.empty()) {
        if (outside_owner.size() != k) throw DataError("outside_owner must have one entry per good");
        for (Good g = 0; g < k; ++g) {
          const Player owner = outside_owner[g];
          if (owner < n) v(owner, g) = budgets[owner];
        }
      }
      return Additive(std::move(v));
    }
  }
  throw DataError("unknown adversarial kind");
}

AdversarialInstance adversarial_instance(AdversarialKind kind, std::size_t n, std::size_t k, double delta, Rng& rng) {
  const double top = 1.0;
  std::vector<double> budgets = adversarial_budgets(kind, n, k, delta, top);

  std::vector<Good> goods(k);
  std::iota(goods.begin(), goods.end(), Good{0});
  std::shuffle(goods.begin(), goods.end(), rng);

  Bundle observed = Bundle::full(k);
  std::vector<Good> favourite(n);
  std::vector<Player> outside_owner;
  if (kind == AdversarialKind::kAdditive && n < k) {
    // Only G' (|G'| = n) is observed; every player's favourite lies in G'
    // and each good outside G' is valued by exactly one player.
    observed = Bundle(k, std::vector<Good>(goods.begin(), goods.begin() + static_cast<std::ptrdiff_t>(n)));
    for (Player i = 0; i < n; ++i) favourite[i] = goods[i];
    outside_owner.assign(k, n);
    for (Good g = 0; g < k; ++g) {
      if (!observed.contains(g)) outside_owner[g] = rng.uniform_int(0, n - 1);
    }
  } else {
    const std::size_t distinct = std::min(n, k);
    for (Player i = 0; i < n; ++i) favourite[i] = i < distinct ? goods[i] : goods[rng.uniform_int(0, k - 1)];
  }

  ValuationProfile truth = adversarial_truth(kind, budgets, k, favourite, outside_owner);
  const bool normalized = kind != AdversarialKind::kSingleMinded;
  MarketInstance market(BudgetVector(budgets), std::move(truth), normalized);
  SampleSet samples(n, k);
  market.observe(samples, observed);
  return {std::move(market), std::move(samples), std::move(favourite), std::move(observed)};
}

}  // namespace pacmarket
