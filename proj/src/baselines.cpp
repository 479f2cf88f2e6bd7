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

#include "pacmarket/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <set>

#include "detail/burn.hpp"
#include "pacmarket/errors.hpp"
#include "pacmarket/metrics.hpp"

namespace pacmarket {

Outcome optimal_ud_equilibrium(const MarketInstance& market) {
  const auto* ud = market.valuations().get_if<UnitDemand>();
  if (ud == nullptr) throw DataError("optimal_ud_equilibrium needs a unit-demand market");
  const std::size_t n = market.players();
  const std::size_t k = market.goods();
  Outcome out(n, k);
  if (n == 0) return out;
  Bundle pool = Bundle::full(k);
  for (Player i = 0; i < n && !pool.empty(); ++i) {
    Good pick = pool.first();
    pool.for_each([&](Good g) {
      if (ud->values(i, g) > ud->values(i, pick)) pick = g;
    });
    out.allocation[i].insert(pick);
    out.prices[pick] = Price(market.budgets()[i]);
    pool.erase(pick);
  }
  detail::give_leftovers(out, n - 1);
  return out;
}

std::vector<Bundle> opt_welfare_additive(const MarketInstance& market) {
  const auto* add = market.valuations().get_if<Additive>();
  if (add == nullptr) throw DataError("opt_welfare_additive needs an additive market");
  const std::size_t n = market.players();
  const std::size_t k = market.goods();
  std::vector<Bundle> alloc(n, Bundle(k));
  if (n == 0) return alloc;
  for (Good g = 0; g < k; ++g) {
    Player best = 0;
    for (Player i = 1; i < n; ++i) {
      if (add->values(i, g) > add->values(best, g)) best = i;
    }
    alloc[best].insert(g);
  }
  return alloc;
}

namespace {

class WelfareSearch {
 public:
  WelfareSearch(const MarketInstance& market, std::uint64_t limit)
      : m_(market),
        n_(market.players()),
        k_(market.goods()),
        limit_(limit),
        single_minded_(market.valuations().family() == Family::kSingleMinded),
        submodular_(market.valuations().family() == Family::kSubmodular),
        cur_(n_, Bundle(k_)),
        cur_val_(n_, 0.0) {
    // Goods remaining from index g on can add at most the smaller of
    // sum_g max_i v_i(g) and sum_i (best `cap_i` singletons of player i).
    std::vector<std::size_t> cap(n_, k_);
    if (const auto* ts = market.valuations().get_if<ThresholdSubmodular>()) cap.assign(n_, ts->threshold);
    if (market.valuations().family() == Family::kUnitDemand) cap.assign(n_, 1);

    per_good_.assign(k_ + 1, 0.0);
    per_player_.assign(k_ + 1, 0.0);
    order_.resize(k_);
    for (Good g = k_; g-- > 0;) {
      double top = 0.0;
      for (Player i = 0; i < n_; ++i) top = std::max(top, m_.valuations().singleton(i, g));
      per_good_[g] = per_good_[g + 1] + top;
    }
    std::vector<double> vals;
    for (Good g = 0; g <= k_; ++g) {
      double total = 0.0;
      for (Player i = 0; i < n_; ++i) {
        vals.clear();
        for (Good h = g; h < k_; ++h) vals.push_back(m_.valuations().singleton(i, h));
        const std::size_t t = std::min(cap[i], vals.size());
        std::partial_sort(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(t), vals.end(),
                          std::greater<>());
        total += std::accumulate(vals.begin(), vals.begin() + static_cast<std::ptrdiff_t>(t), 0.0);
      }
      per_player_[g] = total;
    }
    for (Good g = 0; g < k_; ++g) {
      order_[g].resize(n_);
      std::iota(order_[g].begin(), order_[g].end(), Player{0});
      std::stable_sort(order_[g].begin(), order_[g].end(), [&](Player a, Player b) {
        return m_.valuations().singleton(a, g) > m_.valuations().singleton(b, g);
      });
    }
  }

  std::vector<Bundle> run() {
    // Incumbent: every good to its best single-good bidder.
    best_.assign(n_, Bundle(k_));
    for (Good g = 0; g < k_; ++g) {
      if (n_ > 0) best_[order_[g].front()].insert(g);
    }
    best_w_ = welfare(best_, m_.valuations());
    if (n_ > 0) recurse(0, 0.0);
    return best_;
  }

 private:
  double bound(Good g, double w) {
    if (!single_minded_) {
      const double cheap = w + std::min(per_good_[g], per_player_[g]);
      if (!submodular_ || cheap <= best_w_) return cheap;
      // Submodularity: each remaining good adds at most its best marginal
      // gain against the current bundles.
      double gain = 0.0;
      for (Good h = g; h < k_; ++h) {
        double top = 0.0;
        for (Player i = 0; i < n_; ++i) {
          cur_[i].insert(h);
          top = std::max(top, m_.value(i, cur_[i]) - cur_val_[i]);
          cur_[i].erase(h);
        }
        gain += top;
      }
      return std::min(cheap, w + gain);
    }
    const auto* sm = m_.valuations().get_if<SingleMinded>();
    double b = 0.0;
    for (Player i = 0; i < n_; ++i) {
      if (cur_val_[i] > 0.0) {
        b += 1.0;
        continue;
      }
      bool blocked = false;
      for (Player j = 0; j < n_ && !blocked; ++j) {
        blocked = j != i && cur_[j].intersects(sm->desired[i]);
      }
      if (!blocked) b += 1.0;
    }
    return b;
  }

  void recurse(Good g, double w) {
    if (++nodes_ > limit_) {
      throw ResourceLimitError("welfare search exceeded " + std::to_string(limit_) + " nodes");
    }
    if (g == k_) {
      if (w > best_w_) {
        best_w_ = w;
        best_ = cur_;
      }
      return;
    }
    if (bound(g, w) <= best_w_) return;
    for (Player i : order_[g]) {
      const double old = cur_val_[i];
      cur_[i].insert(g);
      cur_val_[i] = m_.value(i, cur_[i]);
      recurse(g + 1, w - old + cur_val_[i]);
      cur_[i].erase(g);
      cur_val_[i] = old;
    }
  }

  const MarketInstance& m_;
  std::size_t n_;
  std::size_t k_;
  std::uint64_t limit_;
  bool single_minded_;
  bool submodular_;
  std::uint64_t nodes_ = 0;
  std::vector<Bundle> cur_;
  std::vector<double> cur_val_;
  std::vector<Bundle> best_;
  double best_w_ = 0.0;
  std::vector<double> per_good_;
  std::vector<double> per_player_;
  std::vector<std::vector<Player>> order_;
};

// Maximum-weight assignment of rows to distinct columns, rows <= cols.
// Returns the column of each row.
std::vector<std::size_t> max_assignment(const Matrix& w) {
  const std::size_t rows = w.rows();
  const std::size_t cols = w.cols();
  constexpr double kInf = std::numeric_limits<double>::infinity();
  // Potentials and matching are 1-based; column 0 is the virtual start.
  std::vector<double> u(rows + 1, 0.0), v(cols + 1, 0.0);
  std::vector<std::size_t> match(cols + 1, 0), way(cols + 1, 0);
  for (std::size_t r = 1; r <= rows; ++r) {
    match[0] = r;
    std::size_t c0 = 0;
    std::vector<double> minv(cols + 1, kInf);
    std::vector<bool> used(cols + 1, false);
    do {
      used[c0] = true;
      const std::size_t r0 = match[c0];
      double delta = kInf;
      std::size_t c1 = 0;
      for (std::size_t c = 1; c <= cols; ++c) {
        if (used[c]) continue;
        const double cur = -w(r0 - 1, c - 1) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (std::size_t c = 0; c <= cols; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (match[c0] != 0);
    do {
      const std::size_t c1 = way[c0];
      match[c0] = match[c1];
      c0 = c1;
    } while (c0 != 0);
  }
  std::vector<std::size_t> out(rows, 0);
  for (std::size_t c = 1; c <= cols; ++c) {
    if (match[c] != 0) out[match[c] - 1] = c - 1;
  }
  return out;
}

std::vector<Bundle> opt_unit_demand(const UnitDemand& ud, std::size_t n, std::size_t k) {
  std::vector<Bundle> alloc(n, Bundle(k));
  if (n == 0 || k == 0) return alloc;
  if (n <= k) {
    const auto col = max_assignment(ud.values);
    for (Player i = 0; i < n; ++i) alloc[i].insert(col[i]);
    // Unmatched goods add nothing; park them with player 0.
    for (Good g = 0; g < k; ++g) {
      bool held = false;
      for (const auto& a : alloc) held = held || a.contains(g);
      if (!held) alloc[0].insert(g);
    }
  } else {
    Matrix t(k, n);
    for (Player i = 0; i < n; ++i) {
      for (Good g = 0; g < k; ++g) t(g, i) = ud.values(i, g);
    }
    const auto col = max_assignment(t);
    for (Good g = 0; g < k; ++g) alloc[col[g]].insert(g);
  }
  return alloc;
}

}  // namespace

std::vector<Bundle> opt_welfare_bruteforce(const MarketInstance& market, std::uint64_t node_limit) {
  // Unit demand reduces to an assignment problem, solved exactly.
  if (const auto* ud = market.valuations().get_if<UnitDemand>()) {
    return opt_unit_demand(*ud, market.players(), market.goods());
  }
  return WelfareSearch(market, node_limit).run();
}

std::optional<SmWelfareOptimum> optimal_sm_welfare_equilibrium(const MarketInstance& market,
                                                                std::uint64_t node_limit) {
  const auto* sm = market.valuations().get_if<SingleMinded>();
  if (sm == nullptr) return std::nullopt;
  const std::size_t n = market.players();
  const std::size_t k = market.goods();
  if (n > 20) throw ResourceLimitError("single-minded packing search supports at most 20 players");

  std::uint64_t nodes = 0;
  std::vector<Player> chosen;
  std::vector<std::vector<Player>> packings;
  std::size_t target = 0;
  bool collect = false;
  constexpr std::size_t kMaxPackings = 256;

  // With collect == false: find the packing size. Otherwise gather packings of size `target`.
  std::function<void(Player, Bundle&)> search = [&](Player i, Bundle& used) {
    if (++nodes > node_limit) throw ResourceLimitError("packing search exceeded " + std::to_string(node_limit) + " nodes");
    if (collect && packings.size() >= kMaxPackings) return;
    if (chosen.size() + (n - i) < (collect ? target : target + 1)) return;
    if (i == n) {
      if (collect) {
        packings.push_back(chosen);
      } else {
        target = chosen.size();
      }
      return;
    }
    const Bundle& d = sm->desired[i];
    if (!d.intersects(used)) {
      used |= d;
      chosen.push_back(i);
      search(i + 1, used);
      chosen.pop_back();
      used -= d;
    }
    search(i + 1, used);
  };
  Bundle used(k);
  search(0, used);
  collect = true;
  search(0, used);

  SmWelfareOptimum best;
  best.packing = target;
  for (const auto& winners : packings) {
    Outcome out(n, k);
    for (Player w : winners) {
      out.allocation[w] = sm->desired[w];
      detail::price_evenly(out, sm->desired[w], market.budgets()[w]);
    }
    if (n > 0) detail::give_leftovers(out, n - 1);
    const bool ok = k <= 22 && is_walrasian(out, market);
    if (ok || best.outcome.players() == 0) {
      best.outcome = std::move(out);
      best.verified = ok;
    }
    if (ok) break;
  }
  return best;
}

namespace {

using Edge = std::pair<Player, Good>;

struct UnionFind {
  std::vector<std::size_t> parent;
  explicit UnionFind(std::size_t size) : parent(size) { std::iota(parent.begin(), parent.end(), std::size_t{0}); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[a] = b;
    return true;
  }
};

// Edges minus a spanning forest: 0 iff the edges form a forest.
std::size_t cycle_rank(const std::vector<Edge>& edges, std::size_t n, std::size_t k, std::size_t skip_a = SIZE_MAX,
                       std::size_t skip_b = SIZE_MAX) {
  UnionFind uf(n + k);
  std::size_t extra = 0;
  for (std::size_t e = 0; e < edges.size(); ++e) {
    if (e == skip_a || e == skip_b) continue;
    if (!uf.unite(edges[e].first, n + edges[e].second)) ++extra;
  }
  return extra;
}

// Exact equilibrium when `edges` is the support and forms a forest: prices
// follow from v_ig / p_g = alpha_i along tree edges, scaled so each tree's
// prices add up to its budgets, and spends come from peeling leaves.
// Returns nullopt unless the result passes every equilibrium condition.
std::optional<FractionalAllocation> solve_on_forest(const Matrix& v, const std::vector<double>& budgets,
                                                    const std::vector<Edge>& edges) {
  const std::size_t n = v.rows();
  const std::size_t k = v.cols();
  const std::size_t nodes = n + k;  // players first, then goods
  std::vector<std::vector<std::size_t>> adj(nodes);
  for (const auto& [i, g] : edges) {
    if (!(v(i, g) > 0.0)) return std::nullopt;
    adj[i].push_back(n + g);
    adj[n + g].push_back(i);
  }

  std::vector<double> alpha(n, 0.0);
  std::vector<double> price(k, 0.0);
  std::vector<bool> seen(nodes, false);
  std::vector<std::size_t> queue;
  for (Player root = 0; root < n; ++root) {
    if (seen[root]) continue;
    if (adj[root].empty()) return std::nullopt;
    queue.assign(1, root);
    seen[root] = true;
    alpha[root] = 1.0;
    for (std::size_t q = 0; q < queue.size(); ++q) {
      const std::size_t u = queue[q];
      for (std::size_t w : adj[u]) {
        if (seen[w]) continue;
        seen[w] = true;
        if (u < n) {
          price[w - n] = v(u, w - n) / alpha[u];
        } else {
          alpha[w] = v(w, u - n) / price[u - n];
        }
        queue.push_back(w);
      }
    }
    double spend = 0.0;
    double worth = 0.0;
    for (std::size_t u : queue) {
      if (u < n) spend += budgets[u];
      else worth += price[u - n];
    }
    const double scale = spend / worth;
    for (std::size_t u : queue) {
      if (u < n) alpha[u] /= scale;
      else price[u - n] *= scale;
    }
  }
  // A good nobody buys must be worthless to everyone.
  for (Good g = 0; g < k; ++g) {
    if (seen[n + g]) continue;
    for (Player i = 0; i < n; ++i) {
      if (v(i, g) > 0.0) return std::nullopt;
    }
  }

  // Peel leaves to route each player's budget to their goods.
  Matrix spends(n, k);
  std::vector<double> left(nodes, 0.0);
  for (Player i = 0; i < n; ++i) left[i] = budgets[i];
  for (Good g = 0; g < k; ++g) left[n + g] = price[g];
  std::vector<std::size_t> degree(nodes);
  std::vector<std::size_t> partner_sum(nodes, 0);  // sum of live neighbours; a leaf's is its neighbour
  for (std::size_t u = 0; u < nodes; ++u) {
    degree[u] = adj[u].size();
    for (std::size_t w : adj[u]) partner_sum[u] += w;
  }
  queue.clear();
  for (std::size_t u = 0; u < nodes; ++u) {
    if (degree[u] == 1) queue.push_back(u);
  }
  for (std::size_t q = 0; q < queue.size(); ++q) {
    const std::size_t u = queue[q];
    if (degree[u] != 1) continue;
    const std::size_t w = partner_sum[u];
    const double flow = left[u];
    const Player i = u < n ? u : w;
    const Good g = (u < n ? w : u) - n;
    spends(i, g) = flow;
    left[u] = 0.0;
    left[w] -= flow;
    degree[u] = 0;
    partner_sum[w] -= u;
    if (--degree[w] == 1) queue.push_back(w);
  }

  constexpr double kSlack = 1e-10;
  for (Player i = 0; i < n; ++i) {
    if (std::abs(left[i]) > kSlack * budgets[i]) return std::nullopt;
    for (Good g = 0; g < k; ++g) {
      if (spends(i, g) < -kSlack * budgets[i]) return std::nullopt;
      if (price[g] > 0.0 && v(i, g) / price[g] > alpha[i] * (1.0 + kSlack)) return std::nullopt;
    }
  }
  for (Good g = 0; g < k; ++g) {
    if (std::abs(left[n + g]) > kSlack * std::max(price[g], 1.0)) return std::nullopt;
  }

  FractionalAllocation out;
  out.prices = price;
  out.shares = Matrix(n, k);
  for (Player i = 0; i < n; ++i) {
    for (Good g = 0; g < k; ++g) {
      if (price[g] > 0.0) out.shares(i, g) = std::max(spends(i, g), 0.0) / price[g];
    }
  }
  return out;
}

// Guesses the equilibrium support from the current bids and solves on it
// exactly. Candidates keep edges carrying at least `theta` of the bidder's
// budget whose bang per buck is within a factor `eta` of the bidder's best.
// Candidates with one or two cycles are also tried with cycle edges removed,
// which handles goods a player almost, but not quite, wants.
std::optional<FractionalAllocation> polish(const Matrix& v, const std::vector<double>& budgets, const Matrix& bids,
                                           bool deep) {
  const std::size_t n = v.rows();
  const std::size_t k = v.cols();
  std::vector<double> cur(k, 0.0);
  for (Player i = 0; i < n; ++i) {
    for (Good g = 0; g < k; ++g) cur[g] += bids(i, g);
  }
  std::vector<double> best(n, 0.0);
  for (Player i = 0; i < n; ++i) {
    for (Good g = 0; g < k; ++g) {
      if (cur[g] > 0.0) best[i] = std::max(best[i], v(i, g) / cur[g]);
    }
  }

  std::set<std::vector<Edge>> tried;
  std::vector<Edge> edges;
  for (const double theta : {1e-1, 1e-2, 1e-3, 1e-4, 1e-6, 1e-12}) {
    for (const double eta : {1e-1, 3e-2, 1e-2, 3e-3, 1e-3, 3e-4, 1e-4, 3e-5, 1e-5, 1e-6, 1.0}) {
      edges.clear();
      for (Player i = 0; i < n; ++i) {
        for (Good g = 0; g < k; ++g) {
          if (bids(i, g) >= theta * budgets[i] && v(i, g) > 0.0 && v(i, g) / cur[g] >= (1.0 - eta) * best[i]) {
            edges.emplace_back(i, g);
          }
        }
      }
      if (!tried.insert(edges).second) continue;
      const std::size_t rank = cycle_rank(edges, n, k);
      if (rank == 0) {
        if (auto exact = solve_on_forest(v, budgets, edges)) return exact;
        continue;
      }
      if (rank > 2 || (rank == 2 && !deep)) continue;
      std::vector<std::size_t> on_cycle;
      for (std::size_t e = 0; e < edges.size(); ++e) {
        if (cycle_rank(edges, n, k, e) < rank) on_cycle.push_back(e);
      }
      std::vector<Edge> trimmed;
      auto attempt = [&](std::size_t a, std::size_t b) -> std::optional<FractionalAllocation> {
        if (cycle_rank(edges, n, k, a, b) != 0) return std::nullopt;
        trimmed.clear();
        for (std::size_t e = 0; e < edges.size(); ++e) {
          if (e != a && e != b) trimmed.push_back(edges[e]);
        }
        return solve_on_forest(v, budgets, trimmed);
      };
      for (std::size_t x = 0; x < on_cycle.size(); ++x) {
        if (rank == 1) {
          if (auto exact = attempt(on_cycle[x], SIZE_MAX)) return exact;
          continue;
        }
        for (std::size_t y = x + 1; y < on_cycle.size(); ++y) {
          if (auto exact = attempt(on_cycle[x], on_cycle[y])) return exact;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

FractionalAllocation divisible_additive_equilibrium(const MarketInstance& market, std::size_t iterations,
                                                    double tolerance) {
  const auto* add = market.valuations().get_if<Additive>();
  if (add == nullptr) throw DataError("divisible_additive_equilibrium needs an additive market");
  const std::size_t n = market.players();
  const std::size_t k = market.goods();
  const Matrix& v = add->values;

  Matrix bids(n, k);
  for (Player i = 0; i < n; ++i) {
    double row = 0.0;
    for (Good g = 0; g < k; ++g) row += v(i, g);
    if (!(row > 0.0)) throw DataError("player " + std::to_string(i) + " values every good at 0");
    for (Good g = 0; g < k; ++g) bids(i, g) = market.budgets()[i] * v(i, g) / row;
  }

  std::vector<double> prices(k, 0.0);
  auto update_prices = [&] {
    std::fill(prices.begin(), prices.end(), 0.0);
    for (Player i = 0; i < n; ++i) {
      for (Good g = 0; g < k; ++g) prices[g] += bids(i, g);
    }
  };

  FractionalAllocation out;
  for (std::size_t it = 1;; ++it) {
    if (it > iterations) {
      throw ResourceLimitError("proportional response did not converge in " + std::to_string(iterations) +
                               " iterations");
    }
    update_prices();
    double change = 0.0;
    for (Player i = 0; i < n; ++i) {
      double utility = 0.0;
      for (Good g = 0; g < k; ++g) {
        if (prices[g] > 0.0) utility += v(i, g) * bids(i, g) / prices[g];
      }
      for (Good g = 0; g < k; ++g) {
        const double next =
            prices[g] > 0.0 ? market.budgets()[i] * (v(i, g) * bids(i, g) / prices[g]) / utility : 0.0;
        change = std::max(change, std::abs(next - bids(i, g)));
        bids(i, g) = next;
      }
    }
    if (change < tolerance) {
      out.iterations = it;
      break;
    }
    if (it % 16 == 0) {
      if (auto exact = polish(v, market.budgets().values(), bids, it % 256 == 0)) {
        exact->iterations = it;
        return *exact;
      }
    }
  }

  update_prices();
  out.prices = prices;
  out.shares = Matrix(n, k);
  for (Player i = 0; i < n; ++i) {
    for (Good g = 0; g < k; ++g) {
      if (prices[g] > 0.0) out.shares(i, g) = bids(i, g) / prices[g];
    }
  }
  return out;
}

}  // namespace pacmarket
