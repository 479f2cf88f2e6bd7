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

#include "pacmarket/io.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "pacmarket/errors.hpp"

namespace pacmarket::io {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

json parse(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw DataError("malformed " + what + ": " + e.what());
  }
}

template <class F>
auto guarded(const std::string& what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw DataError("malformed " + what + ": " + e.what());
  }
}

std::vector<Good> goods_of(const json& arr, std::size_t k, const std::string& what) {
  std::vector<Good> out;
  for (const auto& g : arr) {
    const auto idx = g.get<std::int64_t>();
    if (idx < 0 || static_cast<std::size_t>(idx) >= k) {
      throw DataError(what + " mentions good " + std::to_string(idx) + " outside [0, " + std::to_string(k) + ")");
    }
    out.push_back(static_cast<Good>(idx));
  }
  return out;
}

ordered_json members(const Bundle& b) {
  ordered_json arr = ordered_json::array();
  b.for_each([&](Good g) { arr.push_back(g); });
  return arr;
}

}  // namespace

void write_samples(std::ostream& out, const SampleSet& samples) {
  for (const auto& rec : samples) {
    ordered_json j;
    j["bundle"] = members(rec.bundle);
    j["values"] = rec.values;
    out << j.dump() << '\n';
  }
}

SampleSet read_samples(std::istream& in, std::optional<std::size_t> goods) {
  std::vector<std::pair<std::vector<std::int64_t>, std::vector<double>>> rows;
  std::size_t lineno = 0;
  std::int64_t top = -1;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string what = "sample line " + std::to_string(lineno);
    const json j = parse(line, what);
    guarded(what, [&] {
      auto bundle = j.at("bundle").get<std::vector<std::int64_t>>();
      auto values = j.at("values").get<std::vector<double>>();
      for (auto g : bundle) {
        if (g < 0) throw DataError(what + ": negative good index");
        top = std::max(top, g);
      }
      rows.emplace_back(std::move(bundle), std::move(values));
      return 0;
    });
  }
  if (rows.empty()) throw DataError("sample file is empty");
  const std::size_t k = goods.value_or(static_cast<std::size_t>(top + 1));
  const std::size_t n = rows.front().second.size();
  SampleSet samples(n, k);
  for (std::size_t j = 0; j < rows.size(); ++j) {
    Bundle b(k);
    for (auto g : rows[j].first) {
      if (static_cast<std::size_t>(g) >= k) {
        throw DataError("sample " + std::to_string(j) + " mentions good " + std::to_string(g) + " but k = " +
                        std::to_string(k));
      }
      b.insert(static_cast<Good>(g));
    }
    if (rows[j].second.size() != n) {
      throw DataError("sample " + std::to_string(j) + " has " + std::to_string(rows[j].second.size()) +
                      " values, expected " + std::to_string(n));
    }
    samples.add(std::move(b), std::move(rows[j].second));
  }
  return samples;
}

std::string outcome_to_json(const Outcome& outcome, const BudgetVector* budgets) {
  ordered_json j;
  j["k"] = outcome.goods();
  ordered_json alloc = ordered_json::array();
  for (const auto& a : outcome.allocation) alloc.push_back(members(a));
  j["allocation"] = alloc;
  ordered_json prices = ordered_json::array();
  ordered_json burn = ordered_json::array();
  for (Good g = 0; g < outcome.goods(); ++g) {
    if (outcome.prices[g].is_burn()) {
      prices.push_back(nullptr);
      burn.push_back(g);
    } else {
      prices.push_back(outcome.prices[g].amount());
    }
  }
  j["prices"] = prices;
  j["burn"] = burn;
  if (budgets != nullptr) j["budgets"] = budgets->values();
  if (!outcome.certified_values.empty()) j["certified_values"] = outcome.certified_values;
  return j.dump(2) + "\n";
}

Outcome outcome_from_json(const std::string& text) {
  const json j = parse(text, "outcome");
  return guarded("outcome", [&] {
    const auto& prices = j.at("prices");
    const std::size_t k = j.contains("k") ? j.at("k").get<std::size_t>() : prices.size();
    if (prices.size() != k) throw DataError("outcome lists " + std::to_string(prices.size()) + " prices for k = " +
                                            std::to_string(k));
    const auto& alloc = j.at("allocation");
    Outcome out(alloc.size(), k);
    for (std::size_t i = 0; i < alloc.size(); ++i) out.allocation[i] = Bundle(k, goods_of(alloc[i], k, "allocation"));
    for (Good g = 0; g < k; ++g) {
      if (!prices[g].is_null()) out.prices[g] = Price(prices[g].get<double>());
    }
    if (j.contains("burn")) {
      for (Good g : goods_of(j.at("burn"), k, "burn list")) out.prices[g] = Price::burn();
    }
    for (Good g = 0; g < k; ++g) {
      if (prices[g].is_null() && !out.prices[g].is_burn()) {
        throw DataError("good " + std::to_string(g) + " has a null price but is not in the burn list");
      }
    }
    if (j.contains("certified_values")) out.certified_values = j.at("certified_values").get<std::vector<double>>();
    const auto problems = validate_outcome(out, k);
    if (!problems.empty()) throw DataError("invalid outcome: " + problems.front());
    return out;
  });
}

std::optional<BudgetVector> outcome_budgets(const std::string& text) {
  const json j = parse(text, "outcome");
  if (!j.contains("budgets")) return std::nullopt;
  return guarded("outcome", [&] { return BudgetVector(j.at("budgets").get<std::vector<double>>()); });
}

std::string market_to_json(const MarketInstance& market) {
  ordered_json j;
  j["n"] = market.players();
  j["k"] = market.goods();
  j["budgets"] = market.budgets().values();
  j["family"] = std::string(family_name(market.valuations().family()));
  j["budget_normalized"] = market.budget_normalized();
  const auto& v = market.valuations();
  if (const auto* ud = v.get_if<UnitDemand>()) j["values"] = ud->values.to_rows();
  if (const auto* add = v.get_if<Additive>()) j["values"] = add->values.to_rows();
  if (const auto* ts = v.get_if<ThresholdSubmodular>()) {
    j["values"] = ts->values.to_rows();
    j["slots"] = ts->slot_of;
    j["threshold"] = ts->threshold;
  }
  if (const auto* sm = v.get_if<SingleMinded>()) {
    ordered_json d = ordered_json::array();
    for (const auto& b : sm->desired) d.push_back(members(b));
    j["desired"] = d;
  }
  return j.dump(2) + "\n";
}

MarketInstance market_from_json(const std::string& text) {
  const json j = parse(text, "market");
  return guarded("market", [&] {
    const std::size_t n = j.at("n").get<std::size_t>();
    const std::size_t k = j.at("k").get<std::size_t>();
    BudgetVector budgets(j.at("budgets").get<std::vector<double>>());
    if (budgets.size() != n) throw DataError("market lists " + std::to_string(budgets.size()) + " budgets for n = " +
                                             std::to_string(n));
    const Family family = parse_family(j.at("family").get<std::string>());
    const bool normalized = j.value("budget_normalized", false);
    auto matrix = [&] {
      Matrix m = Matrix::from_rows(j.at("values").get<std::vector<std::vector<double>>>());
      if (m.rows() != n || m.cols() != k) throw DataError("market value matrix must be n x k");
      return m;
    };
    switch (family) {
      case Family::kUnitDemand:
        return MarketInstance(budgets, UnitDemand(matrix()), normalized);
      case Family::kAdditive:
        return MarketInstance(budgets, Additive(matrix()), normalized);
      case Family::kSubmodular:
        return MarketInstance(budgets,
                              ThresholdSubmodular(matrix(), j.at("slots").get<std::vector<std::size_t>>(),
                                                  j.at("threshold").get<std::size_t>()),
                              normalized);
      case Family::kSingleMinded: {
        std::vector<Bundle> desired;
        for (const auto& d : j.at("desired")) desired.emplace_back(k, goods_of(d, k, "desired set"));
        if (desired.size() != n) throw DataError("market needs one desired set per player");
        return MarketInstance(budgets, SingleMinded(k, std::move(desired)), normalized);
      }
    }
    throw DataError("unsupported family");
  });
}

BudgetFile budgets_from_json(const std::string& text) {
  const json j = parse(text, "budget file");
  return guarded("budget file", [&] {
    if (j.is_array()) return BudgetFile{BudgetVector(j.get<std::vector<double>>()), std::nullopt};
    BudgetFile f{BudgetVector(j.at("budgets").get<std::vector<double>>()), std::nullopt};
    if (j.contains("k")) f.goods = j.at("k").get<std::size_t>();
    return f;
  });
}

std::vector<double> doubles_from_json(const std::string& text) {
  const json j = parse(text, "number list");
  return guarded("number list", [&] { return j.get<std::vector<double>>(); });
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write '" + path + "'");
  out << text;
  if (!out) throw DataError("failed writing '" + path + "'");
}

}  // namespace pacmarket::io
