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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "pacmarket/additive.hpp"
#include "pacmarket/baselines.hpp"
#include "pacmarket/distributions.hpp"
#include "pacmarket/errors.hpp"
#include "pacmarket/harness.hpp"
#include "pacmarket/io.hpp"
#include "pacmarket/metrics.hpp"
#include "pacmarket/single_minded.hpp"
#include "pacmarket/submodular.hpp"
#include "pacmarket/unit_demand.hpp"

namespace py = pybind11;
using namespace pacmarket;

namespace {

using Rows = std::vector<std::vector<double>>;
using GoodList = std::vector<Good>;

std::vector<GoodList> to_lists(const std::vector<Bundle>& bundles) {
  std::vector<GoodList> out;
  out.reserve(bundles.size());
  for (const auto& b : bundles) out.push_back(b.members());
  return out;
}

std::vector<Bundle> to_bundles(std::size_t k, const std::vector<GoodList>& lists) {
  std::vector<Bundle> out;
  out.reserve(lists.size());
  for (const auto& l : lists) out.emplace_back(k, l);
  return out;
}

// Burnt goods show up as +inf.
std::vector<double> price_list(const Outcome& o) {
  std::vector<double> p;
  for (const auto& x : o.prices) p.push_back(x.is_burn() ? std::numeric_limits<double>::infinity() : x.amount());
  return p;
}

Outcome make_outcome(std::size_t k, const std::vector<GoodList>& allocation, const std::vector<double>& prices) {
  if (prices.size() != k) throw DataError("need one price per good");
  Outcome o(allocation.size(), k);
  o.allocation = to_bundles(k, allocation);
  for (Good g = 0; g < k; ++g) o.prices[g] = std::isinf(prices[g]) ? Price::burn() : Price(prices[g]);
  return o;
}

ExperimentConfig make_config(const std::map<std::string, std::string>& fields) {
  ExperimentConfig c;
  for (const auto& [key, value] : fields) set_config_field(c, key, value);
  c.validate();
  return c;
}

py::dict record_dict(const ResultRecord& r) {
  py::dict d;
  d["family"] = r.family;
  d["distribution"] = r.distribution;
  d["n"] = r.n;
  d["k"] = r.k;
  d["m"] = r.m;
  d["rep"] = r.rep;
  d["algorithm"] = r.algorithm;
  d["welfare"] = r.welfare;
  d["emp_loss"] = r.emp_loss;
  d["burnt"] = r.burnt;
  d["wall_ms"] = r.wall_ms;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Learning market equilibria for Fisher markets with indivisible goods";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<ResourceLimitError>(m, "ResourceLimitError", PyExc_RuntimeError);
  py::register_exception<UndefinedError>(m, "UndefinedError", PyExc_ArithmeticError);

  py::class_<MarketInstance>(m, "Market")
      .def_static(
          "unit_demand",
          [](const std::vector<double>& b, const Rows& v, bool normalized) {
            return MarketInstance(BudgetVector(b), UnitDemand(Matrix::from_rows(v)), normalized);
          },
          py::arg("budgets"), py::arg("values"), py::arg("normalized") = false)
      .def_static(
          "additive",
          [](const std::vector<double>& b, const Rows& v, bool normalized) {
            return MarketInstance(BudgetVector(b), Additive(Matrix::from_rows(v)), normalized);
          },
          py::arg("budgets"), py::arg("values"), py::arg("normalized") = false)
      .def_static(
          "single_minded",
          [](const std::vector<double>& b, std::size_t k, const std::vector<GoodList>& desired) {
            return MarketInstance(BudgetVector(b), SingleMinded(k, to_bundles(k, desired)));
          },
          py::arg("budgets"), py::arg("goods"), py::arg("desired"))
      .def_static(
          "threshold_submodular",
          [](const std::vector<double>& b, const Rows& v, const std::vector<std::size_t>& slot_of,
             std::size_t threshold, bool normalized) {
            return MarketInstance(BudgetVector(b), ThresholdSubmodular(Matrix::from_rows(v), slot_of, threshold),
                                  normalized);
          },
          py::arg("budgets"), py::arg("values"), py::arg("slot_of"), py::arg("threshold"),
          py::arg("normalized") = false)
      .def_static("from_json", &io::market_from_json)
      .def("to_json", &io::market_to_json)
      .def_property_readonly("players", &MarketInstance::players)
      .def_property_readonly("goods", &MarketInstance::goods)
      .def_property_readonly("budgets", [](const MarketInstance& mk) { return mk.budgets().values(); })
      .def_property_readonly("family",
                             [](const MarketInstance& mk) { return std::string(family_name(mk.valuations().family())); })
      .def("value", [](const MarketInstance& mk, Player i, const GoodList& goods) {
        return mk.value(i, Bundle(mk.goods(), goods));
      });

  py::class_<SampleSet>(m, "SampleSet")
      .def(py::init<std::size_t, std::size_t>(), py::arg("players"), py::arg("goods"))
      .def("add",
           [](SampleSet& s, const GoodList& goods, const std::vector<double>& values) {
             s.add(Bundle(s.goods(), goods), values);
           })
      .def_static(
          "draw",
          [](const MarketInstance& market, const std::string& dist, std::size_t count, std::uint64_t seed) {
            Rng rng(seed);
            return make_sample_set(market, DistributionSpec::parse(dist, market.goods()), count, rng);
          },
          py::arg("market"), py::arg("distribution"), py::arg("m"), py::arg("seed") = 1)
      .def("__len__", &SampleSet::size)
      .def_property_readonly("players", &SampleSet::players)
      .def_property_readonly("goods", &SampleSet::goods)
      .def_property_readonly("bundles",
                             [](const SampleSet& s) {
                               std::vector<GoodList> out;
                               for (const auto& r : s) out.push_back(r.bundle.members());
                               return out;
                             })
      .def_property_readonly("values", [](const SampleSet& s) {
        Rows out;
        for (const auto& r : s) out.push_back(r.values);
        return out;
      });

  py::class_<Outcome>(m, "Outcome")
      .def(py::init(&make_outcome), py::arg("goods"), py::arg("allocation"), py::arg("prices"))
      .def_property_readonly("allocation", [](const Outcome& o) { return to_lists(o.allocation); })
      .def_property_readonly("prices", &price_list)
      .def_property_readonly("burnt_goods", &Outcome::burnt_goods)
      .def_property_readonly("unallocated", [](const Outcome& o) { return o.unallocated().members(); })
      .def_static("from_json", &io::outcome_from_json)
      .def("to_json", [](const Outcome& o) { return io::outcome_to_json(o); });

  auto budgets = [](const std::vector<double>& b) { return BudgetVector(b); };

  m.def("direct_ud", [=](const SampleSet& s, const std::vector<double>& b) { return direct_ud(s, budgets(b)); });
  m.def("indirect_ud", [=](const SampleSet& s, const std::vector<double>& b) { return indirect_ud(s, budgets(b)); });
  m.def(
      "sm_equilibrium",
      [=](const SampleSet& s, const std::vector<double>& b, const std::string& leftovers) {
        if (leftovers != "last" && leftovers != "none") throw DataError("leftovers must be 'last' or 'none'");
        return sm_equilibrium(learn_desired_sets(s), budgets(b),
                              leftovers == "last" ? Leftovers::kLastPlayer : Leftovers::kUnassigned);
      },
      py::arg("samples"), py::arg("budgets"), py::arg("leftovers") = "last",
      "Learns desired sets from the samples and prices them into an equilibrium.");
  m.def("learn_desired_sets",
        [](const SampleSet& s) { return to_lists(learn_desired_sets(s).sets); });
  m.def("direct_additive",
        [=](const SampleSet& s, const std::vector<double>& b) { return direct_additive(s, budgets(b)); });
  m.def(
      "direct_submod",
      [=](const SampleSet& s, const std::vector<double>& b, const std::vector<double>& floors) {
        return direct_submod(s, budgets(b), floors);
      },
      py::arg("samples"), py::arg("budgets"), py::arg("floors"));

  m.def("empirical_loss", [](const Outcome& o, const SampleSet& s, const MarketInstance& mk) {
    return empirical_loss(o, s, mk.valuations(), mk.budgets()).empirical;
  });
  m.def(
      "expected_loss",
      [](const Outcome& o, const MarketInstance& mk, const std::string& dist, std::size_t trials,
         std::uint64_t seed) {
        Rng rng(seed);
        return estimate_expected_loss(o, mk, DistributionSpec::parse(dist, mk.goods()), trials, rng);
      },
      py::arg("outcome"), py::arg("market"), py::arg("distribution"), py::arg("trials") = 1000,
      py::arg("seed") = 1);
  m.def("welfare", [](const Outcome& o, const MarketInstance& mk) { return welfare(o.allocation, mk.valuations()); });
  m.def("is_walrasian", &is_walrasian);
  m.def("is_envy_free",
        [](const Outcome& o, const MarketInstance& mk) { return is_envy_free(o, mk.valuations(), mk.budgets()); });
  m.def("sample_complexity", &sample_complexity, py::arg("k"), py::arg("eps"), py::arg("delta"),
        py::arg("multiplier") = 1.0);

  m.def("optimal_ud_equilibrium", &optimal_ud_equilibrium);
  m.def(
      "opt_welfare",
      [](const MarketInstance& mk, std::uint64_t limit) {
        return welfare(opt_welfare_bruteforce(mk, limit), mk.valuations());
      },
      py::arg("market"), py::arg("node_limit") = 50'000'000);
  m.def(
      "divisible_additive_equilibrium",
      [](const MarketInstance& mk, std::size_t iterations, double tolerance) {
        const auto eq = divisible_additive_equilibrium(mk, iterations, tolerance);
        return py::make_tuple(eq.shares.to_rows(), eq.prices);
      },
      py::arg("market"), py::arg("iterations") = 10'000, py::arg("tolerance") = 1e-8,
      "Returns (shares, prices) of the divisible equilibrium.");

  m.def(
      "run_experiment",
      [](const std::map<std::string, std::string>& fields) {
        const auto records = run_experiment(make_config(fields));
        py::list out;
        for (const auto& r : records) out.append(record_dict(r));
        return out;
      },
      py::arg("config") = std::map<std::string, std::string>{},
      "Runs a seeded sweep. Config values are strings, as in a config file.");
}
