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

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "doctest.h"
#include "pacmarket/cli.hpp"
#include "pacmarket/errors.hpp"
#include "pacmarket/harness.hpp"
#include "pacmarket/io.hpp"
#include "pacmarket/metrics.hpp"
#include "pacmarket/unit_demand.hpp"
#include "support.hpp"

using namespace pacmarket;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pacmarket-test-" + std::to_string(::getpid()) + "-" + std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

struct CliResult {
  int code;
  std::string out;
  std::string err;
};

CliResult cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string trim(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == ' ')) s.pop_back();
  return s;
}

ExperimentConfig tiny_config(Family family) {
  ExperimentConfig c;
  c.n = 4;
  c.k = 4;
  c.family = family;
  c.sample_counts = {5, 10};
  c.repetitions = 2;
  c.eval_trials = 50;
  c.slot_count = 2;
  c.threshold = 1;
  return c;
}

}  // namespace

TEST_CASE("ratings csv") {
  TempDir dir;
  io::write_file(dir.file("r.csv"), "user_id,item_id,rating\n1,2,3.5\n1,3,4\n2,2,1\n");
  CHECK(load_ratings_csv(dir.file("r.csv")).size() == 3);
  io::write_file(dir.file("e.csv"), "user_id,item_id,rating\n");
  CHECK(load_ratings_csv(dir.file("e.csv")).empty());
  io::write_file(dir.file("d.csv"), "user_id,item_id,rating\n1,2,3\n1,2,5\n");
  const auto d = load_ratings_csv(dir.file("d.csv"));
  REQUIRE(d.size() == 1);
  CHECK(d.rows()[0].rating == 5);
  io::write_file(dir.file("h.csv"), "user,item,rating\n1,2,3\n");
  CHECK_THROWS_AS(load_ratings_csv(dir.file("h.csv")), DataError);
  io::write_file(dir.file("b.csv"), "user_id,item_id,rating\n1,2,3\n1,3,abc\n");
  try {
    load_ratings_csv(dir.file("b.csv"));
    FAIL("expected a DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find(":3:") != std::string::npos);
  }
  CHECK_THROWS_AS(load_ratings_csv(dir.file("missing.csv")), DataError);
}

TEST_CASE("synthetic ratings") {
  Rng a(3), b(3);
  const auto t = synth_ratings(5, 7, a);
  CHECK(t.size() == 35);
  for (const auto& r : t.rows()) {
    CHECK(r.rating >= 1);
    CHECK(r.rating <= 5);
    CHECK(r.rating == std::floor(r.rating));
  }
  const auto u = synth_ratings(5, 7, b);
  for (std::size_t j = 0; j < t.size(); ++j) CHECK(t.rows()[j].rating == u.rows()[j].rating);
}

TEST_CASE("market construction") {
  Rng rng(5);
  const auto ratings = synth_ratings(12, 15, rng);
  ExperimentConfig c;
  c.n = 10;
  c.k = 12;
  for (const Family f : {Family::kUnitDemand, Family::kAdditive, Family::kSubmodular, Family::kSingleMinded}) {
    const MarketInstance m = build_market(ratings, f, c, rng);
    CHECK(m.players() == 10);
    CHECK(m.goods() == 12);
    for (Player i = 0; i < 10; ++i) {
      CHECK(m.budgets()[i] > 5);
      CHECK(m.budgets()[i] < 6);
      if (i > 0) CHECK(m.budgets()[i] < m.budgets()[i - 1]);
      if (f != Family::kSingleMinded) CHECK(m.valuations().max_singleton(i) == m.budgets()[i]);
    }
  }
  // Ratings order is preserved within each row.
  RatingsTable table;
  for (int u = 0; u < 3; ++u) {
    for (int g = 0; g < 5; ++g) table.add(u, g, (u + g) % 5 + 1);
  }
  ExperimentConfig small;
  small.n = 3;
  small.k = 5;
  const MarketInstance m = build_market(table, Family::kAdditive, small, rng);
  for (Player i = 0; i < 3; ++i) {
    for (Good a = 0; a < 5; ++a) {
      for (Good b = 0; b < 5; ++b) {
        const double ra = (i + a) % 5 + 1;
        const double rb = (i + b) % 5 + 1;
        if (ra < rb) CHECK(m.valuations().singleton(i, a) < m.valuations().singleton(i, b));
      }
    }
  }
  RatingsTable sparse;
  sparse.add(0, 0, 1);
  small.n = 2;
  CHECK_THROWS_AS(build_market(sparse, Family::kAdditive, small, rng), DataError);
}

TEST_CASE("config parsing and validation") {
  const auto c = parse_config("# comment\nn = 7\nk=9\nfamily=additive\nsample_counts=5,10,20\nseed=42\n");
  CHECK(c.n == 7);
  CHECK(c.k == 9);
  CHECK(c.family == Family::kAdditive);
  CHECK(c.sample_counts == std::vector<std::size_t>{5, 10, 20});
  CHECK(c.seed == 42);
  CHECK_THROWS_AS(parse_config("bogus=1\n"), DataError);
  ExperimentConfig bad;
  bad.sample_counts = {10, 5};
  CHECK_THROWS_AS(bad.validate(), DataError);
  bad.sample_counts = {5};
  bad.repetitions = 0;
  CHECK_THROWS_AS(bad.validate(), DataError);
}

TEST_CASE("experiment cardinality, determinism and consistency") {
  for (const Family f : {Family::kUnitDemand, Family::kAdditive, Family::kSubmodular, Family::kSingleMinded}) {
    const auto c = tiny_config(f);
    const auto records = run_experiment(c);
    std::set<std::string> tags;
    for (const auto& r : records) tags.insert(r.algorithm);
    CHECK(records.size() == 2 * 2 * tags.size());
    CHECK(tags.count("DLE") == 1);
    for (const auto& r : records) {
      CHECK(r.emp_loss >= 0);
      CHECK(r.emp_loss <= 1);
      CHECK(r.burnt <= c.k);
      CHECK(r.wall_ms == 0);
    }
    CHECK(run_experiment(c) == records);
  }
  auto c = tiny_config(Family::kUnitDemand);
  c.workers = 3;
  c.repetitions = 5;
  auto serial = c;
  serial.workers = 1;
  CHECK(run_experiment(c) == run_experiment(serial));
}

TEST_CASE("reports round-trip") {
  TempDir dir;
  const auto records = run_experiment(tiny_config(Family::kAdditive));
  emit_report(records, dir.file("r.csv"), ReportFormat::kCsv);
  emit_report(records, dir.file("r.jsonl"), ReportFormat::kJsonl);
  CHECK(read_report(dir.file("r.csv"), ReportFormat::kCsv) == records);
  CHECK(read_report(dir.file("r.jsonl"), ReportFormat::kJsonl) == records);
  const std::string csv = io::read_file(dir.file("r.csv"));
  CHECK(csv.rfind("family,distribution,n,k,m,rep,algorithm,welfare,emp_loss,burnt,wall_ms\n", 0) == 0);
  const std::string jsonl = io::read_file(dir.file("r.jsonl"));
  CHECK(static_cast<std::size_t>(std::count(jsonl.begin(), jsonl.end(), '\n')) == records.size());
  emit_report({}, dir.file("empty.csv"), ReportFormat::kCsv);
  CHECK(io::read_file(dir.file("empty.csv")) == "family,distribution,n,k,m,rep,algorithm,welfare,emp_loss,burnt,wall_ms\n");
}

TEST_CASE("interrupted runs resume to the same report") {
  TempDir dir;
  const auto c = tiny_config(Family::kUnitDemand);
  run_experiment_to_file(c, dir.file("full.csv"), ReportFormat::kCsv, false);
  const std::string full = io::read_file(dir.file("full.csv"));

  // Keep the header, the first few rows and half of a row.
  std::istringstream in(full);
  std::string line, partial;
  for (int j = 0; j < 6 && std::getline(in, line); ++j) partial += line + "\n";
  std::getline(in, line);
  partial += line.substr(0, line.size() / 2);
  io::write_file(dir.file("part.csv"), partial);
  run_experiment_to_file(c, dir.file("part.csv"), ReportFormat::kCsv, true);
  CHECK(read_report(dir.file("part.csv"), ReportFormat::kCsv) == read_report(dir.file("full.csv"), ReportFormat::kCsv));
}

TEST_CASE("sample and outcome io") {
  SampleSet s(2, 3);
  s.add(Bundle(3, {0, 2}), {1.5, 0.25});
  s.add(Bundle(3), {0, 0});
  std::stringstream ss;
  io::write_samples(ss, s);
  const SampleSet back = io::read_samples(ss, 3);
  REQUIRE(back.size() == 2);
  CHECK(back[0].bundle == s[0].bundle);
  CHECK(back[0].values == s[0].values);

  Outcome o(2, 3);
  o.allocation[0] = Bundle(3, {0});
  o.prices = {Price(1.25), Price::burn(), Price(0)};
  o.certified_values = {2, 0};
  const Outcome r = io::outcome_from_json(io::outcome_to_json(o));
  CHECK(r.allocation == o.allocation);
  CHECK(r.prices[1].is_burn());
  CHECK(r.prices[0].amount() == 1.25);
  CHECK(r.certified_values == o.certified_values);
  CHECK_THROWS(io::outcome_from_json("{\"allocation\": 3}"));

  Rng rng(8);
  for (int kind = 0; kind < 4; ++kind) {
    const auto m = testing::random_market(static_cast<testing::Kind>(kind), 3, 5, rng);
    const auto m2 = io::market_from_json(io::market_to_json(m));
    CHECK(io::market_to_json(m2) == io::market_to_json(m));
    for (std::uint64_t mask = 0; mask < 32; ++mask) {
      CHECK(m2.value(1, Bundle::from_mask(5, mask)) == m.value(1, Bundle::from_mask(5, mask)));
    }
  }
}

TEST_CASE("cli pipeline matches the library") {
  TempDir dir;
  Rng rng(9);
  const auto market = testing::random_market(testing::Kind::kUnitDemand, 3, 5, rng);
  io::write_file(dir.file("market.json"), io::market_to_json(market));
  io::write_file(dir.file("budgets.json"), "[" + std::to_string(market.budgets()[0]) + "]");

  auto r = cli({"gen-samples", "--market", dir.file("market.json"), "--dist", "product:0.5", "--m", "40", "--seed",
                "17", "--out", dir.file("s.jsonl")});
  REQUIRE(r.code == 0);
  const auto again = cli({"gen-samples", "--market", dir.file("market.json"), "--dist", "product:0.5", "--m", "40",
                          "--seed", "17"});
  CHECK(again.out == io::read_file(dir.file("s.jsonl")));

  r = cli({"learn", "--family", "unit-demand", "--algo", "direct", "--samples", dir.file("s.jsonl"), "--market",
           dir.file("market.json"), "--out", dir.file("o.json")});
  REQUIRE(r.code == 0);
  Rng lib_rng(17);
  const SampleSet samples = make_sample_set(market, DistributionSpec::product(5, 0.5), 40, lib_rng);
  const Outcome lib = direct_ud(samples, market.budgets());
  const Outcome got = io::outcome_from_json(io::read_file(dir.file("o.json")));
  CHECK(got.allocation == lib.allocation);
  for (Good g = 0; g < 5; ++g) CHECK(got.prices[g].amount() == lib.prices[g].amount());

  r = cli({"eval", "--kind", "loss", "--outcome", dir.file("o.json"), "--samples", dir.file("s.jsonl")});
  CHECK(r.code == 0);
  CHECK(trim(r.out) == "0");
  r = cli({"eval", "--kind", "loss", "--outcome", dir.file("o.json"), "--samples", dir.file("s.jsonl"), "--market",
           dir.file("market.json")});
  CHECK(trim(r.out) == "0");
  r = cli({"eval", "--kind", "welfare", "--outcome", dir.file("o.json"), "--market", dir.file("market.json")});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) == doctest::Approx(welfare(lib.allocation, market.valuations())));
  r = cli({"eval", "--kind", "walrasian", "--outcome", dir.file("o.json"), "--market", dir.file("market.json")});
  CHECK((trim(r.out) == "true" || trim(r.out) == "false"));
  r = cli({"eval", "--kind", "ratio", "--outcome", dir.file("o.json"), "--market", dir.file("market.json")});
  CHECK(r.code == 0);
  CHECK(std::stod(r.out) <= 1 + 1e-12);
  r = cli({"eval", "--kind", "loss", "--outcome", dir.file("o.json"), "--market", dir.file("market.json"), "--dist",
           "product:0.5", "--trials", "200", "--seed", "3"});
  CHECK(r.code == 0);
  CHECK(r.out == cli({"eval", "--kind", "loss", "--outcome", dir.file("o.json"), "--market", dir.file("market.json"),
                      "--dist", "product:0.5", "--trials", "200", "--seed", "3"})
                     .out);
}

TEST_CASE("cli learns every family") {
  TempDir dir;
  Rng rng(10);
  const char* names[] = {"unit-demand", "single-minded", "additive", "submodular"};
  for (int kind = 0; kind < 4; ++kind) {
    const auto market = testing::random_market(static_cast<testing::Kind>(kind), 3, 5, rng);
    io::write_file(dir.file("m.json"), io::market_to_json(market));
    REQUIRE(cli({"gen-samples", "--market", dir.file("m.json"), "--m", "30", "--out", dir.file("s.jsonl")}).code == 0);
    const auto r = cli({"learn", "--family", names[kind], "--samples", dir.file("s.jsonl"), "--market",
                        dir.file("m.json"), "--out", dir.file("o.json")});
    REQUIRE(r.code == 0);
    const auto e = cli({"eval", "--kind", "loss", "--outcome", dir.file("o.json"), "--samples", dir.file("s.jsonl"),
                        "--market", dir.file("m.json")});
    CHECK(trim(e.out) == "0");
  }
  const auto sm = testing::random_market(testing::Kind::kSingleMinded, 3, 5, rng);
  io::write_file(dir.file("m.json"), io::market_to_json(sm));
  REQUIRE(cli({"gen-samples", "--market", dir.file("m.json"), "--m", "5", "--out", dir.file("s.jsonl")}).code == 0);
  CHECK(cli({"learn", "--family", "single-minded", "--leftovers", "none", "--samples", dir.file("s.jsonl"), "--market",
             dir.file("m.json")})
            .code == 0);
  CHECK(cli({"learn", "--family", "single-minded", "--leftovers", "bogus", "--samples", dir.file("s.jsonl"),
             "--market", dir.file("m.json")})
            .code == 1);
}

TEST_CASE("cli exit codes and small commands") {
  CHECK(trim(cli({"sample-complexity", "--k", "30", "--eps", "0.05", "--delta", "0.01"}).out) == "1890");
  CHECK(trim(cli({"sample-complexity", "--k", "1", "--eps", "0.5", "--delta", "0.5"}).out) == "3");
  CHECK(cli({"sample-complexity", "--k", "1", "--eps", "1.5", "--delta", "0.5"}).code == 1);
  CHECK(cli({}).code == 1);
  CHECK(cli({"--help"}).code == 0);
  CHECK(cli({"frobnicate"}).code == 1);
  CHECK(cli({"learn", "--family", "unit-demand", "--samples", "/nonexistent/s.jsonl", "--budgets", "/nonexistent/b"})
            .code == 2);
  const auto synth = cli({"synth-ratings", "--n", "2", "--k", "3", "--seed", "4"});
  CHECK(synth.code == 0);
  CHECK(std::count(synth.out.begin(), synth.out.end(), '\n') == 7);

  TempDir dir;
  Rng rng(11);
  const auto market = testing::random_market(testing::Kind::kSubmodular, 6, 14, rng);
  io::write_file(dir.file("m.json"), io::market_to_json(market));
  Outcome o(6, 14);
  io::write_file(dir.file("o.json"), io::outcome_to_json(o));
  CHECK(cli({"eval", "--kind", "ratio", "--outcome", dir.file("o.json"), "--market", dir.file("m.json"), "--limit",
             "5"})
            .code == 3);

  const auto adv = cli({"adversarial", "--family", "unit-demand", "--n", "3", "--k", "3", "--delta", "0.5",
                        "--market-out", dir.file("am.json"), "--samples-out", dir.file("as.jsonl")});
  CHECK(adv.code == 0);
  CHECK(fs::exists(dir.file("am.json")));
  CHECK(cli({"adversarial", "--family", "submodular", "--n", "3", "--k", "3"}).code == 1);

  const auto exp = cli({"experiment", "--set", "n=3", "--set", "k=3", "--set", "sample_counts=5,10", "--set",
                        "eval_trials=20", "--reps", "2", "--seed", "5"});
  CHECK(exp.code == 0);
  CHECK(exp.out.rfind("family,distribution,n,k,m,rep,algorithm", 0) == 0);
  CHECK(exp.out == cli({"experiment", "--set", "n=3", "--set", "k=3", "--set", "sample_counts=5,10", "--set",
                        "eval_trials=20", "--reps", "2", "--seed", "5", "--workers", "2"})
                       .out);
  CHECK(cli({"experiment", "--set", "nonsense"}).code == 1);
}
