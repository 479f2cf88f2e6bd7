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

#include "pacmarket/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
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

namespace pacmarket {

namespace {

// Raised for semantic usage mistakes that CLI11 cannot catch on its own.
class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void emit(std::ostream& out, const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    out << text;
  } else {
    io::write_file(path, text);
  }
}

SampleSet load_samples(const std::string& path, std::optional<std::size_t> goods) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open sample file '" + path + "'");
  return io::read_samples(in, goods);
}

std::string format_number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

AdversarialKind parse_kind(const std::string& name) {
  if (name == "unit-demand") return AdversarialKind::kUnitDemand;
  if (name == "single-minded") return AdversarialKind::kSingleMinded;
  if (name == "additive") return AdversarialKind::kAdditive;
  throw UsageError("adversarial kind must be unit-demand, single-minded or additive");
}

struct Options {
  // shared
  std::string out;
  std::uint64_t seed = 1;
  std::string family;
  std::string market;
  std::string samples;
  std::string budgets;
  std::size_t k = 0;
  // gen-samples
  std::string dist = "product:0.5";
  std::size_t m = 100;
  // learn
  std::string algo = "direct";
  std::string c_floor;
  std::string leftovers = "last";
  // eval
  std::string kind;
  std::string outcome;
  std::size_t trials = 1000;
  std::uint64_t limit = 50'000'000;
  // adversarial
  std::size_t n = 2;
  double delta = 0.5;
  std::string market_out;
  std::string samples_out;
  // experiment
  std::string config;
  std::vector<std::string> overrides;
  std::size_t workers = 0;
  std::string format = "csv";
  bool resume = false;
  std::size_t reps = 0;
  // sample-complexity
  double eps = 0.1;
  double conf = 0.05;
  double multiplier = 1.0;
};

int cmd_gen_samples(const Options& o, std::ostream& out, std::ostream& err) {
  const MarketInstance market = io::market_from_json(io::read_file(o.market));
  const DistributionSpec spec = DistributionSpec::parse(o.dist, market.goods());
  Rng rng(o.seed);
  const SampleSet samples = make_sample_set(market, spec, o.m, rng);
  std::ostringstream ss;
  io::write_samples(ss, samples);
  emit(out, o.out, ss.str());
  err << "generated " << samples.size() << " samples from " << spec.to_string() << "\n";
  return 0;
}

int cmd_learn(const Options& o, std::ostream& out, std::ostream& err) {
  std::optional<BudgetVector> budgets;
  std::optional<std::size_t> goods;
  if (!o.market.empty()) {
    const MarketInstance market = io::market_from_json(io::read_file(o.market));
    budgets = market.budgets();
    goods = market.goods();
  }
  if (!o.budgets.empty()) {
    auto file = io::budgets_from_json(io::read_file(o.budgets));
    budgets = file.budgets;
    if (file.goods) goods = file.goods;
  }
  if (!budgets) throw UsageError("learn needs --budgets or --market");
  if (o.k > 0) goods = o.k;
  const SampleSet samples = load_samples(o.samples, goods);
  if (samples.players() != budgets->size()) {
    throw DataError("samples have " + std::to_string(samples.players()) + " players but " +
                    std::to_string(budgets->size()) + " budgets were given");
  }

  const Family family = parse_family(o.family);
  if (o.algo != "direct" && o.algo != "indirect") throw UsageError("--algo must be direct or indirect");
  if (o.algo == "indirect" && family != Family::kUnitDemand) {
    throw UsageError("indirect learning is only available for unit-demand markets");
  }

  Outcome outcome;
  switch (family) {
    case Family::kUnitDemand:
      outcome = o.algo == "direct" ? direct_ud(samples, *budgets) : indirect_ud(samples, *budgets);
      break;
    case Family::kSingleMinded:
      if (o.leftovers != "last" && o.leftovers != "none") throw UsageError("--leftovers must be last or none");
      outcome = sm_equilibrium(learn_desired_sets(samples), *budgets,
                               o.leftovers == "none" ? Leftovers::kUnassigned : Leftovers::kLastPlayer);
      break;
    case Family::kAdditive:
      outcome = direct_additive(samples, *budgets);
      break;
    case Family::kSubmodular: {
      std::vector<double> floors(samples.players(), 0.0);
      if (!o.c_floor.empty()) floors = io::doubles_from_json(io::read_file(o.c_floor));
      outcome = direct_submod(samples, *budgets, floors);
      break;
    }
  }
  emit(out, o.out, io::outcome_to_json(outcome, &*budgets));
  err << "learned outcome from " << samples.size() << " samples; " << outcome.burnt_count() << " goods burnt\n";
  return 0;
}

int cmd_eval(const Options& o, std::ostream& out, std::ostream&) {
  const std::string outcome_text = io::read_file(o.outcome);
  const Outcome outcome = io::outcome_from_json(outcome_text);
  std::optional<MarketInstance> market;
  if (!o.market.empty()) market = io::market_from_json(io::read_file(o.market));
  auto need_market = [&]() -> const MarketInstance& {
    if (!market) throw UsageError("eval --kind " + o.kind + " needs --market");
    if (market->players() != outcome.players() || market->goods() != outcome.goods()) {
      throw DataError("outcome shape does not match the market");
    }
    return *market;
  };

  if (o.kind == "loss") {
    if (market && o.samples.empty()) {
      const auto& mk = need_market();
      Rng rng(o.seed);
      const auto spec = DistributionSpec::parse(o.dist, mk.goods());
      out << format_number(estimate_expected_loss(outcome, mk, spec, o.trials, rng)) << "\n";
      return 0;
    }
    if (o.samples.empty()) throw UsageError("eval --kind loss needs --samples, or --market with --dist");
    const SampleSet samples = load_samples(o.samples, outcome.goods());
    if (market) {
      const auto& mk = need_market();
      out << format_number(empirical_loss(outcome, samples, mk.valuations(), mk.budgets()).empirical) << "\n";
      return 0;
    }
    std::optional<BudgetVector> budgets = io::outcome_budgets(outcome_text);
    if (!o.budgets.empty()) budgets = io::budgets_from_json(io::read_file(o.budgets)).budgets;
    if (!budgets) throw UsageError("eval --kind loss without --market needs budgets in the outcome or --budgets");
    if (outcome.certified_values.size() != budgets->size()) {
      throw DataError("outcome carries no certified values; pass --market to evaluate its loss");
    }
    out << format_number(empirical_loss(outcome, samples, outcome.certified_values, *budgets).empirical) << "\n";
    return 0;
  }
  if (o.kind == "welfare") {
    out << format_number(welfare(outcome.allocation, need_market().valuations())) << "\n";
    return 0;
  }
  if (o.kind == "envy") {
    const auto& mk = need_market();
    out << (is_envy_free(outcome, mk.valuations(), mk.budgets()) ? "true" : "false") << "\n";
    return 0;
  }
  if (o.kind == "walrasian") {
    out << (is_walrasian(outcome, need_market()) ? "true" : "false") << "\n";
    return 0;
  }
  if (o.kind == "ratio") {
    const auto& mk = need_market();
    const auto opt = opt_welfare_bruteforce(mk, o.limit);
    out << format_number(efficiency_ratio(outcome.allocation, mk.valuations(), opt)) << "\n";
    return 0;
  }
  throw UsageError("--kind must be loss, welfare, envy, walrasian or ratio");
}

int cmd_adversarial(const Options& o, std::ostream& out, std::ostream& err) {
  Rng rng(o.seed);
  const AdversarialInstance inst = adversarial_instance(parse_kind(o.family), o.n, o.k, o.delta, rng);
  std::ostringstream samples;
  io::write_samples(samples, inst.samples);
  if (!o.market_out.empty()) io::write_file(o.market_out, io::market_to_json(inst.market));
  if (!o.samples_out.empty()) io::write_file(o.samples_out, samples.str());
  nlohmann::ordered_json j;
  j["market"] = nlohmann::ordered_json::parse(io::market_to_json(inst.market));
  j["samples"] = nlohmann::ordered_json::array();
  for (const auto& rec : inst.samples) {
    j["samples"].push_back({{"bundle", rec.bundle.members()}, {"values", rec.values}});
  }
  j["favourite"] = inst.favourite;
  j["observed"] = inst.observed.members();
  emit(out, o.out, j.dump(2) + "\n");
  err << "built adversarial " << o.family << " instance with n=" << o.n << ", k=" << o.k << "\n";
  return 0;
}

int cmd_experiment(const Options& o, const CLI::App& sub, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  if (!o.config.empty()) config = load_config(o.config);
  for (const auto& kv : o.overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw UsageError("--set expects key=value, got '" + kv + "'");
    set_config_field(config, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (sub.count("--family") > 0) config.family = parse_family(o.family);
  if (sub.count("--seed") > 0) config.seed = o.seed;
  if (sub.count("--workers") > 0) config.workers = o.workers;
  if (sub.count("--limit") > 0) config.opt_limit = o.limit;
  if (sub.count("--reps") > 0) config.repetitions = o.reps;
  config.validate();
  const ReportFormat format = parse_report_format(o.format);

  if (o.out.empty() || o.out == "-") {
    if (o.resume) throw UsageError("--resume needs --out");
    write_records(out, {}, format, true);
    run_experiment(config, [&](const std::vector<ResultRecord>& recs) { write_records(out, recs, format, false); });
  } else {
    run_experiment_to_file(config, o.out, format, o.resume);
    err << "wrote report to " << o.out << "\n";
  }
  return 0;
}

int cmd_synth_ratings(const Options& o, std::ostream& out, std::ostream&) {
  Rng rng(o.seed);
  const RatingsTable table = synth_ratings(o.n, o.k, rng);
  std::ostringstream ss;
  ss << "user_id,item_id,rating\n";
  for (const auto& r : table.rows()) ss << r.user << ',' << r.item << ',' << r.rating << '\n';
  emit(out, o.out, ss.str());
  return 0;
}

int cmd_sample_complexity(const Options& o, std::ostream& out, std::ostream&) {
  out << sample_complexity(o.k, o.eps, o.conf, o.multiplier) << "\n";
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn PAC market equilibria for Fisher markets with indivisible goods", "pacmarket"};
  app.require_subcommand(1);
  Options o;

  auto* gen = app.add_subcommand("gen-samples", "Draw sample bundles from a market");
  gen->add_option("--market", o.market, "Market JSON")->required();
  gen->add_option("--dist", o.dist, "Distribution (product:p, fixed:s, uniform, explicit:...)");
  gen->add_option("--m", o.m, "Number of samples");
  gen->add_option("--seed", o.seed, "Random seed");
  gen->add_option("--out", o.out, "Output JSONL (default stdout)");

  auto* learn = app.add_subcommand("learn", "Learn an outcome from samples");
  learn->add_option("--family", o.family, "unit-demand, single-minded, additive or submodular")->required();
  learn->add_option("--algo", o.algo, "direct or indirect");
  learn->add_option("--samples", o.samples, "Samples JSONL")->required();
  learn->add_option("--budgets", o.budgets, "Budgets JSON");
  learn->add_option("--market", o.market, "Market JSON supplying budgets and k");
  learn->add_option("--k", o.k, "Number of goods");
  learn->add_option("--c-floor", o.c_floor, "Submodular value floors (JSON array)");
  learn->add_option("--leftovers", o.leftovers, "Single-minded: give undemanded goods to the last player (last) or nobody (none)");
  learn->add_option("--seed", o.seed, "Unused; accepted for uniformity");
  learn->add_option("--out", o.out, "Output outcome JSON (default stdout)");

  auto* eval = app.add_subcommand("eval", "Evaluate an outcome");
  eval->add_option("--kind", o.kind, "loss, welfare, envy, walrasian or ratio")->required();
  eval->add_option("--outcome", o.outcome, "Outcome JSON")->required();
  eval->add_option("--samples", o.samples, "Samples JSONL");
  eval->add_option("--market", o.market, "Market JSON (true valuations)");
  eval->add_option("--budgets", o.budgets, "Budgets JSON");
  eval->add_option("--dist", o.dist, "Distribution for Monte Carlo loss");
  eval->add_option("--trials", o.trials, "Monte Carlo draws");
  eval->add_option("--seed", o.seed, "Random seed");
  eval->add_option("--limit", o.limit, "Brute-force node budget for --kind ratio");

  auto* adv = app.add_subcommand("adversarial", "Build a worst-case instance");
  adv->add_option("--family", o.family, "unit-demand, single-minded or additive")->required();
  adv->add_option("--n", o.n, "Players")->required();
  adv->add_option("--k", o.k, "Goods")->required();
  adv->add_option("--delta", o.delta, "Budget gap parameter");
  adv->add_option("--seed", o.seed, "Random seed");
  adv->add_option("--out", o.out, "Output JSON (default stdout)");
  adv->add_option("--market-out", o.market_out, "Also write the market JSON here");
  adv->add_option("--samples-out", o.samples_out, "Also write the samples JSONL here");

  auto* exp = app.add_subcommand("experiment", "Run an experiment sweep");
  exp->add_option("--config", o.config, "key=value config file");
  exp->add_option("--set", o.overrides, "Override a config key (key=value)");
  exp->add_option("--family", o.family, "Valuation family");
  exp->add_option("--seed", o.seed, "Master seed");
  exp->add_option("--workers", o.workers, "Worker threads");
  exp->add_option("--reps", o.reps, "Repetitions");
  exp->add_option("--limit", o.limit, "Brute-force node budget");
  exp->add_option("--format", o.format, "csv or jsonl");
  exp->add_option("--out", o.out, "Report path (default stdout)");
  exp->add_flag("--resume", o.resume, "Skip cells already present in --out");

  auto* synth = app.add_subcommand("synth-ratings", "Write a synthetic ratings CSV");
  synth->add_option("--n", o.n, "Users")->required();
  synth->add_option("--k", o.k, "Items")->required();
  synth->add_option("--seed", o.seed, "Random seed");
  synth->add_option("--out", o.out, "Output CSV (default stdout)");

  auto* sc = app.add_subcommand("sample-complexity", "Samples sufficient for a PAC guarantee");
  sc->add_option("--k", o.k, "Goods")->required();
  sc->add_option("--eps", o.eps, "Accuracy in (0,1)")->required();
  sc->add_option("--delta", o.conf, "Failure probability in (0,1)")->required();
  sc->add_option("--C", o.multiplier, "Constant multiplier");

  std::vector<const char*> argv;
  argv.push_back("pacmarket");
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen_samples(o, out, err);
    if (learn->parsed()) return cmd_learn(o, out, err);
    if (eval->parsed()) return cmd_eval(o, out, err);
    if (adv->parsed()) return cmd_adversarial(o, out, err);
    if (exp->parsed()) return cmd_experiment(o, *exp, out, err);
    if (synth->parsed()) return cmd_synth_ratings(o, out, err);
    if (sc->parsed()) return cmd_sample_complexity(o, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ResourceLimitError& e) {
    err << "resource limit: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pacmarket
