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

#include "pacmarket/harness.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "json.hpp"

#include "pacmarket/additive.hpp"
#include "pacmarket/baselines.hpp"
#include "pacmarket/distributions.hpp"
#include "pacmarket/errors.hpp"
#include "pacmarket/metrics.hpp"
#include "pacmarket/single_minded.hpp"
#include "pacmarket/submodular.hpp"
#include "pacmarket/unit_demand.hpp"

namespace pacmarket {

void RatingsTable::add(std::int64_t user, std::int64_t item, double rating) {
  auto [it, fresh] = index_.try_emplace({user, item}, rows_.size());
  if (fresh) {
    rows_.push_back({user, item, rating});
  } else {
    rows_[it->second].rating = rating;
  }
}

namespace {

std::string trim(std::string s) {
  const auto not_space = [](unsigned char c) { return !std::isspace(c); };
  s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
  s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
  return s;
}

template <class T>
std::optional<T> parse_number(const std::string& text) {
  const std::string s = trim(text);
  T value{};
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, value);
  if (ec != std::errc() || ptr != end || s.empty()) return std::nullopt;
  return value;
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        out.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        out.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back();
    } else {
      out.back() += c;
    }
  }
  return out;
}

std::string quote_csv(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

RatingsTable load_ratings_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open ratings file '" + path + "'");
  std::string line;
  if (!std::getline(in, line) || trim(line) != "user_id,item_id,rating") {
    throw DataError(path + ":1: expected header 'user_id,item_id,rating'");
  }
  RatingsTable table;
  for (std::size_t lineno = 2; std::getline(in, line); ++lineno) {
    if (trim(line).empty()) continue;
    const auto fields = split_csv(trim(line));
    const auto where = path + ":" + std::to_string(lineno) + ": ";
    if (fields.size() != 3) throw DataError(where + "expected 3 fields, got " + std::to_string(fields.size()));
    const auto user = parse_number<std::int64_t>(fields[0]);
    const auto item = parse_number<std::int64_t>(fields[1]);
    const auto rating = parse_number<double>(fields[2]);
    if (!user || !item) throw DataError(where + "user and item ids must be integers");
    if (!rating || !std::isfinite(*rating) || *rating < 0.0) {
      throw DataError(where + "rating '" + trim(fields[2]) + "' is not a nonnegative number");
    }
    table.add(*user, *item, *rating);
  }
  return table;
}

RatingsTable synth_ratings(std::size_t n, std::size_t k, Rng& rng) {
  RatingsTable table;
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t i = 0; i < k; ++i) {
      table.add(static_cast<std::int64_t>(u), static_cast<std::int64_t>(i),
                static_cast<double>(rng.uniform_int(1, 5)));
    }
  }
  return table;
}

// ---------------------------------------------------------------------------
// Configuration

void ExperimentConfig::validate() const {
  if (n == 0 || k == 0) throw DataError("n and k must be positive");
  if (sample_counts.empty()) throw DataError("sample_counts must not be empty");
  for (std::size_t j = 0; j < sample_counts.size(); ++j) {
    if (sample_counts[j] == 0) throw DataError("sample counts must be positive");
    if (j > 0 && sample_counts[j] <= sample_counts[j - 1]) {
      throw DataError("sample_counts must be strictly increasing");
    }
  }
  if (repetitions == 0) throw DataError("repetitions must be at least 1");
  if (eval_trials == 0) throw DataError("eval_trials must be at least 1");
  if (threshold == 0 || slot_count == 0) throw DataError("threshold and slot_count must be positive");
  if (desired_size == 0 || desired_size > k) throw DataError("desired_size must lie in [1, k]");
  if (!(budget_base > 0.0) || !(budget_spread > 0.0)) throw DataError("budget_base and budget_spread must be positive");
  if (!(perturbation >= 0.0)) throw DataError("perturbation must be nonnegative");
  if (submod_floor != "zero" && submod_floor != "budget") throw DataError("submod_floor must be 'zero' or 'budget'");
  if (workers == 0) throw DataError("workers must be at least 1");
  (void)DistributionSpec::parse(distribution, k);
}

namespace {

std::size_t to_count(const std::string& key, const std::string& value) {
  const auto v = parse_number<std::uint64_t>(value);
  if (!v) throw DataError("config key '" + key + "' needs a nonnegative integer, got '" + value + "'");
  return static_cast<std::size_t>(*v);
}

double to_real(const std::string& key, const std::string& value) {
  const auto v = parse_number<double>(value);
  if (!v || !std::isfinite(*v)) throw DataError("config key '" + key + "' needs a number, got '" + value + "'");
  return *v;
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw DataError("config key '" + key + "' needs true or false, got '" + value + "'");
}

}  // namespace

void set_config_field(ExperimentConfig& c, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  if (key == "n") {
    c.n = to_count(key, value);
  } else if (key == "k") {
    c.k = to_count(key, value);
  } else if (key == "family") {
    c.family = parse_family(value);
  } else if (key == "distribution") {
    c.distribution = value;
  } else if (key == "sample_counts") {
    c.sample_counts.clear();
    std::stringstream ss(value);
    for (std::string part; std::getline(ss, part, ',');) c.sample_counts.push_back(to_count(key, part));
  } else if (key == "repetitions") {
    c.repetitions = to_count(key, value);
  } else if (key == "eval_trials") {
    c.eval_trials = to_count(key, value);
  } else if (key == "threshold") {
    c.threshold = to_count(key, value);
  } else if (key == "slot_count") {
    c.slot_count = to_count(key, value);
  } else if (key == "desired_size") {
    c.desired_size = to_count(key, value);
  } else if (key == "seed") {
    c.seed = to_count(key, value);
  } else if (key == "budget_base") {
    c.budget_base = to_real(key, value);
  } else if (key == "budget_spread") {
    c.budget_spread = to_real(key, value);
  } else if (key == "perturbation") {
    c.perturbation = to_real(key, value);
  } else if (key == "ratings") {
    c.ratings = value;
  } else if (key == "submod_floor") {
    c.submod_floor = value;
  } else if (key == "opt_max_k") {
    c.opt_max_k = to_count(key, value);
  } else if (key == "opt_limit") {
    c.opt_limit = to_count(key, value);
  } else if (key == "workers") {
    c.workers = to_count(key, value);
  } else if (key == "timing") {
    c.timing = to_bool(key, value);
  } else {
    throw DataError("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config(const std::string& text, ExperimentConfig base) {
  std::stringstream in(text);
  std::size_t lineno = 0;
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw DataError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    set_config_field(base, line.substr(0, eq), line.substr(eq + 1));
  }
  return base;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), std::move(base));
}

// ---------------------------------------------------------------------------
// Market construction

MarketInstance build_market(const RatingsTable& ratings, Family family, const ExperimentConfig& config, Rng& rng) {
  const std::size_t n = config.n;
  const std::size_t k = config.k;

  std::map<std::int64_t, std::size_t> user_count;
  for (const auto& r : ratings.rows()) ++user_count[r.user];
  if (user_count.size() < n) {
    throw DataError("ratings cover " + std::to_string(user_count.size()) + " users, need " + std::to_string(n));
  }
  std::vector<std::pair<std::int64_t, std::size_t>> users(user_count.begin(), user_count.end());
  std::stable_sort(users.begin(), users.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  users.resize(n);
  std::map<std::int64_t, std::size_t> player_of;
  for (std::size_t i = 0; i < n; ++i) player_of[users[i].first] = i;

  std::map<std::int64_t, std::size_t> item_count;
  for (const auto& r : ratings.rows()) {
    if (player_of.count(r.user) != 0) ++item_count[r.item];
  }
  if (item_count.size() < k) {
    throw DataError("chosen users rate " + std::to_string(item_count.size()) + " items, need " + std::to_string(k));
  }
  std::vector<std::pair<std::int64_t, std::size_t>> items(item_count.begin(), item_count.end());
  std::stable_sort(items.begin(), items.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  items.resize(k);
  std::sort(items.begin(), items.end());
  std::map<std::int64_t, std::size_t> good_of;
  for (std::size_t g = 0; g < k; ++g) good_of[items[g].first] = g;

  Matrix r(n, k, -1.0);
  for (const auto& row : ratings.rows()) {
    const auto p = player_of.find(row.user);
    const auto g = good_of.find(row.item);
    if (p != player_of.end() && g != good_of.end()) r(p->second, g->second) = row.rating;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t g = 0; g < k; ++g) {
      if (r(i, g) < 0.0) {
        throw DataError("no rating for user " + std::to_string(users[i].first) + " and item " +
                        std::to_string(items[g].first) + " in the densest block");
      }
    }
  }

  std::vector<double> budgets(n);
  for (bool distinct = false; !distinct;) {
    for (auto& b : budgets) b = config.budget_base + rng.uniform(0.0, config.budget_spread);
    std::sort(budgets.begin(), budgets.end(), std::greater<>());
    distinct = std::adjacent_find(budgets.begin(), budgets.end()) == budgets.end();
  }

  Matrix v(n, k);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t top = 0;
    for (std::size_t g = 0; g < k; ++g) {
      v(i, g) = r(i, g) + (config.perturbation > 0.0 ? rng.uniform(0.0, config.perturbation) : 0.0);
      if (v(i, g) > v(i, top)) top = g;
    }
    if (!(v(i, top) > 0.0)) throw DataError("player " + std::to_string(i) + " has no positive rating");
    const double scale = budgets[i] / v(i, top);
    for (std::size_t g = 0; g < k; ++g) v(i, g) *= scale;
    v(i, top) = budgets[i];
  }

  BudgetVector b(budgets);
  switch (family) {
    case Family::kUnitDemand:
      return MarketInstance(b, UnitDemand(std::move(v)), true);
    case Family::kAdditive:
      return MarketInstance(b, Additive(std::move(v)), true);
    case Family::kSubmodular: {
      std::vector<std::size_t> perm(k);
      std::iota(perm.begin(), perm.end(), std::size_t{0});
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<std::size_t> slot_of(k);
      for (std::size_t p = 0; p < k; ++p) slot_of[perm[p]] = p % config.slot_count;
      return MarketInstance(b, ThresholdSubmodular(std::move(v), std::move(slot_of), config.threshold), true);
    }
    case Family::kSingleMinded: {
      std::vector<Bundle> desired;
      for (std::size_t i = 0; i < n; ++i) {
        std::vector<Good> order(k);
        std::iota(order.begin(), order.end(), Good{0});
        std::stable_sort(order.begin(), order.end(), [&](Good a, Good c) { return v(i, a) > v(i, c); });
        order.resize(std::min(config.desired_size, k));
        desired.emplace_back(k, order);
      }
      return MarketInstance(b, SingleMinded(k, std::move(desired)));
    }
  }
  throw DataError("unsupported family");
}

// ---------------------------------------------------------------------------
// Experiment sweep

namespace {

struct Baseline {
  std::string tag;
  double welfare;
};

std::vector<Baseline> compute_baselines(const MarketInstance& market, const ExperimentConfig& config) {
  const auto& truth = market.valuations();
  std::vector<Baseline> out;
  switch (market.valuations().family()) {
    case Family::kUnitDemand:
      out.push_back({"OPT", welfare(opt_welfare_bruteforce(market, config.opt_limit), truth)});
      out.push_back({"OPTEQ", welfare(optimal_ud_equilibrium(market).allocation, truth)});
      break;
    case Family::kAdditive: {
      out.push_back({"OPT", welfare(opt_welfare_additive(market), truth)});
      const FractionalAllocation eq = divisible_additive_equilibrium(market);
      const auto* add = truth.get_if<Additive>();
      double w = 0.0;
      for (Player i = 0; i < market.players(); ++i) {
        for (Good g = 0; g < market.goods(); ++g) w += eq.shares(i, g) * add->values(i, g);
      }
      out.push_back({"OPTEQ", w});
      break;
    }
    case Family::kSubmodular:
      if (market.goods() <= config.opt_max_k) {
        out.push_back({"OPT", welfare(opt_welfare_bruteforce(market, config.opt_limit), truth)});
      }
      break;
    case Family::kSingleMinded:
      if (market.goods() <= config.opt_max_k) {
        out.push_back({"OPT", welfare(opt_welfare_bruteforce(market, config.opt_limit), truth)});
      }
      if (market.players() <= 20) {
        const auto eq = optimal_sm_welfare_equilibrium(market, config.opt_limit);
        out.push_back({"OPTEQ", static_cast<double>(eq->packing)});
      }
      break;
  }
  return out;
}

struct Learner {
  std::string tag;
  std::function<Outcome(const SampleSet&)> run;
};

std::vector<Learner> learners(const MarketInstance& market, const ExperimentConfig& config) {
  const BudgetVector& b = market.budgets();
  std::vector<Learner> out;
  switch (market.valuations().family()) {
    case Family::kUnitDemand:
      out.push_back({"DLE", [&b](const SampleSet& s) { return direct_ud(s, b); }});
      out.push_back({"ILO", [&b](const SampleSet& s) { return indirect_ud(s, b); }});
      break;
    case Family::kSingleMinded:
      out.push_back({"DLE", [&b](const SampleSet& s) { return sm_equilibrium(learn_desired_sets(s), b); }});
      break;
    case Family::kAdditive:
      out.push_back({"DLE", [&b](const SampleSet& s) { return direct_additive(s, b); }});
      break;
    case Family::kSubmodular: {
      std::vector<double> floors(market.players(), 0.0);
      if (config.submod_floor == "budget") floors = b.values();
      out.push_back({"DLE", [&b, floors](const SampleSet& s) { return direct_submod(s, b, floors); }});
      break;
    }
  }
  return out;
}

std::vector<ResultRecord> run_repetition(const ExperimentConfig& config, const RatingsTable& ratings,
                                         std::size_t rep,
                                         const std::set<std::pair<std::size_t, std::size_t>>& skip) {
  const Rng rep_rng = Rng(config.seed).split(rep);
  Rng market_rng = rep_rng.split(0);
  const MarketInstance market = build_market(ratings, config.family, config, market_rng);
  const DistributionSpec spec = DistributionSpec::parse(config.distribution, config.k);
  Rng sample_rng = rep_rng.split(1);
  const SampleSet all = make_sample_set(market, spec, config.sample_counts.back(), sample_rng);

  const std::string family(family_name(config.family));
  const std::string dist = spec.to_string();
  const auto base = compute_baselines(market, config);
  const auto algos = learners(market, config);

  std::vector<ResultRecord> records;
  for (std::size_t mi = 0; mi < config.sample_counts.size(); ++mi) {
    const std::size_t m = config.sample_counts[mi];
    if (skip.count({rep, m}) != 0) continue;
    const SampleSet train = all.prefix(m);
    const Rng eval_rng = rep_rng.split(1000 + mi);
    for (const auto& algo : algos) {
      const auto start = std::chrono::steady_clock::now();
      const Outcome out = algo.run(train);
      const auto stop = std::chrono::steady_clock::now();
      if (algo.tag == "DLE") {
        const LossReport train_loss = empirical_loss(out, train, market.valuations(), market.budgets());
        if (train_loss.empirical != 0.0) {
          throw std::logic_error("direct learner is inconsistent on its training set (rep " + std::to_string(rep) +
                                 ", m " + std::to_string(m) + ")");
        }
      }
      Rng eval = eval_rng;
      ResultRecord rec;
      rec.family = family;
      rec.distribution = dist;
      rec.n = config.n;
      rec.k = config.k;
      rec.m = m;
      rec.rep = rep;
      rec.algorithm = algo.tag;
      rec.welfare = welfare(out.allocation, market.valuations());
      rec.emp_loss = estimate_expected_loss(out, market, spec, config.eval_trials, eval);
      rec.burnt = out.burnt_count();
      if (config.timing) rec.wall_ms = std::chrono::duration<double, std::milli>(stop - start).count();
      records.push_back(std::move(rec));
    }
    for (const auto& b : base) {
      ResultRecord rec;
      rec.family = family;
      rec.distribution = dist;
      rec.n = config.n;
      rec.k = config.k;
      rec.m = m;
      rec.rep = rep;
      rec.algorithm = b.tag;
      rec.welfare = b.welfare;
      records.push_back(std::move(rec));
    }
  }
  return records;
}

RatingsTable experiment_ratings(const ExperimentConfig& config) {
  if (!config.ratings.empty()) return load_ratings_csv(config.ratings);
  Rng rng = Rng(config.seed).split(~std::uint64_t{0});
  return synth_ratings(config.n, config.k, rng);
}

}  // namespace

void run_experiment(const ExperimentConfig& config, const RecordSink& sink,
                    const std::set<std::pair<std::size_t, std::size_t>>& skip) {
  config.validate();
  const RatingsTable ratings = experiment_ratings(config);
  const std::size_t reps = config.repetitions;

  if (config.workers <= 1) {
    for (std::size_t rep = 0; rep < reps; ++rep) sink(run_repetition(config, ratings, rep, skip));
    return;
  }

  std::vector<std::optional<std::vector<ResultRecord>>> done(reps);
  std::mutex mu;
  std::condition_variable cv;
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::exception_ptr error;

  auto work = [&] {
    for (;;) {
      const std::size_t rep = next.fetch_add(1);
      if (rep >= reps || stop) return;
      try {
        auto recs = run_repetition(config, ratings, rep, skip);
        std::lock_guard lock(mu);
        done[rep] = std::move(recs);
      } catch (...) {
        std::lock_guard lock(mu);
        if (!error) error = std::current_exception();
        stop = true;
      }
      cv.notify_all();
    }
  };
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < std::min(config.workers, reps); ++w) pool.emplace_back(work);

  try {
    for (std::size_t rep = 0; rep < reps; ++rep) {
      std::vector<ResultRecord> recs;
      {
        std::unique_lock lock(mu);
        cv.wait(lock, [&] { return done[rep].has_value() || error != nullptr; });
        if (error) break;
        recs = std::move(*done[rep]);
        done[rep].reset();
      }
      sink(recs);
    }
  } catch (...) {
    stop = true;
    for (auto& t : pool) t.join();
    throw;
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

std::vector<ResultRecord> run_experiment(const ExperimentConfig& config) {
  std::vector<ResultRecord> all;
  run_experiment(config, [&](const std::vector<ResultRecord>& recs) { all.insert(all.end(), recs.begin(), recs.end()); });
  return all;
}

// ---------------------------------------------------------------------------
// Reports

namespace {

constexpr const char* kColumns = "family,distribution,n,k,m,rep,algorithm,welfare,emp_loss,burnt,wall_ms";

nlohmann::ordered_json to_json(const ResultRecord& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["distribution"] = r.distribution;
  j["n"] = r.n;
  j["k"] = r.k;
  j["m"] = r.m;
  j["rep"] = r.rep;
  j["algorithm"] = r.algorithm;
  j["welfare"] = r.welfare;
  j["emp_loss"] = r.emp_loss;
  j["burnt"] = r.burnt;
  j["wall_ms"] = r.wall_ms;
  return j;
}

ResultRecord record_from_fields(const std::vector<std::string>& f, const std::string& where) {
  if (f.size() != 11) throw DataError(where + "expected 11 columns, got " + std::to_string(f.size()));
  auto count = [&](const std::string& s) {
    const auto v = parse_number<std::uint64_t>(s);
    if (!v) throw DataError(where + "bad integer '" + s + "'");
    return static_cast<std::size_t>(*v);
  };
  auto real = [&](const std::string& s) {
    const auto v = parse_number<double>(s);
    if (!v) throw DataError(where + "bad number '" + s + "'");
    return *v;
  };
  ResultRecord r;
  r.family = f[0];
  r.distribution = f[1];
  r.n = count(f[2]);
  r.k = count(f[3]);
  r.m = count(f[4]);
  r.rep = count(f[5]);
  r.algorithm = f[6];
  r.welfare = real(f[7]);
  r.emp_loss = real(f[8]);
  r.burnt = count(f[9]);
  r.wall_ms = real(f[10]);
  return r;
}

ResultRecord record_from_json(const nlohmann::json& j, const std::string& where) {
  try {
    ResultRecord r;
    r.family = j.at("family").get<std::string>();
    r.distribution = j.at("distribution").get<std::string>();
    r.n = j.at("n").get<std::size_t>();
    r.k = j.at("k").get<std::size_t>();
    r.m = j.at("m").get<std::size_t>();
    r.rep = j.at("rep").get<std::size_t>();
    r.algorithm = j.at("algorithm").get<std::string>();
    r.welfare = j.at("welfare").get<double>();
    r.emp_loss = j.at("emp_loss").get<double>();
    r.burnt = j.at("burnt").get<std::size_t>();
    r.wall_ms = j.at("wall_ms").get<double>();
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(where + e.what());
  }
}

// Reads records, stopping quietly at a malformed final line when `lenient`.
std::vector<ResultRecord> read_records(const std::string& path, ReportFormat format, bool lenient) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open report '" + path + "'");
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) {
    if (!trim(line).empty()) lines.push_back(line);
  }
  std::size_t first = 0;
  if (format == ReportFormat::kCsv) {
    if (lines.empty() || trim(lines[0]) != kColumns) throw DataError(path + ": missing report header");
    first = 1;
  }
  std::vector<ResultRecord> out;
  for (std::size_t j = first; j < lines.size(); ++j) {
    const std::string where = path + ":" + std::to_string(j + 1) + ": ";
    try {
      if (format == ReportFormat::kCsv) {
        out.push_back(record_from_fields(split_csv(lines[j]), where));
      } else {
        nlohmann::json parsed;
        try {
          parsed = nlohmann::json::parse(lines[j]);
        } catch (const nlohmann::json::exception& e) {
          throw DataError(where + e.what());
        }
        out.push_back(record_from_json(parsed, where));
      }
    } catch (const DataError&) {
      if (lenient && j + 1 == lines.size()) break;
      throw;
    }
  }
  return out;
}

std::vector<std::string> expected_tags(const ExperimentConfig& config) {
  switch (config.family) {
    case Family::kUnitDemand:
      return {"DLE", "ILO", "OPT", "OPTEQ"};
    case Family::kAdditive:
      return {"DLE", "OPT", "OPTEQ"};
    case Family::kSubmodular:
      if (config.k <= config.opt_max_k) return {"DLE", "OPT"};
      return {"DLE"};
    case Family::kSingleMinded: {
      std::vector<std::string> tags = {"DLE"};
      if (config.k <= config.opt_max_k) tags.push_back("OPT");
      if (config.n <= 20) tags.push_back("OPTEQ");
      return tags;
    }
  }
  return {};
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  if (name == "csv") return ReportFormat::kCsv;
  if (name == "jsonl") return ReportFormat::kJsonl;
  throw DataError("unknown report format '" + name + "' (expected csv or jsonl)");
}

void write_records(std::ostream& out, const std::vector<ResultRecord>& records, ReportFormat format, bool header) {
  if (format == ReportFormat::kCsv) {
    if (header) out << kColumns << '\n';
    for (const auto& r : records) {
      out << quote_csv(r.family) << ',' << quote_csv(r.distribution) << ',' << r.n << ',' << r.k << ',' << r.m << ','
          << r.rep << ',' << quote_csv(r.algorithm) << ',' << format_double(r.welfare) << ','
          << format_double(r.emp_loss) << ',' << r.burnt << ',' << format_double(r.wall_ms) << '\n';
    }
  } else {
    for (const auto& r : records) out << to_json(r).dump() << '\n';
  }
}

void emit_report(const std::vector<ResultRecord>& records, const std::string& path, ReportFormat format) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write report '" + path + "'");
  write_records(out, records, format, true);
  if (!out) throw DataError("failed writing report '" + path + "'");
}

std::vector<ResultRecord> read_report(const std::string& path, ReportFormat format) {
  return read_records(path, format, false);
}

void run_experiment_to_file(const ExperimentConfig& config, const std::string& path, ReportFormat format,
                            bool resume) {
  std::set<std::pair<std::size_t, std::size_t>> skip;
  std::vector<ResultRecord> kept;
  if (resume && std::filesystem::exists(path)) {
    const auto existing = read_records(path, format, true);
    const auto tags = expected_tags(config);
    std::map<std::pair<std::size_t, std::size_t>, std::set<std::string>> seen;
    for (const auto& r : existing) seen[{r.rep, r.m}].insert(r.algorithm);
    for (const auto& [cell, have] : seen) {
      if (std::all_of(tags.begin(), tags.end(), [&](const std::string& t) { return have.count(t) != 0; })) {
        skip.insert(cell);
      }
    }
    for (const auto& r : existing) {
      if (skip.count({r.rep, r.m}) != 0) kept.push_back(r);
    }
  }
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw DataError("cannot write report '" + path + "'");
  write_records(out, kept, format, true);
  out.flush();
  run_experiment(
      config,
      [&](const std::vector<ResultRecord>& recs) {
        write_records(out, recs, format, false);
        out.flush();
        if (!out) throw DataError("failed writing report '" + path + "'");
      },
      skip);
}

}  // namespace pacmarket
