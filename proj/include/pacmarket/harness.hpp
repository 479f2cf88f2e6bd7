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

#include <cstdint>
#include <functional>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "pacmarket/market.hpp"
#include "pacmarket/rng.hpp"

namespace pacmarket {

struct Rating {
  std::int64_t user;
  std::int64_t item;
  double rating;
};

/// User/item ratings. Adding a pair that already exists overwrites it.
class RatingsTable {
 public:
  void add(std::int64_t user, std::int64_t item, double rating);
  std::size_t size() const { return rows_.size(); }
  bool empty() const { return rows_.empty(); }
  const std::vector<Rating>& rows() const { return rows_; }

 private:
  std::vector<Rating> rows_;
  std::map<std::pair<std::int64_t, std::int64_t>, std::size_t> index_;
};

/// Reads `user_id,item_id,rating` CSV. Throws DataError naming the line of
/// the first malformed row.
RatingsTable load_ratings_csv(const std::string& path);

/// Every (user, item) pair for users 0..n-1 and items 0..k-1, rated with a
/// uniform integer in [1, 5].
RatingsTable synth_ratings(std::size_t n, std::size_t k, Rng& rng);

enum class ReportFormat { kCsv, kJsonl };

struct ExperimentConfig {
  std::size_t n = 50;
  std::size_t k = 30;
  Family family = Family::kUnitDemand;
  std::string distribution = "product:0.5";
  std::vector<std::size_t> sample_counts = {5, 10, 20, 40, 80, 160, 320, 640, 1280, 2560, 5120};
  std::size_t repetitions = 100;
  std::size_t eval_trials = 1000;
  std::size_t threshold = 3;    // submodular Th
  std::size_t slot_count = 10;  // submodular time slots
  std::size_t desired_size = 2; // single-minded: top goods each player wants
  std::uint64_t seed = 1;
  double budget_base = 5.0;   // b_i = base + U(0, spread)
  double budget_spread = 1.0;
  double perturbation = 0.1;  // v_ij = r_ij + U(0, perturbation)
  std::string ratings;        // CSV path; empty means synthetic ratings
  std::string submod_floor = "zero";  // zero | budget
  std::size_t opt_max_k = 12;         // brute-force OPT only up to this many goods
  std::uint64_t opt_limit = 50'000'000;
  std::size_t workers = 1;
  bool timing = false;  // record wall_ms; off keeps reports byte-identical

  // Throws DataError when a field is out of range.
  void validate() const;
};

/// Applies `key=value` lines (blank lines and `#` comments ignored) on top of
/// `base`. Keys are the ExperimentConfig field names.
ExperimentConfig parse_config(const std::string& text, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});
// Sets one field from its text form. Throws DataError on unknown keys.
void set_config_field(ExperimentConfig& config, const std::string& key, const std::string& value);

/// Market over the densest n x k block of the ratings: budgets base + U(0,
/// spread) sorted decreasing, values r + U(0, perturbation) scaled so each
/// row peaks at the player's budget. Throws DataError if a rating is missing.
MarketInstance build_market(const RatingsTable& ratings, Family family, const ExperimentConfig& config, Rng& rng);

struct ResultRecord {
  std::string family;
  std::string distribution;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t m = 0;
  std::size_t rep = 0;
  std::string algorithm;  // DLE, ILO, OPT or OPTEQ
  double welfare = 0.0;
  double emp_loss = 0.0;
  std::size_t burnt = 0;
  double wall_ms = 0.0;

  friend bool operator==(const ResultRecord&, const ResultRecord&) = default;
};

using RecordSink = std::function<void(const std::vector<ResultRecord>&)>;

/// Runs the sweep. Records of each repetition are handed to `sink` in
/// repetition order, regardless of worker count. Cells listed in `skip` as
/// (rep, m) are not recomputed.
void run_experiment(const ExperimentConfig& config, const RecordSink& sink,
                    const std::set<std::pair<std::size_t, std::size_t>>& skip = {});
std::vector<ResultRecord> run_experiment(const ExperimentConfig& config);

/// Runs the sweep, appending to `path` as each repetition finishes. With
/// `resume`, cells already complete in an existing report are kept and skipped.
void run_experiment_to_file(const ExperimentConfig& config, const std::string& path, ReportFormat format,
                            bool resume);

void emit_report(const std::vector<ResultRecord>& records, const std::string& path, ReportFormat format);
void write_records(std::ostream& out, const std::vector<ResultRecord>& records, ReportFormat format, bool header);
std::vector<ResultRecord> read_report(const std::string& path, ReportFormat format);

ReportFormat parse_report_format(const std::string& name);

}  // namespace pacmarket
