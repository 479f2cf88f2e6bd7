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

#include "pacmarket/valuation.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>

#include "pacmarket/errors.hpp"

namespace pacmarket {

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  const std::size_t cols = rows.empty() ? 0 : rows.front().size();
  Matrix m(rows.size(), cols);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != cols) throw DataError("ragged matrix rows");
    for (std::size_t c = 0; c < cols; ++c) m(r, c) = rows[r][c];
  }
  return m;
}

std::vector<double> Matrix::row(std::size_t r) const {
  return {data_.begin() + static_cast<std::ptrdiff_t>(r * cols_),
          data_.begin() + static_cast<std::ptrdiff_t>((r + 1) * cols_)};
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out;
  out.reserve(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out.push_back(row(r));
  return out;
}

std::string_view family_name(Family f) {
  switch (f) {
    case Family::kUnitDemand: return "unit-demand";
    case Family::kSingleMinded: return "single-minded";
    case Family::kAdditive: return "additive";
    case Family::kSubmodular: return "submodular";
  }
  return "unknown";
}

Family parse_family(std::string_view name) {
  if (name == "unit-demand") return Family::kUnitDemand;
  if (name == "single-minded") return Family::kSingleMinded;
  if (name == "additive") return Family::kAdditive;
  if (name == "submodular") return Family::kSubmodular;
  throw DataError("unknown valuation family '" + std::string(name) + "'");
}

namespace {

void check_values(const Matrix& values, const char* what) {
  for (std::size_t i = 0; i < values.rows(); ++i) {
    for (std::size_t g = 0; g < values.cols(); ++g) {
      const double v = values(i, g);
      if (!std::isfinite(v) || v < 0.0) {
        throw DataError(std::string(what) + ": value for player " + std::to_string(i) + ", good " +
                        std::to_string(g) + " must be finite and nonnegative");
      }
    }
  }
}

}  // namespace

UnitDemand::UnitDemand(Matrix v) : values(std::move(v)) {
  check_values(values, "unit-demand");
  std::vector<double> row;
  for (std::size_t i = 0; i < values.rows(); ++i) {
    row = values.row(i);
    std::sort(row.begin(), row.end());
    if (std::adjacent_find(row.begin(), row.end()) != row.end()) {
      throw DataError("unit-demand: player " + std::to_string(i) +
                      " has tied values; perturb valuations before construction");
    }
  }
}

SingleMinded::SingleMinded(std::size_t k, std::vector<Bundle> d) : goods(k), desired(std::move(d)) {
  for (std::size_t i = 0; i < desired.size(); ++i) {
    if (desired[i].universe() != goods) throw DataError("single-minded: desired set universe mismatch");
    if (desired[i].empty()) {
      throw DataError("single-minded: player " + std::to_string(i) + " has an empty desired set");
    }
  }
}

Additive::Additive(Matrix v) : values(std::move(v)) { check_values(values, "additive"); }

ThresholdSubmodular::ThresholdSubmodular(Matrix v, std::vector<std::size_t> slots, std::size_t th)
    : values(std::move(v)), slot_of(std::move(slots)), threshold(th), slot_count(0) {
  check_values(values, "threshold-submodular");
  if (slot_of.size() != values.cols()) throw DataError("threshold-submodular: slot vector length != k");
  if (threshold == 0) throw DataError("threshold-submodular: threshold must be positive");
  for (auto s : slot_of) slot_count = std::max(slot_count, s + 1);
}

Family ValuationProfile::family() const {
  return std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UnitDemand>) return Family::kUnitDemand;
        if constexpr (std::is_same_v<T, SingleMinded>) return Family::kSingleMinded;
        if constexpr (std::is_same_v<T, Additive>) return Family::kAdditive;
        if constexpr (std::is_same_v<T, ThresholdSubmodular>) return Family::kSubmodular;
      },
      v_);
}

std::size_t ValuationProfile::players() const {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SingleMinded>) {
          return v.desired.size();
        } else {
          return v.values.rows();
        }
      },
      v_);
}

std::size_t ValuationProfile::goods() const {
  return std::visit(
      [](const auto& v) -> std::size_t {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, SingleMinded>) {
          return v.goods;
        } else {
          return v.values.cols();
        }
      },
      v_);
}

double ValuationProfile::eval(Player i, const Bundle& bundle) const {
  if (i >= players()) throw std::out_of_range("player index " + std::to_string(i) + " out of range");
  if (bundle.universe() != goods()) {
    throw std::out_of_range("bundle universe " + std::to_string(bundle.universe()) +
                            " does not match market with " + std::to_string(goods()) + " goods");
  }
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UnitDemand>) {
          double best = 0.0;
          bundle.for_each([&](Good g) { best = std::max(best, v.values(i, g)); });
          return best;
        } else if constexpr (std::is_same_v<T, SingleMinded>) {
          return v.desired[i].is_subset_of(bundle) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<T, Additive>) {
          double sum = 0.0;
          bundle.for_each([&](Good g) { sum += v.values(i, g); });
          return sum;
        } else {
          std::vector<double> slot_max(v.slot_count, 0.0);
          bundle.for_each([&](Good g) {
            double& m = slot_max[v.slot_of[g]];
            m = std::max(m, v.values(i, g));
          });
          const std::size_t take = std::min(v.threshold, slot_max.size());
          std::partial_sort(slot_max.begin(), slot_max.begin() + static_cast<std::ptrdiff_t>(take),
                            slot_max.end(), std::greater<>());
          double sum = 0.0;
          for (std::size_t s = 0; s < take; ++s) sum += slot_max[s];
          return sum;
        }
      },
      v_);
}

double ValuationProfile::singleton(Player i, Good g) const {
  Bundle b(goods());
  b.insert(g);
  return eval(i, b);
}

double ValuationProfile::max_singleton(Player i) const {
  double best = 0.0;
  for (Good g = 0; g < goods(); ++g) best = std::max(best, singleton(i, g));
  return best;
}

}  // namespace pacmarket
