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

#include <cstddef>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "pacmarket/bundle.hpp"

namespace pacmarket {

using Player = std::size_t;

/// Dense row-major matrix of doubles, rows = players, columns = goods.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

  std::vector<double> row(std::size_t r) const;
  std::vector<std::vector<double>> to_rows() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class Family { kUnitDemand, kSingleMinded, kAdditive, kSubmodular };

std::string_view family_name(Family f);
// Accepts the CLI spellings: unit-demand, single-minded, additive, submodular.
Family parse_family(std::string_view name);

/// v_i(S) = max over members of the singleton value. Rows must hold pairwise
/// distinct values; construction rejects ties.
struct UnitDemand {
  explicit UnitDemand(Matrix values);
  Matrix values;
};

/// v_i(S) = 1 iff S contains the desired set D_i.
struct SingleMinded {
  SingleMinded(std::size_t goods, std::vector<Bundle> desired);
  std::size_t goods;
  std::vector<Bundle> desired;
};

/// v_i(S) = sum of singleton values.
struct Additive {
  explicit Additive(Matrix values);
  Matrix values;
};

/// Goods are grouped into time slots. Within a slot a player only enjoys the
/// best good, and only the `threshold` best slots count.
struct ThresholdSubmodular {
  ThresholdSubmodular(Matrix values, std::vector<std::size_t> slot_of, std::size_t threshold);
  Matrix values;
  std::vector<std::size_t> slot_of;
  std::size_t threshold;
  std::size_t slot_count;
};

class ValuationProfile {
 public:
  using Variant = std::variant<UnitDemand, SingleMinded, Additive, ThresholdSubmodular>;

  ValuationProfile(UnitDemand v) : v_(std::move(v)) {}
  ValuationProfile(SingleMinded v) : v_(std::move(v)) {}
  ValuationProfile(Additive v) : v_(std::move(v)) {}
  ValuationProfile(ThresholdSubmodular v) : v_(std::move(v)) {}

  Family family() const;
  std::size_t players() const;
  std::size_t goods() const;

  double eval(Player i, const Bundle& bundle) const;
  double singleton(Player i, Good g) const;
  // max_g v_i({g})
  double max_singleton(Player i) const;

  const Variant& variant() const { return v_; }
  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&v_);
  }

 private:
  Variant v_;
};

}  // namespace pacmarket
