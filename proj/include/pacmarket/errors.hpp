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

#include <stdexcept>
#include <string>

namespace pacmarket {

// Malformed or inconsistent input data (bad dimensions, ties, bad files).
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A search or iteration budget was exhausted before an answer was found.
class ResourceLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quantity is mathematically undefined for the given arguments.
class UndefinedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace pacmarket
