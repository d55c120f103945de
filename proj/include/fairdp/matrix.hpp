// Copyright 2026 The fairdp Authors
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
#include <span>
#include <vector>

#include "fairdp/errors.hpp"

namespace fairdp {

// Dense row-major matrix of doubles. Just enough surface for the feature
// table and small regression designs; not a linear-algebra library.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int64_t rows, int64_t cols)
      : rows_(rows), cols_(cols), values_(static_cast<size_t>(rows * cols), 0.0) {
    if (rows < 0 || cols < 0) throw ContractViolation("Matrix: negative shape");
  }

  int64_t rows() const { return rows_; }
  int64_t cols() const { return cols_; }

  double& operator()(int64_t r, int64_t c) { return values_[static_cast<size_t>(r * cols_ + c)]; }
  double operator()(int64_t r, int64_t c) const {
    return values_[static_cast<size_t>(r * cols_ + c)];
  }

  std::span<const double> row(int64_t r) const {
    return {values_.data() + r * cols_, static_cast<size_t>(cols_)};
  }
  std::span<double> row(int64_t r) {
    return {values_.data() + r * cols_, static_cast<size_t>(cols_)};
  }

  const std::vector<double>& values() const { return values_; }

 private:
  int64_t rows_ = 0;
  int64_t cols_ = 0;
  std::vector<double> values_;
};

}  // namespace fairdp
