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

#include <stdexcept>
#include <string>

namespace fairdp {

// File could not be opened, read or written.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input text (bad field count, non-numeric value, ...).
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A value does not fit the encoding schema (e.g. unseen category).
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A continuous column has zero variance on the normalization split.
struct DegenerateColumnError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A caller violated a documented precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// A metric is undefined on the given input (empty group, empty vector).
struct UndefinedMetricError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A numeric input is NaN or infinite where a finite value is required.
struct NumericInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// sigma = 0 with a positive sampling rate has unbounded privacy loss.
struct InfinitePrivacyLossError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Noise calibration could not reach the target epsilon inside the bracket.
// Carries the epsilon achieved at the bracket edge.
struct CalibrationError : std::runtime_error {
  CalibrationError(const std::string& message, double achieved)
      : std::runtime_error(message), achieved_epsilon(achieved) {}
  double achieved_epsilon;
};

// The reject-option grid search cannot be fit (degenerate validation data).
struct FitFailureError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A regression design matrix is rank deficient.
struct SingularDesignError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Report construction failed (missing cells, empty record list, ...).
struct ReportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace fairdp
