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

#include "fairdp/matrix.hpp"

namespace fairdp::stats {

struct SampleSummary {
  int64_t n = 0;
  double mean = 0.0;
  double sd = 0.0;  // sample standard deviation (n - 1)
};

struct TTestResult {
  double mean_difference = 0.0;
  double t_statistic = 0.0;
  int64_t df = 0;
  double p_value = 1.0;
  bool significant_at_05 = false;
  bool infinite_t = false;  // both SDs zero with unequal means
};

struct RegressionResult {
  std::vector<double> coefficients;
  double r_squared = 0.0;
  double f_statistic = 0.0;
  int64_t df_model = 0;
  int64_t df_residual = 0;
  double p_value = 1.0;
};

// Mean and sample SD; requires at least two values.
SampleSummary summarize(std::span<const double> values);

// Equal-variance two-sample Student t, df = n1 + n2 - 2, two-sided p.
TTestResult pooled_t_test(const SampleSummary& a, const SampleSummary& b);

// Least squares via Householder QR. The design must include an intercept
// column and have full column rank (SingularDesignError otherwise);
// df_model = p - 1, df_residual = n - p, p-value from the F distribution.
RegressionResult ols_fit(const Matrix& design, std::span<const double> response);

// I_x(a, b), continued-fraction evaluation, absolute accuracy ~1e-12.
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided tail of the Student t distribution with df degrees of freedom.
double student_t_two_sided_p(double t, int64_t df);

// P(F_{df1, df2} > f).
double f_tail_p(double f, int64_t df1, int64_t df2);

}  // namespace fairdp::stats
