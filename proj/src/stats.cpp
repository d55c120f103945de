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

#include "fairdp/stats.hpp"

#include <cmath>
#include <limits>

#include "fairdp/errors.hpp"

namespace fairdp::stats {

namespace {

// Continued fraction for the incomplete beta function (modified Lentz).
// Converges quickly for x < (a+1)/(a+b+2); the caller flips to the
// complementary form otherwise.
double beta_continued_fraction(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double m2 = 2.0 * m;
    double coef = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + coef * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + coef / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    coef = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + coef * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + coef / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0))
    throw ContractViolation("regularized_incomplete_beta: a, b must be > 0");
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_continued_fraction(a, b, x) / a;
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double student_t_two_sided_p(double t, int64_t df) {
  if (df < 1) throw ContractViolation("student_t_two_sided_p: df must be >= 1");
  if (std::isinf(t)) return 0.0;
  const double d = static_cast<double>(df);
  return regularized_incomplete_beta(d / 2.0, 0.5, d / (d + t * t));
}

double f_tail_p(double f, int64_t df1, int64_t df2) {
  if (df1 < 1 || df2 < 1) throw ContractViolation("f_tail_p: degrees of freedom must be >= 1");
  if (f <= 0.0) return 1.0;
  if (std::isinf(f)) return 0.0;
  const double d1 = static_cast<double>(df1);
  const double d2 = static_cast<double>(df2);
  return regularized_incomplete_beta(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * f));
}

SampleSummary summarize(std::span<const double> values) {
  if (values.size() < 2) throw ContractViolation("summarize: need at least two values");
  SampleSummary s;
  s.n = static_cast<int64_t>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(s.n);
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
  return s;
}

TTestResult pooled_t_test(const SampleSummary& a, const SampleSummary& b) {
  if (a.n < 2 || b.n < 2) throw ContractViolation("pooled_t_test: each sample needs n >= 2");
  TTestResult r;
  r.df = a.n + b.n - 2;
  r.mean_difference = a.mean - b.mean;
  if (a.sd == 0.0 && b.sd == 0.0) {
    if (r.mean_difference == 0.0) {
      r.t_statistic = 0.0;
      r.p_value = 1.0;
    } else {
      r.infinite_t = true;
      r.t_statistic = r.mean_difference > 0.0 ? std::numeric_limits<double>::infinity()
                                              : -std::numeric_limits<double>::infinity();
      r.p_value = 0.0;
    }
  } else {
    const double pooled_var = (static_cast<double>(a.n - 1) * a.sd * a.sd +
                               static_cast<double>(b.n - 1) * b.sd * b.sd) /
                              static_cast<double>(r.df);
    const double se = std::sqrt(pooled_var) *
                      std::sqrt(1.0 / static_cast<double>(a.n) + 1.0 / static_cast<double>(b.n));
    r.t_statistic = r.mean_difference / se;
    r.p_value = student_t_two_sided_p(r.t_statistic, r.df);
  }
  r.significant_at_05 = r.p_value < 0.05;
  return r;
}

RegressionResult ols_fit(const Matrix& design, std::span<const double> response) {
  const int64_t n = design.rows();
  const int64_t p = design.cols();
  if (n <= p || p < 1) throw ContractViolation("ols_fit: need more rows than columns");
  if (static_cast<int64_t>(response.size()) != n)
    throw ContractViolation("ols_fit: response length mismatch");

  Matrix a = design;
  std::vector<double> y(response.begin(), response.end());

  double scale = 0.0;
  for (double v : a.values()) scale = std::max(scale, std::abs(v));
  const double rank_tol = std::max(scale, 1.0) * 1e-12;

  // Householder QR applied to [A | y]; after all reflections the first p
  // entries of y hold Q^T y for back substitution and the tail carries the
  // residual norm.
  for (int64_t k = 0; k < p; ++k) {
    double norm = 0.0;
    for (int64_t i = k; i < n; ++i) norm += a(i, k) * a(i, k);
    norm = std::sqrt(norm);
    if (norm <= rank_tol)
      throw SingularDesignError("ols_fit: design is rank deficient at column " +
                                std::to_string(k));
    const double alpha = a(k, k) >= 0.0 ? -norm : norm;
    std::vector<double> v(static_cast<size_t>(n - k), 0.0);
    v[0] = a(k, k) - alpha;
    for (int64_t i = k + 1; i < n; ++i) v[static_cast<size_t>(i - k)] = a(i, k);
    double vnorm2 = 0.0;
    for (double vi : v) vnorm2 += vi * vi;
    if (vnorm2 > 0.0) {
      for (int64_t j = k; j < p; ++j) {
        double dot = 0.0;
        for (int64_t i = k; i < n; ++i) dot += v[static_cast<size_t>(i - k)] * a(i, j);
        const double f = 2.0 * dot / vnorm2;
        for (int64_t i = k; i < n; ++i) a(i, j) -= f * v[static_cast<size_t>(i - k)];
      }
      double dot = 0.0;
      for (int64_t i = k; i < n; ++i) dot += v[static_cast<size_t>(i - k)] * y[static_cast<size_t>(i)];
      const double f = 2.0 * dot / vnorm2;
      for (int64_t i = k; i < n; ++i) y[static_cast<size_t>(i)] -= f * v[static_cast<size_t>(i - k)];
    }
    a(k, k) = alpha;
  }

  RegressionResult result;
  result.coefficients.assign(static_cast<size_t>(p), 0.0);
  for (int64_t k = p - 1; k >= 0; --k) {
    double acc = y[static_cast<size_t>(k)];
    for (int64_t j = k + 1; j < p; ++j) acc -= a(k, j) * result.coefficients[static_cast<size_t>(j)];
    result.coefficients[static_cast<size_t>(k)] = acc / a(k, k);
  }

  double ssr = 0.0;
  for (int64_t i = p; i < n; ++i) ssr += y[static_cast<size_t>(i)] * y[static_cast<size_t>(i)];
  double mean_y = 0.0;
  for (double v : response) mean_y += v;
  mean_y /= static_cast<double>(n);
  double sst = 0.0;
  for (double v : response) sst += (v - mean_y) * (v - mean_y);

  result.df_model = p - 1;
  result.df_residual = n - p;
  if (sst > 0.0) {
    result.r_squared = std::min(std::max(1.0 - ssr / sst, 0.0), 1.0);
  } else {
    result.r_squared = 0.0;  // constant response: nothing to explain
  }
  if (result.df_model == 0) {
    result.f_statistic = 0.0;
    result.p_value = 1.0;
  } else if (result.r_squared >= 1.0) {
    result.f_statistic = std::numeric_limits<double>::infinity();
    result.p_value = 0.0;
  } else {
    result.f_statistic = (result.r_squared / static_cast<double>(result.df_model)) /
                         ((1.0 - result.r_squared) / static_cast<double>(result.df_residual));
    result.p_value = f_tail_p(result.f_statistic, result.df_model, result.df_residual);
  }
  return result;
}

}  // namespace fairdp::stats
