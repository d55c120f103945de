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
#include <string>
#include <vector>

namespace fairdp::fairness {

// Label-flip policy around the decision threshold. Points with |p - tau| <=
// margin sit in the critical region: there the unprivileged group receives
// the favorable label and the privileged group the unfavorable one.
struct ROCPolicy {
  double tau = 0.5;
  double margin = 0.0;            // < min(tau, 1 - tau)
  double objective_value = 0.0;   // validation accuracy of the chosen policy
  double achieved_rd = 0.0;       // validation risk difference
};

struct FairnessThresholds {
  double strict = 0.05;
  double lenient = 0.1;
};

// |P(label 1 | privileged) - P(label 1 | unprivileged)|. Throws
// UndefinedMetricError when a group is empty, ContractViolation when the
// spans disagree in length.
double risk_difference(std::span<const uint8_t> predicted_labels,
                       std::span<const uint8_t> protected_attr);

// Fraction of agreements. Throws UndefinedMetricError on empty input,
// ContractViolation when the spans disagree in length.
double accuracy(std::span<const uint8_t> predicted_labels, std::span<const uint8_t> true_labels);

// Outside the critical region label = 1 iff p >= tau; inside, protected = 0
// maps to 1 and protected = 1 maps to 0.
std::vector<uint8_t> apply_roc(std::span<const double> probabilities,
                               std::span<const uint8_t> protected_attr, const ROCPolicy& policy);

// Grid search: tau in {0.01, ..., 0.99}, 50 margins uniform in
// [0, min(tau, 1-tau)) per tau. Among points with validation risk difference
// <= rd_bound picks the highest accuracy; with no feasible point, the lowest
// risk difference. Ties break toward higher accuracy (fallback only), then
// smaller margin, then tau nearer 0.5, then smaller tau. Throws
// FitFailureError on one-class labels or a missing protected group.
ROCPolicy fit_roc(std::span<const double> probabilities, std::span<const uint8_t> labels,
                  std::span<const uint8_t> protected_attr, double rd_bound = 0.05);

void write_policy(const ROCPolicy& policy, const std::string& path);
ROCPolicy read_policy(const std::string& path);

}  // namespace fairdp::fairness
