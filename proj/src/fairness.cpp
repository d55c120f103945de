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

#include "fairdp/fairness.hpp"

#include <algorithm>
#include <cmath>

#include "fairdp/errors.hpp"
#include "fairdp/kv.hpp"

namespace fairdp::fairness {

namespace {

// The single source of truth for the region rule; the grid search must count
// exactly what apply_roc would emit.
inline uint8_t roc_label(double p, uint8_t prot, double tau, double margin) {
  if (std::abs(p - tau) <= margin) return prot ? 0 : 1;
  return p >= tau ? 1 : 0;
}

struct GridPoint {
  double tau = 0.0;
  double margin = 0.0;
  double accuracy = 0.0;
  double rd = 0.0;
  bool valid = false;
};

double center_distance(const GridPoint& g) { return std::abs(g.tau - 0.5); }

// Within the feasible set accuracy rules; margin, centrality and tau are
// deterministic tie-breaks only.
bool better_feasible(const GridPoint& a, const GridPoint& b) {
  if (!b.valid) return true;
  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
  if (a.margin != b.margin) return a.margin < b.margin;
  if (center_distance(a) != center_distance(b)) return center_distance(a) < center_distance(b);
  return a.tau < b.tau;
}

bool better_fallback(const GridPoint& a, const GridPoint& b) {
  if (!b.valid) return true;
  if (a.rd != b.rd) return a.rd < b.rd;
  if (a.accuracy != b.accuracy) return a.accuracy > b.accuracy;
  if (a.margin != b.margin) return a.margin < b.margin;
  if (center_distance(a) != center_distance(b)) return center_distance(a) < center_distance(b);
  return a.tau < b.tau;
}

}  // namespace

double risk_difference(std::span<const uint8_t> predicted_labels,
                       std::span<const uint8_t> protected_attr) {
  if (predicted_labels.size() != protected_attr.size())
    throw ContractViolation("risk_difference: length mismatch");
  int64_t n_priv = 0, n_unpriv = 0, pos_priv = 0, pos_unpriv = 0;
  for (size_t i = 0; i < predicted_labels.size(); ++i) {
    if (protected_attr[i]) {
      ++n_priv;
      pos_priv += predicted_labels[i];
    } else {
      ++n_unpriv;
      pos_unpriv += predicted_labels[i];
    }
  }
  if (n_priv == 0 || n_unpriv == 0)
    throw UndefinedMetricError("risk_difference: a protected group is empty");
  return std::abs(static_cast<double>(pos_priv) / static_cast<double>(n_priv) -
                  static_cast<double>(pos_unpriv) / static_cast<double>(n_unpriv));
}

double accuracy(std::span<const uint8_t> predicted_labels, std::span<const uint8_t> true_labels) {
  if (predicted_labels.size() != true_labels.size())
    throw ContractViolation("accuracy: length mismatch");
  if (predicted_labels.empty()) throw UndefinedMetricError("accuracy: empty input");
  int64_t agree = 0;
  for (size_t i = 0; i < predicted_labels.size(); ++i)
    agree += predicted_labels[i] == true_labels[i];
  return static_cast<double>(agree) / static_cast<double>(predicted_labels.size());
}

std::vector<uint8_t> apply_roc(std::span<const double> probabilities,
                               std::span<const uint8_t> protected_attr, const ROCPolicy& policy) {
  if (probabilities.size() != protected_attr.size())
    throw ContractViolation("apply_roc: length mismatch");
  std::vector<uint8_t> labels(probabilities.size());
  for (size_t i = 0; i < probabilities.size(); ++i)
    labels[i] = roc_label(probabilities[i], protected_attr[i], policy.tau, policy.margin);
  return labels;
}

ROCPolicy fit_roc(std::span<const double> probabilities, std::span<const uint8_t> labels,
                  std::span<const uint8_t> protected_attr, double rd_bound) {
  const size_t n = probabilities.size();
  if (n == 0 || labels.size() != n || protected_attr.size() != n)
    throw ContractViolation("fit_roc: empty input or length mismatch");
  int64_t n_priv = 0, n_pos = 0;
  for (size_t i = 0; i < n; ++i) {
    n_priv += protected_attr[i];
    n_pos += labels[i];
  }
  const int64_t n_unpriv = static_cast<int64_t>(n) - n_priv;
  if (n_priv == 0 || n_unpriv == 0)
    throw FitFailureError("fit_roc: validation split lacks a protected group");
  if (n_pos == 0 || n_pos == static_cast<int64_t>(n))
    throw FitFailureError("fit_roc: validation labels are one class only");

  // Per tau, points enter the critical region in order of |p - tau|, so the
  // 50 margins are evaluated with one sorted sweep instead of 50 full passes.
  // The counters change exactly as roc_label dictates.
  struct Entry {
    double distance;
    uint32_t index;
  };
  std::vector<Entry> entries(n);
  GridPoint best_feasible_point, best_fallback_point;

  for (int ti = 1; ti <= 99; ++ti) {
    const double tau = static_cast<double>(ti) / 100.0;
    const double bound = std::min(tau, 1.0 - tau);

    int64_t pos_priv = 0, pos_unpriv = 0, correct = 0;
    for (size_t i = 0; i < n; ++i) {
      entries[i].distance = std::abs(probabilities[i] - tau);
      entries[i].index = static_cast<uint32_t>(i);
      const uint8_t base = probabilities[i] >= tau ? 1 : 0;
      if (protected_attr[i])
        pos_priv += base;
      else
        pos_unpriv += base;
      correct += base == labels[i];
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.distance < b.distance; });

    size_t next = 0;
    for (int mi = 0; mi < 50; ++mi) {
      const double margin = bound * (static_cast<double>(mi) / 50.0);
      while (next < n && entries[next].distance <= margin) {
        const uint32_t i = entries[next].index;
        const uint8_t base = probabilities[i] >= tau ? 1 : 0;
        const uint8_t flipped = protected_attr[i] ? 0 : 1;
        if (base != flipped) {
          if (protected_attr[i])
            pos_priv += flipped - base;  // always -1
          else
            pos_unpriv += flipped - base;  // always +1
          correct += (flipped == labels[i]) - (base == labels[i]);
        }
        ++next;
      }
      GridPoint point;
      point.tau = tau;
      point.margin = margin;
      point.accuracy = static_cast<double>(correct) / static_cast<double>(n);
      point.rd = std::abs(static_cast<double>(pos_priv) / static_cast<double>(n_priv) -
                          static_cast<double>(pos_unpriv) / static_cast<double>(n_unpriv));
      point.valid = true;
      if (point.rd <= rd_bound && better_feasible(point, best_feasible_point))
        best_feasible_point = point;
      if (better_fallback(point, best_fallback_point)) best_fallback_point = point;
    }
  }

  const GridPoint& chosen = best_feasible_point.valid ? best_feasible_point : best_fallback_point;
  ROCPolicy policy;
  policy.tau = chosen.tau;
  policy.margin = chosen.margin;
  policy.objective_value = chosen.accuracy;
  policy.achieved_rd = chosen.rd;
  return policy;
}

void write_policy(const ROCPolicy& policy, const std::string& path) {
  KvDoc doc;
  doc.set_double("tau", policy.tau);
  doc.set_double("margin", policy.margin);
  doc.set_double("objective_value", policy.objective_value);
  doc.set_double("achieved_rd", policy.achieved_rd);
  doc.save(path);
}

ROCPolicy read_policy(const std::string& path) {
  KvDoc doc = KvDoc::load(path);
  ROCPolicy policy;
  policy.tau = doc.get_double("tau");
  policy.margin = doc.get_double("margin");
  policy.objective_value = doc.get_double("objective_value");
  policy.achieved_rd = doc.get_double("achieved_rd");
  return policy;
}

}  // namespace fairdp::fairness
