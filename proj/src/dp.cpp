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

#include "fairdp/dp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fairdp/errors.hpp"
#include "fairdp/rng.hpp"

namespace fairdp::dp {

namespace {

double log_binom(int64_t n, int64_t k) {
  return std::lgamma(static_cast<double>(n + 1)) - std::lgamma(static_cast<double>(k + 1)) -
         std::lgamma(static_cast<double>(n - k + 1));
}

double log_sum_exp(std::span<const double> terms) {
  double max_term = -std::numeric_limits<double>::infinity();
  for (double t : terms) max_term = std::max(max_term, t);
  if (!std::isfinite(max_term)) return max_term;
  double sum = 0.0;
  for (double t : terms) sum += std::exp(t - max_term);
  return max_term + std::log(sum);
}

// log E_k[exp(k(k-1)/(2 sigma^2))] over k ~ Binomial(alpha, q), divided by
// alpha - 1. All series terms are positive; log-space evaluation keeps the
// k(k-1)/(2 sigma^2) exponents finite for sigma down to the bracket floor.
double rdp_integer_order(double q, double sigma, int64_t alpha) {
  const double log_q = std::log(q);
  const double log_1mq = log1p(-q);
  const double inv_2s2 = 1.0 / (2.0 * sigma * sigma);
  std::vector<double> terms(static_cast<size_t>(alpha + 1));
  for (int64_t k = 0; k <= alpha; ++k) {
    double t = log_binom(alpha, k) + static_cast<double>(k * (k - 1)) * inv_2s2;
    if (k > 0) t += static_cast<double>(k) * log_q;
    if (k < alpha) t += static_cast<double>(alpha - k) * log_1mq;
    terms[static_cast<size_t>(k)] = t;
  }
  const double rdp = log_sum_exp(terms) / static_cast<double>(alpha - 1);
  return std::max(rdp, 0.0);  // rounding can leave a tiny negative residue
}

double rdp_single_order(double q, double sigma, double alpha) {
  if (q >= 1.0) return alpha / (2.0 * sigma * sigma);
  const double lo = std::floor(alpha);
  const double hi = std::ceil(alpha);
  double value = 0.0;
  if (lo >= 2.0) value = rdp_integer_order(q, sigma, static_cast<int64_t>(lo));
  if (hi >= 2.0 && hi != lo)
    value = std::max(value, rdp_integer_order(q, sigma, static_cast<int64_t>(hi)));
  return value;
}

double global_l2_norm(const nn::Gradients& grad) {
  double ss = 0.0;
  for (double v : grad.values) ss += v * v;
  return std::sqrt(ss);
}

}  // namespace

const std::vector<double>& default_orders() {
  static const std::vector<double> orders = [] {
    std::vector<double> o = {1.25, 1.5, 1.75, 2.0, 2.25, 2.5, 3.0, 3.5, 4.0, 4.5};
    for (int a = 5; a <= 64; ++a) o.push_back(static_cast<double>(a));
    o.push_back(128.0);
    o.push_back(256.0);
    return o;
  }();
  return orders;
}

nn::Gradients clip_gradient(const nn::Gradients& grad, double clip_norm) {
  if (!(clip_norm > 0.0)) throw ContractViolation("clip_gradient: clip_norm must be > 0");
  nn::Gradients out = grad;
  const double norm = global_l2_norm(grad);
  const double scale = std::min(1.0, clip_norm / norm);
  if (scale < 1.0)
    for (double& v : out.values) v *= scale;
  return out;
}

nn::Gradients noisy_aggregate(const std::vector<nn::Gradients>& per_example_grads,
                              double clip_norm, double sigma, uint64_t noise_seed) {
  if (per_example_grads.empty()) throw ContractViolation("noisy_aggregate: empty batch");
  if (!(clip_norm > 0.0)) throw ContractViolation("noisy_aggregate: clip_norm must be > 0");
  if (sigma < 0.0) throw ContractViolation("noisy_aggregate: sigma must be >= 0");

  nn::Gradients sum;
  sum.input_dim = per_example_grads.front().input_dim;
  sum.values.assign(per_example_grads.front().values.size(), 0.0);
  for (const nn::Gradients& g : per_example_grads) {
    if (g.values.size() != sum.values.size())
      throw ContractViolation("noisy_aggregate: gradient shapes differ");
    const double norm = global_l2_norm(g);
    const double scale = std::min(1.0, clip_norm / norm);
    if (scale < 1.0) {
      for (size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g.values[i] * scale;
    } else {
      for (size_t i = 0; i < sum.values.size(); ++i) sum.values[i] += g.values[i];
    }
  }
  if (sigma > 0.0) {
    // clip_norm may be the no-clipping sentinel (infinity), which only makes
    // sense without noise; reject the ill-posed combination.
    if (!std::isfinite(clip_norm))
      throw ContractViolation("noisy_aggregate: noise requires a finite clip_norm");
    std::mt19937_64 engine = make_engine(noise_seed);
    std::normal_distribution<double> noise(0.0, sigma * clip_norm);
    for (double& v : sum.values) v += noise(engine);
  }
  const double inv_len = 1.0 / static_cast<double>(per_example_grads.size());
  for (double& v : sum.values) v *= inv_len;
  return sum;
}

void dp_adam_step(nn::AdamState& state, nn::MLPParams& params,
                  const std::vector<nn::Gradients>& per_example_grads, const PrivacySpec& spec,
                  uint64_t noise_seed) {
  nn::Gradients mean =
      noisy_aggregate(per_example_grads, spec.clip_norm, spec.noise_multiplier, noise_seed);
  nn::adam_step(state, params, mean);
}

RDPProfile rdp_subsampled_gaussian(double q, double sigma, std::span<const double> orders) {
  if (!(q > 0.0) || q > 1.0) throw ContractViolation("rdp_subsampled_gaussian: q must be in (0,1]");
  if (sigma == 0.0)
    throw InfinitePrivacyLossError("sigma = 0 with positive sampling rate has no finite bound");
  if (!(sigma > 0.0)) throw ContractViolation("rdp_subsampled_gaussian: sigma must be > 0");
  RDPProfile profile;
  profile.orders.assign(orders.begin(), orders.end());
  profile.rdp_values.reserve(orders.size());
  for (double alpha : orders) {
    if (!(alpha > 1.0)) throw ContractViolation("rdp_subsampled_gaussian: orders must be > 1");
    profile.rdp_values.push_back(rdp_single_order(q, sigma, alpha));
  }
  return profile;
}

EpsilonResult rdp_to_epsilon(const RDPProfile& profile, int64_t steps, double delta) {
  if (profile.orders.empty() || profile.orders.size() != profile.rdp_values.size())
    throw ContractViolation("rdp_to_epsilon: empty or inconsistent profile");
  if (!(delta > 0.0) || !(delta < 1.0))
    throw ContractViolation("rdp_to_epsilon: delta must be in (0,1)");
  if (steps < 1) throw ContractViolation("rdp_to_epsilon: steps must be >= 1");
  const double log_inv_delta = std::log(1.0 / delta);
  EpsilonResult best;
  best.epsilon = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < profile.orders.size(); ++i) {
    const double alpha = profile.orders[i];
    const double eps =
        static_cast<double>(steps) * profile.rdp_values[i] + log_inv_delta / (alpha - 1.0);
    if (eps < best.epsilon) {
      best.epsilon = eps;
      best.best_order = alpha;
    }
  }
  return best;
}

PrivacySpec calibrate_noise_multiplier(double epsilon_target, double delta_target, double q,
                                       int64_t steps, double clip_norm) {
  if (!(epsilon_target > 0.0))
    throw ContractViolation("calibrate_noise_multiplier: epsilon_target must be > 0");

  const auto achieved = [&](double sigma) {
    return rdp_to_epsilon(rdp_subsampled_gaussian(q, sigma, default_orders()), steps, delta_target)
        .epsilon;
  };

  double lo = 0.3, hi = 500.0;
  const double eps_hi = achieved(hi);
  if (eps_hi > epsilon_target) {
    char msg[160];
    std::snprintf(msg, sizeof(msg),
                  "target epsilon %.6g unreachable: sigma = %.6g still yields epsilon %.6g",
                  epsilon_target, hi, eps_hi);
    throw CalibrationError(msg, eps_hi);
  }

  PrivacySpec spec;
  spec.epsilon_target = epsilon_target;
  spec.delta_target = delta_target;
  spec.clip_norm = clip_norm;
  spec.sampling_rate = q;
  spec.steps = steps;

  if (achieved(lo) <= epsilon_target) {
    spec.noise_multiplier = lo;
    spec.achieved_epsilon = achieved(lo);
    return spec;
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (achieved(mid) <= epsilon_target)
      hi = mid;
    else
      lo = mid;
  }
  spec.noise_multiplier = hi;
  spec.achieved_epsilon = achieved(hi);
  return spec;
}

}  // namespace fairdp::dp
