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

#include "fairdp/mlp.hpp"

namespace fairdp::dp {

// Target guarantee plus the mechanism parameters that realize it. A spec is
// "calibrated" once noise_multiplier and achieved_epsilon are filled in by
// calibrate_noise_multiplier.
struct PrivacySpec {
  double epsilon_target = 1.0;
  double delta_target = 1e-5;
  double clip_norm = 1.0;        // infinity disables clipping
  double noise_multiplier = 0.0; // sigma, in units of clip_norm
  double sampling_rate = 0.0;    // q = minibatch / train rows (nominal)
  int64_t steps = 1;             // T = epochs * ceil(train rows / minibatch)
  double achieved_epsilon = 0.0;
};

// Per-step Renyi divergence bound at each order.
struct RDPProfile {
  std::vector<double> orders;
  std::vector<double> rdp_values;
};

// {1.25, 1.5, 1.75, 2, 2.25, 2.5, 3, 3.5, 4, 4.5, 5..64, 128, 256}
const std::vector<double>& default_orders();

// Scales grad by min(1, clip_norm / global_l2_norm). A scale of exactly 1
// returns the input unchanged bit for bit.
nn::Gradients clip_gradient(const nn::Gradients& grad, double clip_norm);

// Clips every gradient, sums them, adds independent N(0, (sigma*clip_norm)^2)
// noise per coordinate of the sum, divides by the list length. sigma = 0 adds
// nothing and consumes no randomness.
nn::Gradients noisy_aggregate(const std::vector<nn::Gradients>& per_example_grads,
                              double clip_norm, double sigma, uint64_t noise_seed);

// adam_step on the noisy aggregate; hyperparameters identical to plain mode.
void dp_adam_step(nn::AdamState& state, nn::MLPParams& params,
                  const std::vector<nn::Gradients>& per_example_grads, const PrivacySpec& spec,
                  uint64_t noise_seed);

// Renyi divergence of the subsampled Gaussian mechanism per step. q = 1 uses
// the closed form alpha/(2 sigma^2); q < 1 evaluates the binomial series in
// log space at integer orders, and non-integer orders take the larger of the
// two bracketing integers (an upper bound, since RDP is non-decreasing in
// alpha). Throws InfinitePrivacyLossError when sigma = 0 with q > 0.
RDPProfile rdp_subsampled_gaussian(double q, double sigma, std::span<const double> orders);

struct EpsilonResult {
  double epsilon = 0.0;
  double best_order = 0.0;
};

// (epsilon, delta) after steps-fold composition:
// min over alpha of steps * rdp(alpha) + log(1/delta) / (alpha - 1).
EpsilonResult rdp_to_epsilon(const RDPProfile& profile, int64_t steps, double delta);

// Binary search for the smallest noise multiplier in [0.3, 500] whose
// achieved epsilon is <= epsilon_target (60 bisection iterations, feasible
// side returned). Throws CalibrationError when even sigma = 500 misses the
// target. The returned spec carries sigma and the achieved epsilon.
PrivacySpec calibrate_noise_multiplier(double epsilon_target, double delta_target, double q,
                                       int64_t steps, double clip_norm = 1.0);

}  // namespace fairdp::dp
