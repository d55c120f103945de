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

#include "fairdp/dp.hpp"
#include "fairdp/matrix.hpp"
#include "fairdp/mlp.hpp"

namespace fairdp::nn {

struct TrainResult {
  MLPParams params;
  std::vector<double> epoch_mean_losses;  // per-example loss averaged over each pass
  int64_t steps_taken = 0;
};

// Runs config.epochs passes over train_rows. Each epoch reshuffles with a
// seed derived from (shuffle_seed, epoch); minibatches of minibatch_size with
// the final short batch kept. privacy = nullptr aggregates per-example
// gradients by mean and applies adam_step; otherwise every step goes through
// dp_adam_step with a per-step noise seed derived from (noise_seed, step).
TrainResult train(const Matrix& features, const std::vector<uint8_t>& labels,
                  std::span<const int64_t> train_rows, const TrainConfig& config,
                  const dp::PrivacySpec* privacy = nullptr, uint64_t noise_seed = 0);

}  // namespace fairdp::nn
