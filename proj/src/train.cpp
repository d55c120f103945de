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

#include "fairdp/train.hpp"

#include <algorithm>

#include "fairdp/errors.hpp"
#include "fairdp/rng.hpp"

namespace fairdp::nn {

TrainResult train(const Matrix& features, const std::vector<uint8_t>& labels,
                  std::span<const int64_t> train_rows, const TrainConfig& config,
                  const dp::PrivacySpec* privacy, uint64_t noise_seed) {
  if (train_rows.empty()) throw ContractViolation("train: empty train split");
  if (config.epochs < 1) throw ContractViolation("train: epochs must be >= 1");
  if (config.minibatch_size < 1) throw ContractViolation("train: minibatch_size must be >= 1");

  TrainResult result;
  result.params = init_params(features.cols(), config.weight_init_seed);
  AdamState state = make_adam_state(features.cols());

  const int64_t n = static_cast<int64_t>(train_rows.size());
  const int64_t batch = config.minibatch_size;
  std::vector<int64_t> order(train_rows.begin(), train_rows.end());
  std::vector<Gradients> batch_grads;
  Gradients mean;
  mean.input_dim = features.cols();

  for (int64_t epoch = 0; epoch < config.epochs; ++epoch) {
    std::mt19937_64 engine =
        make_engine(mix_seed(config.shuffle_seed, static_cast<uint64_t>(epoch)));
    std::shuffle(order.begin(), order.end(), engine);
    double loss_sum = 0.0;
    for (int64_t start = 0; start < n; start += batch) {
      const int64_t end = std::min(start + batch, n);
      const int64_t len = end - start;
      if (privacy) {
        batch_grads.clear();
        for (int64_t i = start; i < end; ++i) {
          double p;
          batch_grads.push_back(
              backward_per_example(result.params, features.row(order[i]), labels[order[i]], &p));
          loss_sum += bce_loss(p, labels[order[i]]);
        }
        dp::dp_adam_step(state, result.params, batch_grads, *privacy,
                         mix_seed(noise_seed, static_cast<uint64_t>(result.steps_taken)));
      } else {
        // Sum then scale by the reciprocal, in example order, exactly as the
        // dp aggregation does; keeps the sigma = 0 degeneracy bit for bit.
        mean.values.assign(result.params.values.size(), 0.0);
        for (int64_t i = start; i < end; ++i) {
          double p;
          Gradients g =
              backward_per_example(result.params, features.row(order[i]), labels[order[i]], &p);
          loss_sum += bce_loss(p, labels[order[i]]);
          for (size_t c = 0; c < mean.values.size(); ++c) mean.values[c] += g.values[c];
        }
        const double inv_len = 1.0 / static_cast<double>(len);
        for (double& v : mean.values) v *= inv_len;
        adam_step(state, result.params, mean);
      }
      result.steps_taken += 1;
    }
    result.epoch_mean_losses.push_back(loss_sum / static_cast<double>(n));
  }
  return result;
}

}  // namespace fairdp::nn
