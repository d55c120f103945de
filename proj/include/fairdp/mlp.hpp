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

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "fairdp/matrix.hpp"

namespace fairdp::nn {

inline constexpr int64_t kHiddenWidth = 6;

// One named weight tensor inside the flat parameter buffer.
struct TensorView {
  const char* name;
  int64_t rows;
  int64_t cols;
  int64_t offset;  // start inside values
  int64_t size() const { return rows * cols; }
};

// W1 (input_dim x 6), b1 (6), W2 (6 x 6), b2 (6), W3 (6 x 1), b3 (1),
// in that order.
std::array<TensorView, 6> tensor_layout(int64_t input_dim);
int64_t value_count(int64_t input_dim);

// Parameters of the fixed 6-6-1 network, stored as one flat buffer so the
// optimizer and the privacy machinery can treat them uniformly. Weight
// matrices are row-major with rows indexed by the source layer, i.e.
// z1[j] = sum_k x[k] * W1[k][j] + b1[j].
struct MLPParams {
  int64_t input_dim = 0;
  std::vector<double> values;

  std::span<double> tensor(const TensorView& view) {
    return {values.data() + view.offset, static_cast<size_t>(view.size())};
  }
  std::span<const double> tensor(const TensorView& view) const {
    return {values.data() + view.offset, static_cast<size_t>(view.size())};
  }
};

// Loss gradient with respect to every parameter, same layout as MLPParams.
struct Gradients {
  int64_t input_dim = 0;
  std::vector<double> values;
};

// Glorot-uniform weights (limit sqrt(6/(fan_in+fan_out))), zero biases.
// Deterministic for a fixed seed within one build.
MLPParams init_params(int64_t input_dim, uint64_t seed);

struct ForwardCache {
  std::array<double, kHiddenWidth> z1{}, a1{}, z2{}, a2{};
  double z3 = 0.0;
  double p = 0.5;
};

// relu, relu, sigmoid. Throws NumericInputError on a non-finite feature.
// The cache holds the pre-activations needed by the backward pass.
double forward(const MLPParams& params, std::span<const double> x, ForwardCache* cache = nullptr);

// -(y log p + (1-y) log(1-p)) with p clamped to [1e-7, 1 - 1e-7].
double bce_loss(double p, uint8_t y);

// Exact gradient of the sigmoid cross-entropy composite for one example
// (output-layer term p - y; the loss clamp is not differentiated through).
// relu subgradient at exactly 0 is 0. Returns the forward probability via
// p_out when requested.
Gradients backward_per_example(const MLPParams& params, std::span<const double> x, uint8_t y,
                               double* p_out = nullptr);

struct AdamState {
  std::vector<double> m;  // first moment
  std::vector<double> v;  // second moment
  int64_t t = 0;
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps_hat = 1e-7;  // added outside the square root
};

AdamState make_adam_state(int64_t input_dim);

// Bias-corrected Adam update in place; t advances by one. Throws
// ContractViolation on a shape mismatch.
void adam_step(AdamState& state, MLPParams& params, const Gradients& grad);

struct TrainConfig {
  int64_t epochs = 20;
  int64_t minibatch_size = 20;
  uint64_t shuffle_seed = 0;
  uint64_t weight_init_seed = 0;
};

// Forward probabilities for the listed rows, order preserving.
std::vector<double> predict_proba(const MLPParams& params, const Matrix& features,
                                  std::span<const int64_t> rows);

// Plain-text checkpoint: a key-value document listing every tensor with its
// name, shape and row-major values (round-trip exact).
void save_checkpoint(const MLPParams& params, const std::string& path);
MLPParams load_checkpoint(const std::string& path);

}  // namespace fairdp::nn
