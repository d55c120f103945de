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

#include "fairdp/mlp.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "fairdp/errors.hpp"
#include "fairdp/kv.hpp"
#include "fairdp/rng.hpp"

namespace fairdp::nn {

namespace {

constexpr int64_t kH = kHiddenWidth;
constexpr double kProbEps = 1e-7;

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

}  // namespace

std::array<TensorView, 6> tensor_layout(int64_t input_dim) {
  std::array<TensorView, 6> views = {{
      {"W1", input_dim, kH, 0},
      {"b1", kH, 1, 0},
      {"W2", kH, kH, 0},
      {"b2", kH, 1, 0},
      {"W3", kH, 1, 0},
      {"b3", 1, 1, 0},
  }};
  int64_t offset = 0;
  for (TensorView& v : views) {
    v.offset = offset;
    offset += v.size();
  }
  return views;
}

int64_t value_count(int64_t input_dim) { return 6 * input_dim + 55; }

MLPParams init_params(int64_t input_dim, uint64_t seed) {
  if (input_dim < 1) throw ContractViolation("init_params: input_dim must be >= 1");
  MLPParams params;
  params.input_dim = input_dim;
  params.values.assign(static_cast<size_t>(value_count(input_dim)), 0.0);
  std::mt19937_64 engine = make_engine(seed);
  const std::array<TensorView, 6> layout = tensor_layout(input_dim);
  for (const TensorView& view : layout) {
    if (view.name[0] == 'b') continue;  // biases stay zero
    const int64_t fan_in = view.rows;
    const int64_t fan_out = view.cols;
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    std::uniform_real_distribution<double> uniform(-limit, limit);
    for (double& w : params.tensor(view)) w = uniform(engine);
  }
  return params;
}

double forward(const MLPParams& params, std::span<const double> x, ForwardCache* cache) {
  const int64_t d = params.input_dim;
  if (static_cast<int64_t>(x.size()) != d)
    throw ContractViolation("forward: feature length does not match input_dim");
  for (double v : x)
    if (!std::isfinite(v)) throw NumericInputError("forward: non-finite feature value");

  const double* values = params.values.data();
  const double* w1 = values;
  const double* b1 = w1 + d * kH;
  const double* w2 = b1 + kH;
  const double* b2 = w2 + kH * kH;
  const double* w3 = b2 + kH;
  const double* b3 = w3 + kH;

  std::array<double, kH> z1, a1, z2, a2;
  for (int64_t j = 0; j < kH; ++j) z1[j] = b1[j];
  for (int64_t k = 0; k < d; ++k) {
    const double xk = x[k];
    const double* row = w1 + k * kH;
    for (int64_t j = 0; j < kH; ++j) z1[j] += xk * row[j];
  }
  for (int64_t j = 0; j < kH; ++j) a1[j] = z1[j] > 0.0 ? z1[j] : 0.0;

  for (int64_t j = 0; j < kH; ++j) z2[j] = b2[j];
  for (int64_t i = 0; i < kH; ++i) {
    const double ai = a1[i];
    const double* row = w2 + i * kH;
    for (int64_t j = 0; j < kH; ++j) z2[j] += ai * row[j];
  }
  for (int64_t j = 0; j < kH; ++j) a2[j] = z2[j] > 0.0 ? z2[j] : 0.0;

  double z3 = b3[0];
  for (int64_t j = 0; j < kH; ++j) z3 += a2[j] * w3[j];
  const double p = sigmoid(z3);

  if (cache) {
    cache->z1 = z1;
    cache->a1 = a1;
    cache->z2 = z2;
    cache->a2 = a2;
    cache->z3 = z3;
    cache->p = p;
  }
  return p;
}

double bce_loss(double p, uint8_t y) {
  const double pc = std::min(std::max(p, kProbEps), 1.0 - kProbEps);
  return y ? -std::log(pc) : -std::log(1.0 - pc);
}

Gradients backward_per_example(const MLPParams& params, std::span<const double> x, uint8_t y,
                               double* p_out) {
  ForwardCache cache;
  forward(params, x, &cache);
  if (p_out) *p_out = cache.p;

  const int64_t d = params.input_dim;
  Gradients grad;
  grad.input_dim = d;
  grad.values.assign(params.values.size(), 0.0);
  double* gw1 = grad.values.data();
  double* gb1 = gw1 + d * kH;
  double* gw2 = gb1 + kH;
  double* gb2 = gw2 + kH * kH;
  double* gw3 = gb2 + kH;
  double* gb3 = gw3 + kH;
  const double* w2 = params.values.data() + d * kH + kH;
  const double* w3 = w2 + kH * kH + kH;

  const double dz3 = cache.p - static_cast<double>(y);
  for (int64_t j = 0; j < kH; ++j) gw3[j] = cache.a2[j] * dz3;
  gb3[0] = dz3;

  std::array<double, kH> dz2;
  for (int64_t j = 0; j < kH; ++j) dz2[j] = cache.z2[j] > 0.0 ? w3[j] * dz3 : 0.0;
  for (int64_t i = 0; i < kH; ++i) {
    const double ai = cache.a1[i];
    double* row = gw2 + i * kH;
    for (int64_t j = 0; j < kH; ++j) row[j] = ai * dz2[j];
  }
  for (int64_t j = 0; j < kH; ++j) gb2[j] = dz2[j];

  std::array<double, kH> dz1;
  for (int64_t i = 0; i < kH; ++i) {
    double da1 = 0.0;
    const double* row = w2 + i * kH;
    for (int64_t j = 0; j < kH; ++j) da1 += row[j] * dz2[j];
    dz1[i] = cache.z1[i] > 0.0 ? da1 : 0.0;
  }
  for (int64_t k = 0; k < d; ++k) {
    const double xk = x[k];
    double* row = gw1 + k * kH;
    for (int64_t i = 0; i < kH; ++i) row[i] = xk * dz1[i];
  }
  for (int64_t i = 0; i < kH; ++i) gb1[i] = dz1[i];
  return grad;
}

AdamState make_adam_state(int64_t input_dim) {
  AdamState state;
  state.m.assign(static_cast<size_t>(value_count(input_dim)), 0.0);
  state.v.assign(static_cast<size_t>(value_count(input_dim)), 0.0);
  return state;
}

void adam_step(AdamState& state, MLPParams& params, const Gradients& grad) {
  const size_t n = params.values.size();
  if (grad.values.size() != n || state.m.size() != n || state.v.size() != n ||
      grad.input_dim != params.input_dim)
    throw ContractViolation("adam_step: shape mismatch");
  state.t += 1;
  const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.t));
  const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.t));
  for (size_t i = 0; i < n; ++i) {
    const double g = grad.values[i];
    state.m[i] = state.beta1 * state.m[i] + (1.0 - state.beta1) * g;
    state.v[i] = state.beta2 * state.v[i] + (1.0 - state.beta2) * g * g;
    const double m_hat = state.m[i] / bc1;
    const double v_hat = state.v[i] / bc2;
    params.values[i] -= state.lr * m_hat / (std::sqrt(v_hat) + state.eps_hat);
  }
}

std::vector<double> predict_proba(const MLPParams& params, const Matrix& features,
                                  std::span<const int64_t> rows) {
  std::vector<double> probs;
  probs.reserve(rows.size());
  for (int64_t r : rows) probs.push_back(forward(params, features.row(r)));
  return probs;
}

void save_checkpoint(const MLPParams& params, const std::string& path) {
  KvDoc doc;
  doc.set("format", "fairdp-mlp-checkpoint");
  doc.set_int("input_dim", params.input_dim);
  for (const TensorView& view : tensor_layout(params.input_dim)) {
    const std::string p = std::string("tensor.") + view.name + ".";
    doc.set_int(p + "rows", view.rows);
    doc.set_int(p + "cols", view.cols);
    std::string text;
    char buf[40];
    for (double v : params.tensor(view)) {
      std::snprintf(buf, sizeof(buf), "%.17g", v);
      if (!text.empty()) text += ' ';
      text += buf;
    }
    doc.set(p + "values", text);
  }
  doc.save(path);
}

MLPParams load_checkpoint(const std::string& path) {
  KvDoc doc = KvDoc::load(path);
  if (doc.get("format") != "fairdp-mlp-checkpoint")
    throw ParseError(path + ": not a checkpoint file");
  MLPParams params;
  params.input_dim = doc.get_int("input_dim");
  if (params.input_dim < 1) throw ParseError(path + ": bad input_dim");
  params.values.assign(static_cast<size_t>(value_count(params.input_dim)), 0.0);
  for (const TensorView& view : tensor_layout(params.input_dim)) {
    const std::string p = std::string("tensor.") + view.name + ".";
    if (doc.get_int(p + "rows") != view.rows || doc.get_int(p + "cols") != view.cols)
      throw ParseError(path + ": tensor " + view.name + " has unexpected shape");
    std::istringstream in(doc.get(p + "values"));
    for (double& v : params.tensor(view)) {
      if (!(in >> v)) throw ParseError(path + ": tensor " + view.name + " is short");
    }
    double extra;
    if (in >> extra) throw ParseError(path + ": tensor " + view.name + " has extra values");
  }
  return params;
}

}  // namespace fairdp::nn
