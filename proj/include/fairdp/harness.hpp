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
#include <string>
#include <vector>

#include "fairdp/dataset.hpp"
#include "fairdp/fairness.hpp"
#include "fairdp/mlp.hpp"
#include "fairdp/stats.hpp"

namespace fairdp::harness {

// snn: plain training, threshold at 0.5.
// fnn: plain training, reject-option policy fit on validation.
// dpnn: noisy clipped-gradient training, threshold at 0.5.
// dpfnn: noisy clipped-gradient training plus the reject-option policy.
enum class ModelKind : int { kSnn = 0, kFnn = 1, kDpnn = 2, kDpfnn = 3 };

const char* to_string(ModelKind kind);
bool parse_model_kind(const std::string& name, ModelKind& out);
bool is_private(ModelKind kind);
bool is_fair(ModelKind kind);

struct ExperimentConfig {
  std::string train_path;
  std::string test_path;
  int64_t split_seed = 0;
  std::vector<ModelKind> models = {ModelKind::kSnn, ModelKind::kFnn, ModelKind::kDpnn,
                                   ModelKind::kDpfnn};
  std::vector<double> epsilon_grid = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> delta_grid = {0.01, 0.001, 0.0001, 0.00001};
  int64_t base_seed = 1;
  int64_t seed_count = 10;  // seeds are base_seed .. base_seed + seed_count - 1
  nn::TrainConfig train;    // per-run weight/shuffle seeds are derived, not taken from here
  double clip_norm = 1.0;
  double rd_bound = 0.05;
  int64_t workers = 0;  // 0 = hardware concurrency
};

// Throws ContractViolation (message prefixed "config:") on an invalid field.
void validate_config(const ExperimentConfig& config);

struct RunRecord {
  ModelKind model = ModelKind::kSnn;
  double epsilon = 0.0;  // NaN for non-private models
  double delta = 0.0;    // NaN for non-private models
  int64_t seed = 0;
  double accuracy = 0.0;          // test split
  double risk_difference = 0.0;   // test split
  double achieved_epsilon = 0.0;  // NaN when not private
  double noise_multiplier = 0.0;  // NaN when not private
  bool has_policy = false;
  fairness::ROCPolicy policy;
  double wall_seconds = 0.0;
  std::string error;  // empty on success; failed runs are kept, never dropped

  bool ok() const { return error.empty(); }
};

// Every run is reproducible from its cell description alone: the weight,
// shuffle and noise seeds are hashed from (model, epsilon, delta, seed).
struct DerivedSeeds {
  uint64_t weights = 0;
  uint64_t shuffle = 0;
  uint64_t noise = 0;
};
DerivedSeeds derive_seeds(ModelKind model, double epsilon, double delta, int64_t seed);

// Externally published reference results (mean, sample SD, n = 10) used for
// comparison tables; they are constants, not reproduced by this code.
struct PublishedSummary {
  const char* name;
  stats::SampleSummary accuracy_percent;
  stats::SampleSummary risk_difference;
};

struct BaselineConstants {
  std::array<PublishedSummary, 4> neural;    // indexed by ModelKind
  std::array<PublishedSummary, 4> logistic;  // lr, priv-lr, fair-lr, pflr-star
  static BaselineConstants published();
  const PublishedSummary& equivalent_logistic(ModelKind kind) const;
};

// parse + listwise delete + encode/split with the default fractions.
data::ProcessedDataset prepare_dataset(const std::string& train_path,
                                       const std::string& test_path, int64_t split_seed);

// One (model, epsilon, delta, seed) cell. epsilon/delta are ignored for
// non-private models. Any failure is captured in RunRecord::error.
RunRecord run_pipeline(const data::ProcessedDataset& dataset, ModelKind model, double epsilon,
                       double delta, int64_t seed, const ExperimentConfig& config);

// Cartesian product of the applicable cells and seeds on a bounded worker
// pool, returned in (model, epsilon, delta, seed) order.
std::vector<RunRecord> sweep(const data::ProcessedDataset& dataset,
                             const ExperimentConfig& config);

struct CellSummary {
  ModelKind model;
  double epsilon;  // NaN for non-private models
  double delta;
  stats::SampleSummary accuracy_percent;
  stats::SampleSummary risk_difference;
  std::string verdict;  // "fair (strict)", "fair (lenient)" or "unfair"
};

struct PairwiseTest {
  std::string left, right;
  stats::TTestResult accuracy;         // on percent scale
  stats::TTestResult risk_difference;
};

struct ModelRegression {
  ModelKind model;
  stats::RegressionResult accuracy;         // cell-mean accuracy (percent) on
  stats::RegressionResult risk_difference;  // dummy-coded epsilon and delta
};

struct ReportTable {
  std::vector<RunRecord> records;  // normalized order, failures included
  std::vector<CellSummary> cells;
  std::vector<PairwiseTest> model_tests;     // among models with the focal cell
  std::vector<PairwiseTest> baseline_tests;  // focal cell vs published equivalent
  std::vector<ModelRegression> regressions;
  double focal_epsilon = 0.1;
  double focal_delta = 1e-5;
  fairness::FairnessThresholds thresholds;
  int64_t failed_runs = 0;
};

// Aggregates per-cell summaries and the statistical comparisons.
// ReportError when records are empty, when any present cell has fewer than
// two successful seeds (those cells are listed), or when a private model's
// cells do not form a complete epsilon x delta product (missing combinations
// listed). A private model with a single cell yields no regression; models
// without the focal cell are left out of the pairwise and baseline tests.
ReportTable build_report(const std::vector<RunRecord>& records,
                         const BaselineConstants& baselines, double focal_epsilon = 0.1,
                         double focal_delta = 1e-5,
                         fairness::FairnessThresholds thresholds = {});

// Writes records.csv, summary.md and regression.txt into out_dir
// (accuracy 2 decimals on the percent scale, risk difference 4 decimals,
// t statistics 1 decimal).
void emit(const ReportTable& report, const std::string& out_dir);

// records.csv header:
// model,epsilon,delta,seed,accuracy,risk_difference,achieved_epsilon,
// noise_multiplier,roc_tau,roc_margin,wall_seconds,error
// Floats are %.17g (empty for NaN); the error field is CSV-quoted.
void write_records_csv(const std::vector<RunRecord>& records, const std::string& path);
std::vector<RunRecord> read_records_csv(const std::string& path);

}  // namespace fairdp::harness
