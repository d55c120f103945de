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

#include "fairdp/fairdp.h"

#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "fairdp/dp.hpp"
#include "fairdp/errors.hpp"
#include "fairdp/harness.hpp"
#include "fairdp/kv.hpp"

namespace {

thread_local std::string g_last_error;

fdp_status fail(fdp_status status, const char* what) {
  g_last_error = what;
  return status;
}

template <typename Fn>
fdp_status guarded(Fn&& fn) {
  using namespace fairdp;
  try {
    return fn();
  } catch (const IoError& e) {
    return fail(FDP_ERR_IO, e.what());
  } catch (const ParseError& e) {
    return fail(FDP_ERR_PARSE, e.what());
  } catch (const SchemaError& e) {
    return fail(FDP_ERR_PARSE, e.what());
  } catch (const ReportError& e) {
    return fail(FDP_ERR_INVALID, e.what());
  } catch (const ContractViolation& e) {
    return fail(FDP_ERR_INVALID, e.what());
  } catch (const CalibrationError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const DegenerateColumnError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const UndefinedMetricError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const InfinitePrivacyLossError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const FitFailureError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const SingularDesignError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const NumericInputError& e) {
    return fail(FDP_ERR_NUMERIC, e.what());
  } catch (const std::exception& e) {
    return fail(FDP_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(FDP_ERR_INTERNAL, "unknown failure");
  }
}

fdp_status invalid(const char* what) { return fail(FDP_ERR_INVALID, what); }

// Resolves zero / NULL option fields to the library defaults.
fairdp::harness::ExperimentConfig to_config(const fdp_experiment_options* options) {
  fairdp::harness::ExperimentConfig config;
  if (!options) return config;
  if (options->models) {
    config.models.clear();
    std::istringstream in(options->models);
    std::string token;
    while (std::getline(in, token, ',')) {
      fairdp::harness::ModelKind kind;
      std::string name = fairdp::trim(token);
      if (name.empty()) continue;
      if (!fairdp::harness::parse_model_kind(name, kind))
        throw fairdp::ContractViolation("config: unknown model '" + name + "'");
      config.models.push_back(kind);
    }
  }
  if (options->epsilon_grid && options->epsilon_count > 0)
    config.epsilon_grid.assign(options->epsilon_grid,
                               options->epsilon_grid + options->epsilon_count);
  if (options->delta_grid && options->delta_count > 0)
    config.delta_grid.assign(options->delta_grid, options->delta_grid + options->delta_count);
  if (options->base_seed != 0) config.base_seed = options->base_seed;
  if (options->seed_count != 0) config.seed_count = options->seed_count;
  if (options->epochs != 0) config.train.epochs = options->epochs;
  if (options->minibatch_size != 0) config.train.minibatch_size = options->minibatch_size;
  if (options->clip_norm != 0.0) config.clip_norm = options->clip_norm;
  if (options->rd_bound != 0.0) config.rd_bound = options->rd_bound;
  if (options->workers != 0) config.workers = options->workers;
  return config;
}

}  // namespace

struct fdp_dataset {
  fairdp::data::ProcessedDataset data;
};

struct fdp_records {
  std::vector<fairdp::harness::RunRecord> records;
};

extern "C" {

const char* fdp_last_error(void) { return g_last_error.c_str(); }

const char* fdp_version(void) { return "0.1.0"; }

fdp_status fdp_dataset_load(const char* train_path, const char* test_path, int64_t split_seed,
                            fdp_dataset** out) {
  if (!train_path || !test_path || !out) return invalid("fdp_dataset_load: NULL argument");
  return guarded([&] {
    auto* handle = new fdp_dataset{
        fairdp::harness::prepare_dataset(train_path, test_path, split_seed)};
    *out = handle;
    return FDP_OK;
  });
}

void fdp_dataset_free(fdp_dataset* dataset) { delete dataset; }

fdp_status fdp_dataset_counts(const fdp_dataset* dataset, int64_t* total_rows,
                              int64_t* train_rows, int64_t* validation_rows,
                              int64_t* test_rows) {
  if (!dataset) return invalid("fdp_dataset_counts: NULL dataset");
  return guarded([&] {
    if (total_rows) *total_rows = dataset->data.rows();
    int64_t counts[3] = {0, 0, 0};
    for (fairdp::data::SplitTag tag : dataset->data.split_tags)
      counts[static_cast<int>(tag)] += 1;
    if (train_rows) *train_rows = counts[0];
    if (validation_rows) *validation_rows = counts[1];
    if (test_rows) *test_rows = counts[2];
    return FDP_OK;
  });
}

fdp_status fdp_dataset_group_stats(const fdp_dataset* dataset, double* majority_label_fraction,
                                   double* female_fraction, double* low_income_rate_female,
                                   double* low_income_rate_male) {
  if (!dataset) return invalid("fdp_dataset_group_stats: NULL dataset");
  return guarded([&] {
    const fairdp::data::GroupStats stats = fairdp::data::group_statistics(dataset->data);
    if (majority_label_fraction) *majority_label_fraction = stats.majority_label_fraction;
    if (female_fraction) *female_fraction = stats.female_fraction;
    if (low_income_rate_female) *low_income_rate_female = stats.low_income_rate_female;
    if (low_income_rate_male) *low_income_rate_male = stats.low_income_rate_male;
    return FDP_OK;
  });
}

fdp_status fdp_dataset_export(const fdp_dataset* dataset, const char* csv_path,
                              const char* schema_path) {
  if (!dataset || !csv_path || !schema_path) return invalid("fdp_dataset_export: NULL argument");
  return guarded([&] {
    fairdp::data::export_csv(dataset->data, csv_path, schema_path);
    return FDP_OK;
  });
}

fdp_status fdp_calibrate(double epsilon, double delta, int64_t minibatch_size,
                         int64_t train_rows, int64_t epochs, double* noise_multiplier,
                         double* achieved_epsilon) {
  if (!noise_multiplier) return invalid("fdp_calibrate: NULL noise_multiplier");
  if (minibatch_size < 1 || train_rows < 1 || epochs < 1)
    return invalid("fdp_calibrate: sizes must be >= 1");
  return guarded([&] {
    const double q =
        std::min(1.0, static_cast<double>(minibatch_size) / static_cast<double>(train_rows));
    const int64_t steps = epochs * ((train_rows + minibatch_size - 1) / minibatch_size);
    const fairdp::dp::PrivacySpec spec =
        fairdp::dp::calibrate_noise_multiplier(epsilon, delta, q, steps);
    *noise_multiplier = spec.noise_multiplier;
    if (achieved_epsilon) *achieved_epsilon = spec.achieved_epsilon;
    return FDP_OK;
  });
}

fdp_status fdp_run(const fdp_dataset* dataset, const char* model, double epsilon, double delta,
                   int64_t seed, const fdp_experiment_options* options, fdp_records** out) {
  if (!dataset || !model || !out) return invalid("fdp_run: NULL argument");
  fairdp::harness::ModelKind kind;
  if (!fairdp::harness::parse_model_kind(model, kind))
    return invalid("fdp_run: unknown model (expected snn, fnn, dpnn or dpfnn)");
  return guarded([&] {
    const fairdp::harness::ExperimentConfig config = to_config(options);
    auto* handle = new fdp_records;
    handle->records.push_back(
        fairdp::harness::run_pipeline(dataset->data, kind, epsilon, delta, seed, config));
    *out = handle;
    return FDP_OK;
  });
}

fdp_status fdp_sweep(const fdp_dataset* dataset, const fdp_experiment_options* options,
                     fdp_records** out) {
  if (!dataset || !out) return invalid("fdp_sweep: NULL argument");
  return guarded([&] {
    const fairdp::harness::ExperimentConfig config = to_config(options);
    auto* handle = new fdp_records{fairdp::harness::sweep(dataset->data, config)};
    *out = handle;
    return FDP_OK;
  });
}

void fdp_records_free(fdp_records* records) { delete records; }

int64_t fdp_records_count(const fdp_records* records) {
  return records ? static_cast<int64_t>(records->records.size()) : 0;
}

int64_t fdp_records_failed_count(const fdp_records* records) {
  if (!records) return 0;
  int64_t failed = 0;
  for (const auto& r : records->records) failed += !r.ok();
  return failed;
}

fdp_status fdp_records_get(const fdp_records* records, int64_t index, fdp_run_view* out) {
  if (!records || !out) return invalid("fdp_records_get: NULL argument");
  if (index < 0 || index >= static_cast<int64_t>(records->records.size()))
    return invalid("fdp_records_get: index out of range");
  const fairdp::harness::RunRecord& r = records->records[static_cast<size_t>(index)];
  constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
  out->model = fairdp::harness::to_string(r.model);
  out->epsilon = r.epsilon;
  out->delta = r.delta;
  out->seed = r.seed;
  out->accuracy = r.accuracy;
  out->risk_difference = r.risk_difference;
  out->achieved_epsilon = r.achieved_epsilon;
  out->noise_multiplier = r.noise_multiplier;
  out->roc_tau = r.has_policy ? r.policy.tau : kNaN;
  out->roc_margin = r.has_policy ? r.policy.margin : kNaN;
  out->wall_seconds = r.wall_seconds;
  out->error = r.error.c_str();
  return FDP_OK;
}

fdp_status fdp_records_save(const fdp_records* records, const char* path) {
  if (!records || !path) return invalid("fdp_records_save: NULL argument");
  return guarded([&] {
    fairdp::harness::write_records_csv(records->records, path);
    return FDP_OK;
  });
}

fdp_status fdp_records_load(const char* path, fdp_records** out) {
  if (!path || !out) return invalid("fdp_records_load: NULL argument");
  return guarded([&] {
    auto* handle = new fdp_records{fairdp::harness::read_records_csv(path)};
    *out = handle;
    return FDP_OK;
  });
}

fdp_status fdp_report(const fdp_records* records, double focal_epsilon, double focal_delta,
                      const char* out_dir) {
  if (!records || !out_dir) return invalid("fdp_report: NULL argument");
  return guarded([&] {
    const double eps = focal_epsilon > 0.0 ? focal_epsilon : 0.1;
    const double delta = focal_delta > 0.0 ? focal_delta : 1e-5;
    const fairdp::harness::ReportTable report = fairdp::harness::build_report(
        records->records, fairdp::harness::BaselineConstants::published(), eps, delta);
    fairdp::harness::emit(report, out_dir);
    return FDP_OK;
  });
}

}  // extern "C"
