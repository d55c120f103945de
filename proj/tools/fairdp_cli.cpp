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

// Batch front end over the C API. Exit codes: 0 success, 1 runtime or
// partial failure, 2 invalid configuration. Every flag can also come from an
// environment variable (FAIRDP_ prefix, dashes to underscores, upper case) or
// from a key = value config file passed with --config; command line beats
// environment beats config file.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fairdp/fairdp.h"

namespace {

struct DatasetHandle {
  fdp_dataset* ptr = nullptr;
  ~DatasetHandle() { fdp_dataset_free(ptr); }
};

struct RecordsHandle {
  fdp_records* ptr = nullptr;
  ~RecordsHandle() { fdp_records_free(ptr); }
};

int fail_with(fdp_status status) {
  std::cerr << "error: " << fdp_last_error() << "\n";
  return status == FDP_ERR_INVALID ? 2 : 1;
}

int load_dataset(const std::string& data_dir, int64_t split_seed, DatasetHandle& dataset) {
  const std::filesystem::path dir(data_dir);
  const fdp_status status = fdp_dataset_load((dir / "adult.data").string().c_str(),
                                             (dir / "adult.test").string().c_str(), split_seed,
                                             &dataset.ptr);
  return status == FDP_OK ? 0 : fail_with(status);
}

void print_record(const fdp_run_view& view) {
  const auto opt = [](double v) {
    if (std::isnan(v)) return std::string("-");
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  std::cout << "model=" << view.model << "\n";
  std::cout << "epsilon=" << opt(view.epsilon) << "\n";
  std::cout << "delta=" << opt(view.delta) << "\n";
  std::cout << "seed=" << view.seed << "\n";
  std::cout << "accuracy=" << opt(view.accuracy) << "\n";
  std::cout << "risk_difference=" << opt(view.risk_difference) << "\n";
  std::cout << "achieved_epsilon=" << opt(view.achieved_epsilon) << "\n";
  std::cout << "noise_multiplier=" << opt(view.noise_multiplier) << "\n";
  std::cout << "roc_tau=" << opt(view.roc_tau) << "\n";
  std::cout << "roc_margin=" << opt(view.roc_margin) << "\n";
  std::cout << "wall_seconds=" << opt(view.wall_seconds) << "\n";
  if (view.error[0]) std::cout << "error=" << view.error << "\n";
}

// Scalar knobs shared by run and sweep.
struct CommonOptions {
  std::string data_dir;
  int64_t split_seed = 0;
  int64_t base_seed = 1;
  int64_t epochs = 20;
  int64_t batch_size = 20;
  double clip_norm = 1.0;
  double rd_bound = 0.05;
  std::string out_dir;
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool out_required) {
  cmd->add_option("--data-dir", opts.data_dir,
                  "Directory containing adult.data and adult.test")
      ->envname("FAIRDP_DATA_DIR")
      ->required();
  cmd->add_option("--split-seed", opts.split_seed, "Train/validation shuffle seed")
      ->envname("FAIRDP_SPLIT_SEED");
  cmd->add_option("--base-seed", opts.base_seed, "First run seed")->envname("FAIRDP_BASE_SEED");
  cmd->add_option("--epochs", opts.epochs)->envname("FAIRDP_EPOCHS");
  cmd->add_option("--batch-size", opts.batch_size)->envname("FAIRDP_BATCH_SIZE");
  cmd->add_option("--clip-norm", opts.clip_norm, "Per-example gradient norm bound")
      ->envname("FAIRDP_CLIP_NORM");
  cmd->add_option("--rd-bound", opts.rd_bound, "Risk-difference target of the policy fit")
      ->envname("FAIRDP_RD_BOUND");
  auto* out = cmd->add_option("--out", opts.out_dir, "Output directory")->envname("FAIRDP_OUT");
  if (out_required) out->required();
}

fdp_experiment_options to_options(const CommonOptions& opts) {
  fdp_experiment_options options{};
  options.base_seed = opts.base_seed;
  options.epochs = opts.epochs;
  options.minibatch_size = opts.batch_size;
  options.clip_norm = opts.clip_norm;
  options.rd_bound = opts.rd_bound;
  return options;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fairdp: accuracy / fairness / privacy benchmark on census income data"};
  app.require_subcommand(1);
  app.set_version_flag("--version", fdp_version());
  // One config option on the root; keys live in a [subcommand] section.
  // Precedence: command line, then config file, then environment.
  app.set_config("--config", "",
                 "Key-value file; put options in a [subcommand] section")
      ->envname("FAIRDP_CONFIG");

  // prepare-data ----------------------------------------------------------
  auto* prep = app.add_subcommand("prepare-data",
                                  "Parse, clean, encode and split; print dataset statistics");
  prep->fallthrough();
  std::string prep_data_dir, prep_out;
  int64_t prep_split_seed = 0;
  prep->add_option("--data-dir", prep_data_dir, "Directory containing adult.data and adult.test")
      ->envname("FAIRDP_DATA_DIR")
      ->required();
  prep->add_option("--split-seed", prep_split_seed)->envname("FAIRDP_SPLIT_SEED");
  prep->add_option("--out", prep_out, "If set, write encoded.csv and schema.txt here")
      ->envname("FAIRDP_OUT");

  // calibrate --------------------------------------------------------------
  auto* cal = app.add_subcommand("calibrate",
                                 "Noise multiplier for a target (epsilon, delta)");
  cal->fallthrough();
  double cal_epsilon = 0, cal_delta = 0;
  int64_t cal_batch = 20, cal_rows = 0, cal_epochs = 20;
  cal->add_option("--epsilon", cal_epsilon)->envname("FAIRDP_EPSILON")->required();
  cal->add_option("--delta", cal_delta)->envname("FAIRDP_DELTA")->required();
  cal->add_option("--batch-size", cal_batch)->envname("FAIRDP_BATCH_SIZE");
  cal->add_option("--dataset-size", cal_rows, "Training rows")
      ->envname("FAIRDP_DATASET_SIZE")
      ->required();
  cal->add_option("--epochs", cal_epochs)->envname("FAIRDP_EPOCHS");

  // run ---------------------------------------------------------------------
  auto* run = app.add_subcommand("run", "One model on one cell (seed = --base-seed)");
  run->fallthrough();
  CommonOptions run_opts;
  std::string run_model;
  double run_epsilon = 0.1, run_delta = 1e-5;
  run->add_option("--model", run_model, "snn, fnn, dpnn or dpfnn")
      ->envname("FAIRDP_MODEL")
      ->required();
  run->add_option("--epsilon", run_epsilon, "Target epsilon (dpnn/dpfnn)")
      ->envname("FAIRDP_EPSILON");
  run->add_option("--delta", run_delta, "Target delta (dpnn/dpfnn)")->envname("FAIRDP_DELTA");
  add_common(run, run_opts, false);

  // sweep -------------------------------------------------------------------
  auto* sweep = app.add_subcommand("sweep", "Grid x seeds product plus the aggregate report");
  sweep->fallthrough();
  CommonOptions sweep_opts;
  std::vector<std::string> sweep_models = {"snn", "fnn", "dpnn", "dpfnn"};
  std::vector<double> sweep_epsilons = {0.1, 1.0, 10.0, 100.0};
  std::vector<double> sweep_deltas = {0.01, 0.001, 0.0001, 0.00001};
  int64_t sweep_seeds = 10, sweep_workers = 0;
  double sweep_focal_epsilon = 0.1, sweep_focal_delta = 1e-5;
  sweep->add_option("--model", sweep_models, "Models to run")
      ->envname("FAIRDP_MODEL")
      ->delimiter(',');
  sweep->add_option("--epsilon", sweep_epsilons, "Epsilon grid")
      ->envname("FAIRDP_EPSILON")
      ->delimiter(',');
  sweep->add_option("--delta", sweep_deltas, "Delta grid")
      ->envname("FAIRDP_DELTA")
      ->delimiter(',');
  sweep->add_option("--seeds", sweep_seeds, "Seeds per cell")->envname("FAIRDP_SEEDS");
  sweep->add_option("--workers", sweep_workers, "Worker threads (0 = hardware)")
      ->envname("FAIRDP_WORKERS");
  sweep->add_option("--focal-epsilon", sweep_focal_epsilon, "Report comparison cell")
      ->envname("FAIRDP_FOCAL_EPSILON");
  sweep->add_option("--focal-delta", sweep_focal_delta)->envname("FAIRDP_FOCAL_DELTA");
  add_common(sweep, sweep_opts, true);

  // report ------------------------------------------------------------------
  auto* rep = app.add_subcommand("report", "Aggregate a records.csv into summary tables");
  rep->fallthrough();
  std::string rep_records, rep_out;
  double rep_focal_epsilon = 0.1, rep_focal_delta = 1e-5;
  rep->add_option("--records", rep_records, "records.csv from run or sweep")
      ->envname("FAIRDP_RECORDS")
      ->required();
  rep->add_option("--out", rep_out, "Output directory")->envname("FAIRDP_OUT")->required();
  rep->add_option("--focal-epsilon", rep_focal_epsilon)->envname("FAIRDP_FOCAL_EPSILON");
  rep->add_option("--focal-delta", rep_focal_delta)->envname("FAIRDP_FOCAL_DELTA");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (prep->parsed()) {
    DatasetHandle dataset;
    if (int rc = load_dataset(prep_data_dir, prep_split_seed, dataset)) return rc;
    int64_t total = 0, train = 0, validation = 0, test = 0;
    fdp_status status = fdp_dataset_counts(dataset.ptr, &total, &train, &validation, &test);
    if (status != FDP_OK) return fail_with(status);
    double majority = 0, female = 0, low_f = 0, low_m = 0;
    status = fdp_dataset_group_stats(dataset.ptr, &majority, &female, &low_f, &low_m);
    if (status != FDP_OK) return fail_with(status);
    std::printf("total_rows=%lld\n", static_cast<long long>(total));
    std::printf("train_rows=%lld\n", static_cast<long long>(train));
    std::printf("validation_rows=%lld\n", static_cast<long long>(validation));
    std::printf("test_rows=%lld\n", static_cast<long long>(test));
    std::printf("majority_label_fraction=%.6f\n", majority);
    std::printf("female_fraction=%.6f\n", female);
    std::printf("low_income_rate_female=%.6f\n", low_f);
    std::printf("low_income_rate_male=%.6f\n", low_m);
    if (!prep_out.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(prep_out, ec);
      if (ec) {
        std::cerr << "error: cannot create " << prep_out << ": " << ec.message() << "\n";
        return 1;
      }
      const std::filesystem::path out(prep_out);
      status = fdp_dataset_export(dataset.ptr, (out / "encoded.csv").string().c_str(),
                                  (out / "schema.txt").string().c_str());
      if (status != FDP_OK) return fail_with(status);
    }
    return 0;
  }

  if (cal->parsed()) {
    double sigma = 0, achieved = 0;
    const fdp_status status =
        fdp_calibrate(cal_epsilon, cal_delta, cal_batch, cal_rows, cal_epochs, &sigma, &achieved);
    if (status != FDP_OK) return fail_with(status);
    std::printf("noise_multiplier=%.6f\n", sigma);
    std::printf("achieved_epsilon=%.6f\n", achieved);
    return 0;
  }

  if (run->parsed()) {
    DatasetHandle dataset;
    if (int rc = load_dataset(run_opts.data_dir, run_opts.split_seed, dataset)) return rc;
    const fdp_experiment_options options = to_options(run_opts);
    RecordsHandle records;
    fdp_status status = fdp_run(dataset.ptr, run_model.c_str(), run_epsilon, run_delta,
                                run_opts.base_seed, &options, &records.ptr);
    if (status != FDP_OK) return fail_with(status);
    fdp_run_view view{};
    status = fdp_records_get(records.ptr, 0, &view);
    if (status != FDP_OK) return fail_with(status);
    print_record(view);
    if (!run_opts.out_dir.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(run_opts.out_dir, ec);
      if (ec) {
        std::cerr << "error: cannot create " << run_opts.out_dir << ": " << ec.message() << "\n";
        return 1;
      }
      const std::filesystem::path out(run_opts.out_dir);
      status = fdp_records_save(records.ptr, (out / "records.csv").string().c_str());
      if (status != FDP_OK) return fail_with(status);
    }
    return view.error[0] ? 1 : 0;
  }

  if (sweep->parsed()) {
    DatasetHandle dataset;
    if (int rc = load_dataset(sweep_opts.data_dir, sweep_opts.split_seed, dataset)) return rc;
    fdp_experiment_options options = to_options(sweep_opts);
    std::string model_list;
    for (const std::string& m : sweep_models) {
      if (!model_list.empty()) model_list += ',';
      model_list += m;
    }
    options.models = model_list.c_str();
    options.epsilon_grid = sweep_epsilons.data();
    options.epsilon_count = static_cast<int32_t>(sweep_epsilons.size());
    options.delta_grid = sweep_deltas.data();
    options.delta_count = static_cast<int32_t>(sweep_deltas.size());
    options.seed_count = sweep_seeds;
    options.workers = sweep_workers;

    RecordsHandle records;
    fdp_status status = fdp_sweep(dataset.ptr, &options, &records.ptr);
    if (status != FDP_OK) return fail_with(status);

    std::error_code ec;
    std::filesystem::create_directories(sweep_opts.out_dir, ec);
    if (ec) {
      std::cerr << "error: cannot create " << sweep_opts.out_dir << ": " << ec.message() << "\n";
      return 1;
    }
    const std::filesystem::path out(sweep_opts.out_dir);
    status = fdp_records_save(records.ptr, (out / "records.csv").string().c_str());
    if (status != FDP_OK) return fail_with(status);
    status = fdp_report(records.ptr, sweep_focal_epsilon, sweep_focal_delta,
                        sweep_opts.out_dir.c_str());
    if (status != FDP_OK) return fail_with(status);

    const long long failed = fdp_records_failed_count(records.ptr);
    std::printf("runs=%lld\n", static_cast<long long>(fdp_records_count(records.ptr)));
    std::printf("failed=%lld\n", failed);
    std::printf("out=%s\n", sweep_opts.out_dir.c_str());
    return failed > 0 ? 1 : 0;
  }

  if (rep->parsed()) {
    RecordsHandle records;
    fdp_status status = fdp_records_load(rep_records.c_str(), &records.ptr);
    if (status != FDP_OK) return fail_with(status);
    status = fdp_report(records.ptr, rep_focal_epsilon, rep_focal_delta, rep_out.c_str());
    if (status != FDP_OK) return fail_with(status);
    std::printf("out=%s\n", rep_out.c_str());
    return 0;
  }

  return 2;
}
