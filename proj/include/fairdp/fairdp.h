/* Copyright 2026 The fairdp Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

/* C interface of the fairdp benchmark engine.
 *
 * Every function that can fail returns fdp_status; FDP_OK means success and
 * anything else leaves a message in fdp_last_error() (thread local). Handles
 * returned through out parameters are owned by the caller and released with
 * the matching _free function. Passing NULL where an argument is required
 * yields FDP_ERR_INVALID.
 */

#ifndef FAIRDP_FAIRDP_H_
#define FAIRDP_FAIRDP_H_

#include <stdint.h>

#if defined(FDP_BUILDING)
#define FDP_API __attribute__((visibility("default")))
#else
#define FDP_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum fdp_status {
  FDP_OK = 0,
  FDP_ERR_IO = 1,       /* unreadable or unwritable file */
  FDP_ERR_PARSE = 2,    /* malformed input text */
  FDP_ERR_INVALID = 3,  /* bad argument, configuration or report request */
  FDP_ERR_NUMERIC = 4,  /* calibration, degenerate data or metric failure */
  FDP_ERR_INTERNAL = 5  /* unexpected failure */
} fdp_status;

/* Message of the most recent failure on the calling thread; never NULL. */
FDP_API const char* fdp_last_error(void);

FDP_API const char* fdp_version(void);

/* ---- dataset ----------------------------------------------------------- */

typedef struct fdp_dataset fdp_dataset;

/* Parses the census train/test files, drops records with missing fields,
 * dummy-codes and normalizes, and splits train/validation by split_seed. */
FDP_API fdp_status fdp_dataset_load(const char* train_path, const char* test_path,
                                    int64_t split_seed, fdp_dataset** out);
FDP_API void fdp_dataset_free(fdp_dataset* dataset);

/* Any out pointer may be NULL when the caller does not need that value. */
FDP_API fdp_status fdp_dataset_counts(const fdp_dataset* dataset, int64_t* total_rows,
                                      int64_t* train_rows, int64_t* validation_rows,
                                      int64_t* test_rows);
FDP_API fdp_status fdp_dataset_group_stats(const fdp_dataset* dataset,
                                           double* majority_label_fraction,
                                           double* female_fraction,
                                           double* low_income_rate_female,
                                           double* low_income_rate_male);

/* Writes the encoded feature table plus a key-value schema sidecar. */
FDP_API fdp_status fdp_dataset_export(const fdp_dataset* dataset, const char* csv_path,
                                      const char* schema_path);

/* ---- privacy calibration ----------------------------------------------- */

/* Noise multiplier for the target (epsilon, delta) given the sampling
 * geometry: minibatch_size draws from train_rows, epochs passes. */
FDP_API fdp_status fdp_calibrate(double epsilon, double delta, int64_t minibatch_size,
                                 int64_t train_rows, int64_t epochs, double* noise_multiplier,
                                 double* achieved_epsilon);

/* ---- experiments -------------------------------------------------------- */

/* Zero-initialize ({0}) for the documented defaults; any zero / NULL field
 * keeps its default. */
typedef struct fdp_experiment_options {
  const char* models;         /* comma separated; default "snn,fnn,dpnn,dpfnn" */
  const double* epsilon_grid; /* default {0.1, 1, 10, 100} */
  int32_t epsilon_count;
  const double* delta_grid;   /* default {0.01, 0.001, 0.0001, 0.00001} */
  int32_t delta_count;
  int64_t base_seed;          /* default 1 */
  int64_t seed_count;         /* default 10 */
  int64_t epochs;             /* default 20 */
  int64_t minibatch_size;     /* default 20 */
  double clip_norm;           /* default 1.0 */
  double rd_bound;            /* default 0.05 */
  int64_t workers;            /* default: hardware concurrency */
} fdp_experiment_options;

typedef struct fdp_records fdp_records;

/* One (model, epsilon, delta, seed) run. A run whose training or evaluation
 * failed still returns FDP_OK; the failure is recorded in the record's error
 * field. epsilon/delta are ignored for snn and fnn. */
FDP_API fdp_status fdp_run(const fdp_dataset* dataset, const char* model, double epsilon,
                           double delta, int64_t seed, const fdp_experiment_options* options,
                           fdp_records** out);

/* Grid x seeds product for every selected model, on a bounded worker pool.
 * Records come back in (model, epsilon, delta, seed) order. */
FDP_API fdp_status fdp_sweep(const fdp_dataset* dataset, const fdp_experiment_options* options,
                             fdp_records** out);

FDP_API void fdp_records_free(fdp_records* records);
FDP_API int64_t fdp_records_count(const fdp_records* records);
FDP_API int64_t fdp_records_failed_count(const fdp_records* records);

/* Field view of one record. Strings stay valid until the handle is freed.
 * Absent numeric values (epsilon of a non-private model, metrics of a failed
 * run, policy fields of a threshold model) are NaN. */
typedef struct fdp_run_view {
  const char* model;
  double epsilon;
  double delta;
  int64_t seed;
  double accuracy;
  double risk_difference;
  double achieved_epsilon;
  double noise_multiplier;
  double roc_tau;
  double roc_margin;
  double wall_seconds;
  const char* error; /* empty string for a successful run */
} fdp_run_view;

FDP_API fdp_status fdp_records_get(const fdp_records* records, int64_t index, fdp_run_view* out);

/* records.csv round trip (documented 12-column header). */
FDP_API fdp_status fdp_records_save(const fdp_records* records, const char* path);
FDP_API fdp_status fdp_records_load(const char* path, fdp_records** out);

/* Builds the aggregate report and writes records.csv, summary.md and
 * regression.txt into out_dir. Pass 0 for the default focal cell
 * (epsilon 0.1, delta 1e-5). */
FDP_API fdp_status fdp_report(const fdp_records* records, double focal_epsilon,
                              double focal_delta, const char* out_dir);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* FAIRDP_FAIRDP_H_ */
