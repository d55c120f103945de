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

#include "fairdp/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>
#include <thread>

#include "fairdp/dp.hpp"
#include "fairdp/errors.hpp"
#include "fairdp/kv.hpp"
#include "fairdp/rng.hpp"
#include "fairdp/train.hpp"

namespace fairdp::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// NaN grid coordinates (non-private models) sort and group as one value
// below every real epsilon/delta.
double grid_key(double x) { return std::isnan(x) ? -1.0 : x; }

bool record_less(const RunRecord& a, const RunRecord& b) {
  if (a.model != b.model) return static_cast<int>(a.model) < static_cast<int>(b.model);
  if (grid_key(a.epsilon) != grid_key(b.epsilon)) return grid_key(a.epsilon) < grid_key(b.epsilon);
  if (grid_key(a.delta) != grid_key(b.delta)) return grid_key(a.delta) < grid_key(b.delta);
  return a.seed < b.seed;
}

bool same_cell(const RunRecord& a, const RunRecord& b) {
  return a.model == b.model && grid_key(a.epsilon) == grid_key(b.epsilon) &&
         grid_key(a.delta) == grid_key(b.delta);
}

std::string cell_name(ModelKind model, double epsilon, double delta) {
  if (std::isnan(epsilon)) return to_string(model);
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%s(eps=%g, delta=%g)", to_string(model), epsilon, delta);
  return buf;
}

std::vector<uint8_t> gather_u8(const std::vector<uint8_t>& values,
                               std::span<const int64_t> rows) {
  std::vector<uint8_t> out;
  out.reserve(rows.size());
  for (int64_t r : rows) out.push_back(values[static_cast<size_t>(r)]);
  return out;
}

std::string format_opt(double v, const char* fmt = "%.17g") {
  if (std::isnan(v)) return "";
  char buf[48];
  std::snprintf(buf, sizeof(buf), fmt, v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

// Splits one CSV line honoring double-quoted fields.
std::vector<std::string> csv_split(const std::string& line, const std::string& path,
                                   int64_t lineno) {
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"' && current.empty()) {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (quoted)
    throw ParseError(path + ":" + std::to_string(lineno) + ": unterminated quoted field");
  fields.push_back(current);
  return fields;
}

double parse_opt(const std::string& field, const std::string& path, int64_t lineno) {
  if (field.empty()) return kNaN;
  // from_chars instead of stod so subnormal values written by %.17g read back.
  const char* first = field.data();
  const char* last = field.data() + field.size();
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last)
    throw ParseError(path + ":" + std::to_string(lineno) + ": bad numeric field '" + field + "'");
  return v;
}

std::string one_line(const std::string& s) {
  std::string out = s;
  for (char& c : out)
    if (c == '\n' || c == '\r') c = ';';
  return out;
}

constexpr const char* kRecordsHeader =
    "model,epsilon,delta,seed,accuracy,risk_difference,achieved_epsilon,noise_multiplier,"
    "roc_tau,roc_margin,wall_seconds,error";

}  // namespace

const char* to_string(ModelKind kind) {
  switch (kind) {
    case ModelKind::kSnn: return "snn";
    case ModelKind::kFnn: return "fnn";
    case ModelKind::kDpnn: return "dpnn";
    case ModelKind::kDpfnn: return "dpfnn";
  }
  return "?";
}

bool parse_model_kind(const std::string& name, ModelKind& out) {
  if (name == "snn") out = ModelKind::kSnn;
  else if (name == "fnn") out = ModelKind::kFnn;
  else if (name == "dpnn") out = ModelKind::kDpnn;
  else if (name == "dpfnn") out = ModelKind::kDpfnn;
  else return false;
  return true;
}

bool is_private(ModelKind kind) {
  return kind == ModelKind::kDpnn || kind == ModelKind::kDpfnn;
}

bool is_fair(ModelKind kind) {
  return kind == ModelKind::kFnn || kind == ModelKind::kDpfnn;
}

void validate_config(const ExperimentConfig& config) {
  if (config.models.empty()) throw ContractViolation("config: no models selected");
  if (config.seed_count < 1) throw ContractViolation("config: seed_count must be >= 1");
  if (config.train.epochs < 1) throw ContractViolation("config: epochs must be >= 1");
  if (config.train.minibatch_size < 1)
    throw ContractViolation("config: minibatch_size must be >= 1");
  if (!(config.clip_norm > 0.0)) throw ContractViolation("config: clip_norm must be > 0");
  if (!(config.rd_bound > 0.0)) throw ContractViolation("config: rd_bound must be > 0");
  if (config.workers < 0) throw ContractViolation("config: workers must be >= 0");
  bool any_private = false;
  for (ModelKind m : config.models) any_private = any_private || is_private(m);
  if (!any_private) return;
  if (config.epsilon_grid.empty() || config.delta_grid.empty())
    throw ContractViolation("config: private models need non-empty epsilon and delta grids");
  for (double e : config.epsilon_grid)
    if (!(e > 0.0)) throw ContractViolation("config: epsilon values must be > 0");
  for (double d : config.delta_grid)
    if (!(d > 0.0) || !(d < 1.0)) throw ContractViolation("config: delta values must be in (0,1)");
}

DerivedSeeds derive_seeds(ModelKind model, double epsilon, double delta, int64_t seed) {
  const bool priv = is_private(model);
  uint64_t h = splitmix64(static_cast<uint64_t>(seed));
  h = splitmix64(h ^ static_cast<uint64_t>(static_cast<int>(model)));
  h = splitmix64(h ^ (priv ? std::bit_cast<uint64_t>(epsilon) : 0ULL));
  h = splitmix64(h ^ (priv ? std::bit_cast<uint64_t>(delta) : 0ULL));
  DerivedSeeds seeds;
  seeds.weights = splitmix64(h ^ 1ULL);
  seeds.shuffle = splitmix64(h ^ 2ULL);
  seeds.noise = splitmix64(h ^ 3ULL);
  return seeds;
}

BaselineConstants BaselineConstants::published() {
  BaselineConstants c;
  c.neural = {{
      {"snn", {10, 84.14, 0.34}, {10, 0.1310, 0.0147}},
      {"fnn", {10, 79.25, 3.50}, {10, 0.0566, 0.0065}},
      {"dpnn", {10, 84.03, 0.05}, {10, 0.1355, 0.0024}},
      {"dpfnn", {10, 82.98, 0.19}, {10, 0.0475, 0.0020}},
  }};
  c.logistic = {{
      {"lr", {10, 83.80, 0.23}, {10, 0.1577, 0.0064}},
      {"priv-lr", {10, 62.63, 14.80}, {10, 0.0883, 0.0805}},
      {"fair-lr", {10, 77.39, 5.21}, {10, 0.0095, 0.0071}},
      {"pflr-star", {10, 74.91, 0.40}, {10, 0.0028, 0.0039}},
  }};
  return c;
}

const PublishedSummary& BaselineConstants::equivalent_logistic(ModelKind kind) const {
  switch (kind) {
    case ModelKind::kSnn: return logistic[0];
    case ModelKind::kFnn: return logistic[2];
    case ModelKind::kDpnn: return logistic[1];
    case ModelKind::kDpfnn: return logistic[3];
  }
  throw ContractViolation("equivalent_logistic: bad model kind");
}

data::ProcessedDataset prepare_dataset(const std::string& train_path,
                                       const std::string& test_path, int64_t split_seed) {
  std::vector<data::RawRecord> records = data::parse_adult(train_path, test_path);
  records = data::listwise_delete(records);
  data::SplitSpec spec;
  spec.shuffle_seed = split_seed;
  return data::encode_and_split(records, spec);
}

RunRecord run_pipeline(const data::ProcessedDataset& dataset, ModelKind model, double epsilon,
                       double delta, int64_t seed, const ExperimentConfig& config) {
  RunRecord rec;
  rec.model = model;
  rec.seed = seed;
  rec.epsilon = is_private(model) ? epsilon : kNaN;
  rec.delta = is_private(model) ? delta : kNaN;
  rec.achieved_epsilon = kNaN;
  rec.noise_multiplier = kNaN;
  rec.accuracy = kNaN;
  rec.risk_difference = kNaN;

  const auto start = std::chrono::steady_clock::now();
  try {
    const DerivedSeeds seeds = derive_seeds(model, rec.epsilon, rec.delta, seed);
    nn::TrainConfig train_config = config.train;
    train_config.weight_init_seed = seeds.weights;
    train_config.shuffle_seed = seeds.shuffle;

    const std::vector<int64_t> train_rows = dataset.rows_with_tag(data::SplitTag::kTrain);
    const std::vector<int64_t> test_rows = dataset.rows_with_tag(data::SplitTag::kTest);
    if (train_rows.empty() || test_rows.empty())
      throw ContractViolation("run_pipeline: empty train or test split");

    dp::PrivacySpec spec;
    const dp::PrivacySpec* privacy = nullptr;
    if (is_private(model)) {
      const double q = std::min(
          1.0, static_cast<double>(train_config.minibatch_size) /
                   static_cast<double>(train_rows.size()));
      const int64_t steps_per_epoch =
          (static_cast<int64_t>(train_rows.size()) + train_config.minibatch_size - 1) /
          train_config.minibatch_size;
      spec = dp::calibrate_noise_multiplier(epsilon, delta, q,
                                            train_config.epochs * steps_per_epoch,
                                            config.clip_norm);
      privacy = &spec;
      rec.noise_multiplier = spec.noise_multiplier;
      rec.achieved_epsilon = spec.achieved_epsilon;
    }

    const nn::TrainResult trained =
        nn::train(dataset.features, dataset.labels, train_rows, train_config, privacy,
                  seeds.noise);

    const std::vector<double> test_probs =
        nn::predict_proba(trained.params, dataset.features, test_rows);
    const std::vector<uint8_t> test_labels = gather_u8(dataset.labels, test_rows);
    const std::vector<uint8_t> test_protected = gather_u8(dataset.protected_attr, test_rows);

    std::vector<uint8_t> predicted;
    if (is_fair(model)) {
      const std::vector<int64_t> val_rows = dataset.rows_with_tag(data::SplitTag::kValidation);
      const std::vector<double> val_probs =
          nn::predict_proba(trained.params, dataset.features, val_rows);
      rec.policy = fairness::fit_roc(val_probs, gather_u8(dataset.labels, val_rows),
                                     gather_u8(dataset.protected_attr, val_rows),
                                     config.rd_bound);
      rec.has_policy = true;
      predicted = fairness::apply_roc(test_probs, test_protected, rec.policy);
    } else {
      predicted.resize(test_probs.size());
      for (size_t i = 0; i < test_probs.size(); ++i) predicted[i] = test_probs[i] >= 0.5;
    }
    rec.accuracy = fairness::accuracy(predicted, test_labels);
    rec.risk_difference = fairness::risk_difference(predicted, test_protected);
  } catch (const std::exception& e) {
    rec.error = one_line(e.what());
  } catch (...) {
    rec.error = "unknown failure";
  }
  rec.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

std::vector<RunRecord> sweep(const data::ProcessedDataset& dataset,
                             const ExperimentConfig& config) {
  validate_config(config);

  std::vector<ModelKind> models = config.models;
  std::sort(models.begin(), models.end(),
            [](ModelKind a, ModelKind b) { return static_cast<int>(a) < static_cast<int>(b); });
  models.erase(std::unique(models.begin(), models.end()), models.end());
  std::vector<double> epsilons = config.epsilon_grid;
  std::sort(epsilons.begin(), epsilons.end());
  std::vector<double> deltas = config.delta_grid;
  std::sort(deltas.begin(), deltas.end());

  struct Cell {
    ModelKind model;
    double epsilon;
    double delta;
    int64_t seed;
  };
  std::vector<Cell> cells;
  for (ModelKind model : models) {
    if (is_private(model)) {
      for (double e : epsilons)
        for (double d : deltas)
          for (int64_t s = 0; s < config.seed_count; ++s)
            cells.push_back({model, e, d, config.base_seed + s});
    } else {
      for (int64_t s = 0; s < config.seed_count; ++s)
        cells.push_back({model, kNaN, kNaN, config.base_seed + s});
    }
  }

  std::vector<RunRecord> results(cells.size());
  int64_t workers = config.workers > 0
                        ? config.workers
                        : static_cast<int64_t>(std::thread::hardware_concurrency());
  workers = std::max<int64_t>(1, std::min<int64_t>(workers, static_cast<int64_t>(cells.size())));

  std::atomic<size_t> next{0};
  const auto work = [&] {
    for (;;) {
      const size_t i = next.fetch_add(1);
      if (i >= cells.size()) return;
      const Cell& c = cells[i];
      results[i] = run_pipeline(dataset, c.model, c.epsilon, c.delta, c.seed, config);
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int64_t w = 0; w < workers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  return results;  // cell generation order is already (model, eps, delta, seed)
}

ReportTable build_report(const std::vector<RunRecord>& records,
                         const BaselineConstants& baselines, double focal_epsilon,
                         double focal_delta, fairness::FairnessThresholds thresholds) {
  if (records.empty()) throw ReportError("build_report: no records");

  ReportTable report;
  report.focal_epsilon = focal_epsilon;
  report.focal_delta = focal_delta;
  report.thresholds = thresholds;
  report.records = records;
  std::sort(report.records.begin(), report.records.end(), record_less);
  for (const RunRecord& r : report.records) report.failed_runs += !r.ok();

  // Per-cell aggregation over successful seeds.
  std::vector<std::string> thin_cells;
  for (size_t i = 0; i < report.records.size();) {
    size_t j = i;
    std::vector<double> acc, rd;
    while (j < report.records.size() && same_cell(report.records[i], report.records[j])) {
      if (report.records[j].ok()) {
        acc.push_back(report.records[j].accuracy * 100.0);
        rd.push_back(report.records[j].risk_difference);
      }
      ++j;
    }
    const RunRecord& head = report.records[i];
    if (acc.size() < 2) {
      thin_cells.push_back(cell_name(head.model, head.epsilon, head.delta));
    } else {
      CellSummary cell;
      cell.model = head.model;
      cell.epsilon = head.epsilon;
      cell.delta = head.delta;
      cell.accuracy_percent = stats::summarize(acc);
      cell.risk_difference = stats::summarize(rd);
      if (cell.risk_difference.mean <= thresholds.strict)
        cell.verdict = "fair (strict)";
      else if (cell.risk_difference.mean <= thresholds.lenient)
        cell.verdict = "fair (lenient)";
      else
        cell.verdict = "unfair";
      report.cells.push_back(std::move(cell));
    }
    i = j;
  }
  if (!thin_cells.empty()) {
    std::string msg = "build_report: cells with fewer than two successful seeds:";
    for (const std::string& c : thin_cells) msg += " " + c;
    throw ReportError(msg);
  }

  // Grid completeness per private model; regression needs the full product
  // with at least two levels of each factor.
  for (ModelKind model : {ModelKind::kDpnn, ModelKind::kDpfnn}) {
    std::set<double> eps_levels, delta_levels;
    std::set<std::pair<double, double>> present;
    for (const CellSummary& cell : report.cells) {
      if (cell.model != model) continue;
      eps_levels.insert(cell.epsilon);
      delta_levels.insert(cell.delta);
      present.insert({cell.epsilon, cell.delta});
    }
    if (present.empty()) continue;
    std::string missing;
    for (double e : eps_levels)
      for (double d : delta_levels)
        if (!present.count({e, d})) {
          char buf[64];
          std::snprintf(buf, sizeof(buf), " (eps=%g, delta=%g)", e, d);
          missing += buf;
        }
    if (!missing.empty())
      throw ReportError(std::string("build_report: ") + to_string(model) +
                        " grid has missing cells:" + missing);
    if (eps_levels.size() < 2 || delta_levels.size() < 2) continue;

    const std::vector<double> evs(eps_levels.begin(), eps_levels.end());
    const std::vector<double> dvs(delta_levels.begin(), delta_levels.end());
    const int64_t n = static_cast<int64_t>(evs.size() * dvs.size());
    const int64_t p = 1 + static_cast<int64_t>(evs.size() - 1 + dvs.size() - 1);
    Matrix design(n, p);
    std::vector<double> acc_response(static_cast<size_t>(n));
    std::vector<double> rd_response(static_cast<size_t>(n));
    int64_t row = 0;
    for (const CellSummary& cell : report.cells) {
      if (cell.model != model) continue;
      design(row, 0) = 1.0;
      for (size_t li = 1; li < evs.size(); ++li)
        design(row, static_cast<int64_t>(li)) = cell.epsilon == evs[li] ? 1.0 : 0.0;
      for (size_t li = 1; li < dvs.size(); ++li)
        design(row, static_cast<int64_t>(evs.size() - 1 + li)) =
            cell.delta == dvs[li] ? 1.0 : 0.0;
      acc_response[static_cast<size_t>(row)] = cell.accuracy_percent.mean;
      rd_response[static_cast<size_t>(row)] = cell.risk_difference.mean;
      ++row;
    }
    ModelRegression reg;
    reg.model = model;
    reg.accuracy = stats::ols_fit(design, acc_response);
    reg.risk_difference = stats::ols_fit(design, rd_response);
    report.regressions.push_back(std::move(reg));
  }

  // Focal-cell comparisons among the models that have that cell.
  std::vector<const CellSummary*> focal;
  for (const CellSummary& cell : report.cells) {
    const bool matches = is_private(cell.model)
                             ? cell.epsilon == focal_epsilon && cell.delta == focal_delta
                             : true;
    if (matches) focal.push_back(&cell);
  }
  for (size_t i = 0; i < focal.size(); ++i) {
    for (size_t j = i + 1; j < focal.size(); ++j) {
      PairwiseTest test;
      test.left = to_string(focal[i]->model);
      test.right = to_string(focal[j]->model);
      test.accuracy = stats::pooled_t_test(focal[i]->accuracy_percent, focal[j]->accuracy_percent);
      test.risk_difference =
          stats::pooled_t_test(focal[i]->risk_difference, focal[j]->risk_difference);
      report.model_tests.push_back(std::move(test));
    }
  }
  for (const CellSummary* cell : focal) {
    const PublishedSummary& baseline = baselines.equivalent_logistic(cell->model);
    PairwiseTest test;
    test.left = to_string(cell->model);
    test.right = baseline.name;
    test.accuracy = stats::pooled_t_test(cell->accuracy_percent, baseline.accuracy_percent);
    test.risk_difference = stats::pooled_t_test(cell->risk_difference, baseline.risk_difference);
    report.baseline_tests.push_back(std::move(test));
  }
  return report;
}

void write_records_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << kRecordsHeader << "\n";
  for (const RunRecord& r : records) {
    out << to_string(r.model) << ',' << format_opt(r.epsilon) << ',' << format_opt(r.delta) << ','
        << r.seed << ',' << format_opt(r.accuracy) << ',' << format_opt(r.risk_difference) << ','
        << format_opt(r.achieved_epsilon) << ',' << format_opt(r.noise_multiplier) << ','
        << (r.has_policy ? format_opt(r.policy.tau) : "") << ','
        << (r.has_policy ? format_opt(r.policy.margin) : "") << ','
        << format_opt(r.wall_seconds, "%.3f") << ',' << csv_quote(one_line(r.error)) << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<RunRecord> read_records_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::string line;
  int64_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(path + ": empty file");
  ++lineno;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kRecordsHeader) throw ParseError(path + ": unexpected header");

  std::vector<RunRecord> records;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = csv_split(line, path, lineno);
    if (f.size() != 12)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 12 fields, got " +
                       std::to_string(f.size()));
    RunRecord r;
    if (!parse_model_kind(f[0], r.model))
      throw ParseError(path + ":" + std::to_string(lineno) + ": unknown model '" + f[0] + "'");
    r.epsilon = parse_opt(f[1], path, lineno);
    r.delta = parse_opt(f[2], path, lineno);
    r.seed = static_cast<int64_t>(parse_opt(f[3], path, lineno));
    r.accuracy = parse_opt(f[4], path, lineno);
    r.risk_difference = parse_opt(f[5], path, lineno);
    r.achieved_epsilon = parse_opt(f[6], path, lineno);
    r.noise_multiplier = parse_opt(f[7], path, lineno);
    const double tau = parse_opt(f[8], path, lineno);
    const double margin = parse_opt(f[9], path, lineno);
    if (!std::isnan(tau)) {
      r.has_policy = true;
      r.policy.tau = tau;
      r.policy.margin = std::isnan(margin) ? 0.0 : margin;
    }
    r.wall_seconds = parse_opt(f[10], path, lineno);
    r.error = f[11];
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

std::string fmt(const char* format, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), format, v);
  return buf;
}

std::string grid_text(double v) { return std::isnan(v) ? "-" : fmt("%g", v); }

// "diff* (t)" with the difference at the metric's precision and the t
// statistic at one decimal; * marks p < 0.05.
std::string test_text(const stats::TTestResult& t, const char* diff_fmt) {
  std::string out = fmt(diff_fmt, t.mean_difference);
  if (t.significant_at_05) out += "*";
  out += " (";
  out += t.infinite_t ? (t.t_statistic > 0 ? "inf" : "-inf") : fmt("%.1f", t.t_statistic);
  out += ")";
  return out;
}

void write_aligned_table(std::ofstream& out, const std::vector<std::vector<std::string>>& rows) {
  std::vector<size_t> width;
  for (const auto& row : rows) {
    if (width.size() < row.size()) width.resize(row.size(), 0);
    for (size_t c = 0; c < row.size(); ++c) width[c] = std::max(width[c], row[c].size());
  }
  for (size_t r = 0; r < rows.size(); ++r) {
    out << "|";
    for (size_t c = 0; c < width.size(); ++c) {
      const std::string& cell = c < rows[r].size() ? rows[r][c] : std::string();
      out << " " << cell << std::string(width[c] - cell.size(), ' ') << " |";
    }
    out << "\n";
    if (r == 0) {
      out << "|";
      for (size_t c = 0; c < width.size(); ++c) out << std::string(width[c] + 2, '-') << "|";
      out << "\n";
    }
  }
}

}  // namespace

void emit(const ReportTable& report, const std::string& out_dir) {
  if (report.records.empty()) throw ReportError("emit: no records");
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create " + out_dir + ": " + ec.message());
  const std::filesystem::path dir(out_dir);

  write_records_csv(report.records, (dir / "records.csv").string());

  std::ofstream md(dir / "summary.md");
  if (!md) throw IoError("cannot write " + (dir / "summary.md").string());
  md << "# Benchmark summary\n\n";
  md << report.records.size() << " runs (" << report.failed_runs << " failed); "
     << "fairness thresholds: strict " << fmt("%.2f", report.thresholds.strict) << ", lenient "
     << fmt("%.2f", report.thresholds.lenient) << ".\n\n";

  md << "## Aggregated results (mean \xc2\xb1 sample SD over seeds)\n\n";
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"model", "epsilon", "delta", "accuracy (%)", "risk difference", "verdict"});
  for (const CellSummary& cell : report.cells) {
    rows.push_back({to_string(cell.model), grid_text(cell.epsilon), grid_text(cell.delta),
                    fmt("%.2f", cell.accuracy_percent.mean) + " \xc2\xb1 " +
                        fmt("%.2f", cell.accuracy_percent.sd),
                    fmt("%.4f", cell.risk_difference.mean) + " \xc2\xb1 " +
                        fmt("%.4f", cell.risk_difference.sd),
                    cell.verdict});
  }
  write_aligned_table(md, rows);

  md << "\n## Pairwise comparisons at (epsilon = " << grid_text(report.focal_epsilon)
     << ", delta = " << grid_text(report.focal_delta) << ")\n\n";
  md << "Entries are mean difference (left minus right) with the pooled t statistic in\n"
        "parentheses; * marks p < 0.05, df = n1 + n2 - 2.\n\n";
  if (report.model_tests.empty()) {
    md << "No two models share the focal cell.\n";
  } else {
    rows.clear();
    rows.push_back({"pair", "accuracy (pp)", "risk difference"});
    for (const PairwiseTest& t : report.model_tests)
      rows.push_back({t.left + " vs " + t.right, test_text(t.accuracy, "%.2f"),
                      test_text(t.risk_difference, "%.4f")});
    write_aligned_table(md, rows);
  }

  md << "\n## Comparisons against reference baselines\n\n";
  md << "Reference numbers are externally published logistic-regression results\n"
        "(constants in this benchmark, not reproduced by it).\n\n";
  if (report.baseline_tests.empty()) {
    md << "No model has the focal cell.\n";
  } else {
    rows.clear();
    rows.push_back({"pair", "accuracy (pp)", "risk difference"});
    for (const PairwiseTest& t : report.baseline_tests)
      rows.push_back({t.left + " vs " + t.right, test_text(t.accuracy, "%.2f"),
                      test_text(t.risk_difference, "%.4f")});
    write_aligned_table(md, rows);
  }
  if (!md) throw IoError("write failed: " + (dir / "summary.md").string());
  md.close();

  std::ofstream reg(dir / "regression.txt");
  if (!reg) throw IoError("cannot write " + (dir / "regression.txt").string());
  reg << "OLS of cell means on dummy-coded epsilon and delta levels (first level of\n"
         "each factor is the reference).\n";
  if (report.regressions.empty()) {
    reg << "\nNo regression: requires a complete grid with at least two epsilon and two\n"
           "delta levels.\n";
  }
  for (const ModelRegression& mr : report.regressions) {
    std::set<double> eps_levels, delta_levels;
    for (const CellSummary& cell : report.cells) {
      if (cell.model != mr.model) continue;
      eps_levels.insert(cell.epsilon);
      delta_levels.insert(cell.delta);
    }
    const std::vector<double> evs(eps_levels.begin(), eps_levels.end());
    const std::vector<double> dvs(delta_levels.begin(), delta_levels.end());
    const struct {
      const char* label;
      const stats::RegressionResult* r;
      const char* coef_fmt;
    } blocks[] = {{"accuracy (%)", &mr.accuracy, "%.2f"},
                  {"risk difference", &mr.risk_difference, "%.4f"}};
    for (const auto& block : blocks) {
      reg << "\n[" << to_string(mr.model) << "] " << block.label << "\n";
      size_t coef = 0;
      reg << "  intercept        " << fmt(block.coef_fmt, block.r->coefficients[coef++]) << "\n";
      for (size_t li = 1; li < evs.size(); ++li)
        reg << "  epsilon=" << fmt("%-8g", evs[li]) << " "
            << fmt(block.coef_fmt, block.r->coefficients[coef++]) << "\n";
      for (size_t li = 1; li < dvs.size(); ++li)
        reg << "  delta=" << fmt("%-10g", dvs[li]) << " "
            << fmt(block.coef_fmt, block.r->coefficients[coef++]) << "\n";
      reg << "  R^2 = " << fmt("%.4f", block.r->r_squared) << "\n";
      reg << "  F(" << block.r->df_model << ", " << block.r->df_residual << ") = "
          << fmt("%.2f", block.r->f_statistic) << "\n";
      reg << "  p = " << fmt("%.4f", block.r->p_value) << "\n";
    }
  }
  if (!reg) throw IoError("write failed: " + (dir / "regression.txt").string());
}

}  // namespace fairdp::harness
