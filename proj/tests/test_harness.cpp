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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "fairdp/errors.hpp"
#include "fairdp/harness.hpp"
#include "fairdp/train.hpp"
#include "support/synthetic_adult.hpp"

using namespace fairdp;
using namespace fairdp::harness;

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Hand-built record for report tests; private models get plausible
// mechanism fields, threshold models a policy-free layout.
RunRecord make_record(ModelKind model, double eps, double delta, int64_t seed, double acc,
                      double rd) {
  RunRecord r;
  r.model = model;
  r.epsilon = eps;
  r.delta = delta;
  r.seed = seed;
  r.accuracy = acc;
  r.risk_difference = rd;
  const bool priv = is_private(model);
  r.achieved_epsilon = priv ? eps * 0.97 : kNaN;
  r.noise_multiplier = priv ? 3.25 : kNaN;
  if (is_fair(model)) {
    r.has_policy = true;
    r.policy.tau = 0.5;
    r.policy.margin = 0.05;
  }
  r.wall_seconds = 0.125;
  return r;
}

struct SmallData {
  testsupport::TempDir dir;
  data::ProcessedDataset dataset;
  SmallData() {
    testsupport::write_synthetic_adult(dir.path(), {.train_rows = 320, .test_rows = 160});
    dataset = prepare_dataset(dir.str("adult.data"), dir.str("adult.test"), 0);
  }
};

ExperimentConfig fast_config() {
  ExperimentConfig config;
  config.train.epochs = 8;
  config.train.minibatch_size = 20;
  config.seed_count = 2;
  config.workers = 1;
  return config;
}

bool nan_equal(double a, double b) {
  return (std::isnan(a) && std::isnan(b)) || a == b;
}

}  // namespace

TEST_CASE("model names round-trip") {
  for (ModelKind kind : {ModelKind::kSnn, ModelKind::kFnn, ModelKind::kDpnn, ModelKind::kDpfnn}) {
    ModelKind parsed;
    REQUIRE(parse_model_kind(to_string(kind), parsed));
    CHECK(parsed == kind);
  }
  ModelKind ignored;
  CHECK(!parse_model_kind("resnet", ignored));
  CHECK(is_private(ModelKind::kDpnn));
  CHECK(is_private(ModelKind::kDpfnn));
  CHECK(!is_private(ModelKind::kSnn));
  CHECK(is_fair(ModelKind::kFnn));
  CHECK(is_fair(ModelKind::kDpfnn));
  CHECK(!is_fair(ModelKind::kDpnn));
}

TEST_CASE("derived seeds: reproducible, distinct streams, grid sensitivity") {
  const DerivedSeeds a = derive_seeds(ModelKind::kDpnn, 0.1, 1e-5, 3);
  const DerivedSeeds b = derive_seeds(ModelKind::kDpnn, 0.1, 1e-5, 3);
  CHECK(a.weights == b.weights);
  CHECK(a.shuffle == b.shuffle);
  CHECK(a.noise == b.noise);
  CHECK(a.weights != a.shuffle);
  CHECK(a.weights != a.noise);

  // Every cell coordinate moves the seeds.
  CHECK(derive_seeds(ModelKind::kDpnn, 1.0, 1e-5, 3).weights != a.weights);
  CHECK(derive_seeds(ModelKind::kDpnn, 0.1, 1e-4, 3).weights != a.weights);
  CHECK(derive_seeds(ModelKind::kDpnn, 0.1, 1e-5, 4).weights != a.weights);
  CHECK(derive_seeds(ModelKind::kDpfnn, 0.1, 1e-5, 3).weights != a.weights);

  // Non-private models ignore the grid coordinates entirely.
  const DerivedSeeds s1 = derive_seeds(ModelKind::kSnn, kNaN, kNaN, 3);
  const DerivedSeeds s2 = derive_seeds(ModelKind::kSnn, 10.0, 0.5, 3);
  CHECK(s1.weights == s2.weights);
  CHECK(s1.shuffle == s2.shuffle);
}

TEST_CASE("config validation") {
  ExperimentConfig config;
  CHECK_NOTHROW(validate_config(config));
  config.seed_count = 0;
  CHECK_THROWS_AS(validate_config(config), ContractViolation);
  config = ExperimentConfig{};
  config.epsilon_grid = {0.1, -1.0};
  CHECK_THROWS_AS(validate_config(config), ContractViolation);
  config = ExperimentConfig{};
  config.delta_grid = {0.5, 1.5};
  CHECK_THROWS_AS(validate_config(config), ContractViolation);
  config = ExperimentConfig{};
  config.models = {ModelKind::kSnn};
  config.epsilon_grid.clear();  // irrelevant without a private model
  CHECK_NOTHROW(validate_config(config));
  config.models.clear();
  CHECK_THROWS_AS(validate_config(config), ContractViolation);

  try {
    ExperimentConfig bad;
    bad.rd_bound = 0.0;
    validate_config(bad);
    FAIL("expected ContractViolation");
  } catch (const ContractViolation& e) {
    CHECK(std::string(e.what()).find("config:") == 0);
  }
}

TEST_CASE("published reference constants") {
  const BaselineConstants baselines = BaselineConstants::published();
  CHECK(baselines.neural[0].accuracy_percent.mean == 84.14);
  CHECK(baselines.neural[3].risk_difference.sd == 0.0020);
  CHECK(std::string(baselines.logistic[3].name) == "pflr-star");
  CHECK(baselines.logistic[3].risk_difference.mean == 0.0028);
  CHECK(std::string(baselines.equivalent_logistic(ModelKind::kSnn).name) == "lr");
  CHECK(std::string(baselines.equivalent_logistic(ModelKind::kFnn).name) == "fair-lr");
  CHECK(std::string(baselines.equivalent_logistic(ModelKind::kDpnn).name) == "priv-lr");
  CHECK(std::string(baselines.equivalent_logistic(ModelKind::kDpfnn).name) == "pflr-star");
  for (const PublishedSummary& s : baselines.neural) CHECK(s.accuracy_percent.n == 10);
}

TEST_CASE("pipeline: plain model on synthetic data") {
  const SmallData data;
  const ExperimentConfig config = fast_config();
  const RunRecord rec = run_pipeline(data.dataset, ModelKind::kSnn, 0.0, 0.0, 1, config);
  REQUIRE(rec.ok());
  CHECK(std::isnan(rec.epsilon));
  CHECK(std::isnan(rec.delta));
  CHECK(std::isnan(rec.achieved_epsilon));
  CHECK(std::isnan(rec.noise_multiplier));
  CHECK(!rec.has_policy);
  CHECK(rec.accuracy > 0.5);
  CHECK(rec.accuracy <= 1.0);
  CHECK(rec.risk_difference >= 0.0);
  CHECK(rec.risk_difference <= 1.0);
  CHECK(rec.wall_seconds > 0.0);

  // Bitwise reproducibility.
  const RunRecord again = run_pipeline(data.dataset, ModelKind::kSnn, 0.0, 0.0, 1, config);
  CHECK(again.accuracy == rec.accuracy);
  CHECK(again.risk_difference == rec.risk_difference);

  // Parity with a hand-rolled pipeline pins the seed wiring exactly.
  const DerivedSeeds seeds = derive_seeds(ModelKind::kSnn, kNaN, kNaN, 1);
  nn::TrainConfig tc = config.train;
  tc.weight_init_seed = seeds.weights;
  tc.shuffle_seed = seeds.shuffle;
  const std::vector<int64_t> train_rows = data.dataset.rows_with_tag(data::SplitTag::kTrain);
  const std::vector<int64_t> test_rows = data.dataset.rows_with_tag(data::SplitTag::kTest);
  const nn::TrainResult trained =
      nn::train(data.dataset.features, data.dataset.labels, train_rows, tc, nullptr, seeds.noise);
  const std::vector<double> probs =
      nn::predict_proba(trained.params, data.dataset.features, test_rows);
  std::vector<uint8_t> predicted(probs.size());
  std::vector<uint8_t> labels(probs.size());
  std::vector<uint8_t> groups(probs.size());
  for (size_t i = 0; i < probs.size(); ++i) {
    predicted[i] = probs[i] >= 0.5;
    labels[i] = data.dataset.labels[static_cast<size_t>(test_rows[i])];
    groups[i] = data.dataset.protected_attr[static_cast<size_t>(test_rows[i])];
  }
  CHECK(rec.accuracy == fairness::accuracy(predicted, labels));
  CHECK(rec.risk_difference == fairness::risk_difference(predicted, groups));
}

TEST_CASE("pipeline: fair and private variants") {
  const SmallData data;
  const ExperimentConfig config = fast_config();

  const RunRecord fair = run_pipeline(data.dataset, ModelKind::kFnn, 0.0, 0.0, 1, config);
  REQUIRE(fair.ok());
  CHECK(fair.has_policy);
  CHECK(fair.policy.tau > 0.0);
  CHECK(fair.policy.tau < 1.0);
  CHECK(fair.policy.margin >= 0.0);

  const RunRecord priv = run_pipeline(data.dataset, ModelKind::kDpnn, 10.0, 0.01, 1, config);
  REQUIRE(priv.ok());
  CHECK(priv.epsilon == 10.0);
  CHECK(priv.delta == 0.01);
  CHECK(priv.noise_multiplier > 0.0);
  CHECK(priv.achieved_epsilon <= 10.0);
  CHECK(!priv.has_policy);

  const RunRecord both = run_pipeline(data.dataset, ModelKind::kDpfnn, 10.0, 0.01, 1, config);
  REQUIRE(both.ok());
  CHECK(both.has_policy);
  CHECK(both.noise_multiplier > 0.0);
}

TEST_CASE("pipeline failures are recorded, not thrown") {
  const SmallData data;
  const ExperimentConfig config = fast_config();
  // An epsilon far below what the noise bracket can reach.
  const RunRecord rec = run_pipeline(data.dataset, ModelKind::kDpnn, 1e-9, 1e-12, 1, config);
  CHECK(!rec.ok());
  CHECK(!rec.error.empty());
  CHECK(std::isnan(rec.accuracy));
  CHECK(std::isnan(rec.risk_difference));
  CHECK(rec.epsilon == 1e-9);
  CHECK(rec.wall_seconds >= 0.0);
}

TEST_CASE("sweep: cell product, order, worker independence") {
  const SmallData data;
  ExperimentConfig config = fast_config();
  config.models = {ModelKind::kDpnn, ModelKind::kSnn, ModelKind::kDpnn};  // unsorted + duplicate
  config.epsilon_grid = {10.0, 100.0};
  config.delta_grid = {0.01};
  config.seed_count = 2;

  const std::vector<RunRecord> records = sweep(data.dataset, config);
  REQUIRE(records.size() == 2 + 2 * 1 * 2);  // snn seeds + dpnn grid x seeds

  CHECK(records[0].model == ModelKind::kSnn);
  CHECK(std::isnan(records[0].epsilon));
  CHECK(records[0].seed == 1);
  CHECK(records[1].seed == 2);
  CHECK(records[2].model == ModelKind::kDpnn);
  CHECK(records[2].epsilon == 10.0);
  CHECK(records[2].seed == 1);
  CHECK(records[4].epsilon == 100.0);

  for (const RunRecord& r : records) CHECK(r.ok());

  // A second pass on more workers produces the same metrics in the same
  // order.
  config.workers = 3;
  const std::vector<RunRecord> parallel = sweep(data.dataset, config);
  REQUIRE(parallel.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(parallel[i].model == records[i].model);
    CHECK(nan_equal(parallel[i].epsilon, records[i].epsilon));
    CHECK(parallel[i].seed == records[i].seed);
    CHECK(parallel[i].accuracy == records[i].accuracy);
    CHECK(parallel[i].risk_difference == records[i].risk_difference);
  }
}

TEST_CASE("records CSV round trip") {
  testsupport::TempDir dir;
  std::vector<RunRecord> records;
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 1, 0.8412345678901234, 0.13));
  records.push_back(make_record(ModelKind::kFnn, kNaN, kNaN, 2, 0.79, 0.055));
  records.push_back(make_record(ModelKind::kDpnn, 0.1, 1e-5, 3, 0.84, 0.14));
  RunRecord failed = make_record(ModelKind::kDpfnn, 1.0, 1e-4, 4, kNaN, kNaN);
  failed.error = "calibration failed, \"bracket\"\nexhausted";
  failed.has_policy = false;
  records.push_back(failed);

  const std::string path = dir.str("records.csv");
  write_records_csv(records, path);

  {
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header ==
          "model,epsilon,delta,seed,accuracy,risk_difference,achieved_epsilon,"
          "noise_multiplier,roc_tau,roc_margin,wall_seconds,error");
  }

  const std::vector<RunRecord> back = read_records_csv(path);
  REQUIRE(back.size() == records.size());
  for (size_t i = 0; i < records.size(); ++i) {
    CHECK(back[i].model == records[i].model);
    CHECK(nan_equal(back[i].epsilon, records[i].epsilon));
    CHECK(nan_equal(back[i].delta, records[i].delta));
    CHECK(back[i].seed == records[i].seed);
    CHECK(nan_equal(back[i].accuracy, records[i].accuracy));  // %.17g is exact
    CHECK(nan_equal(back[i].risk_difference, records[i].risk_difference));
    CHECK(nan_equal(back[i].achieved_epsilon, records[i].achieved_epsilon));
    CHECK(nan_equal(back[i].noise_multiplier, records[i].noise_multiplier));
    CHECK(back[i].has_policy == records[i].has_policy);
    if (records[i].has_policy) {
      CHECK(back[i].policy.tau == records[i].policy.tau);
      CHECK(back[i].policy.margin == records[i].policy.margin);
    }
    CHECK(back[i].wall_seconds == 0.125);  // three decimals survive exactly
  }
  // Newlines are flattened before quoting; the rest of the text survives.
  CHECK(back[3].error == "calibration failed, \"bracket\";exhausted");

  CHECK_THROWS_AS(read_records_csv(dir.str("missing.csv")), IoError);
  {
    std::ofstream bad(dir.str("bad.csv"));
    bad << "not,the,header\n";
  }
  CHECK_THROWS_AS(read_records_csv(dir.str("bad.csv")), ParseError);
  {
    std::ofstream bad(dir.str("short.csv"));
    bad << "model,epsilon,delta,seed,accuracy,risk_difference,achieved_epsilon,"
           "noise_multiplier,roc_tau,roc_margin,wall_seconds,error\n";
    bad << "snn,,,1,0.8\n";
  }
  CHECK_THROWS_AS(read_records_csv(dir.str("short.csv")), ParseError);
}

TEST_CASE("report: aggregation, verdicts and focal tests") {
  std::vector<RunRecord> records;
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 1, 0.80, 0.10));
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 2, 0.81, 0.12));
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 3, 0.82, 0.14));
  records.push_back(make_record(ModelKind::kFnn, kNaN, kNaN, 1, 0.77, 0.03));
  records.push_back(make_record(ModelKind::kFnn, kNaN, kNaN, 2, 0.78, 0.04));
  records.push_back(make_record(ModelKind::kFnn, kNaN, kNaN, 3, 0.79, 0.05));
  // One failed run must not contaminate the aggregates.
  RunRecord failed = make_record(ModelKind::kSnn, kNaN, kNaN, 4, kNaN, kNaN);
  failed.error = "boom";
  records.push_back(failed);

  const ReportTable report = build_report(records, BaselineConstants::published());
  CHECK(report.failed_runs == 1);
  REQUIRE(report.cells.size() == 2);

  const CellSummary& snn = report.cells[0];
  CHECK(snn.model == ModelKind::kSnn);
  CHECK(snn.accuracy_percent.n == 3);
  CHECK(snn.accuracy_percent.mean == doctest::Approx(81.0).epsilon(1e-12));
  CHECK(snn.risk_difference.mean == doctest::Approx(0.12).epsilon(1e-12));
  CHECK(snn.verdict == "unfair");
  const CellSummary& fnn = report.cells[1];
  CHECK(fnn.verdict == "fair (strict)");

  // Pairwise focal test equals a direct pooled t on the same summaries.
  REQUIRE(report.model_tests.size() == 1);
  const stats::TTestResult direct =
      stats::pooled_t_test(snn.accuracy_percent, fnn.accuracy_percent);
  CHECK(report.model_tests[0].left == "snn");
  CHECK(report.model_tests[0].right == "fnn");
  CHECK(report.model_tests[0].accuracy.t_statistic == direct.t_statistic);
  CHECK(report.model_tests[0].accuracy.p_value == direct.p_value);

  REQUIRE(report.baseline_tests.size() == 2);
  CHECK(report.baseline_tests[0].right == "lr");
  CHECK(report.baseline_tests[1].right == "fair-lr");

  // No private model, no regression.
  CHECK(report.regressions.empty());
}

TEST_CASE("report: verdict boundaries are inclusive") {
  // Equal replicate values make the cell mean land exactly on the
  // threshold, so this pins the <= comparison.
  std::vector<RunRecord> records;
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 1, 0.8, 0.05));
  records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 2, 0.8, 0.05));
  const ReportTable strict = build_report(records, BaselineConstants::published());
  CHECK(strict.cells[0].verdict == "fair (strict)");

  records[0].risk_difference = 0.1;
  records[1].risk_difference = 0.1;
  const ReportTable lenient = build_report(records, BaselineConstants::published());
  CHECK(lenient.cells[0].verdict == "fair (lenient)");
}

TEST_CASE("report: exact regression recovery on an additive grid") {
  // accuracy(%) = 70 + 5 * [eps == 1] + 1 * [delta == 0.01]; rd constant.
  std::vector<RunRecord> records;
  const double epsilons[] = {0.1, 1.0};
  const double deltas[] = {1e-5, 0.01};
  for (int ei = 0; ei < 2; ++ei)
    for (int di = 0; di < 2; ++di)
      for (int64_t seed = 1; seed <= 3; ++seed) {
        const double acc = (70.0 + 5.0 * ei + 1.0 * di) / 100.0;
        records.push_back(
            make_record(ModelKind::kDpnn, epsilons[ei], deltas[di], seed, acc, 0.05));
      }

  const ReportTable report =
      build_report(records, BaselineConstants::published(), 0.1, 1e-5);
  REQUIRE(report.regressions.size() == 1);
  const ModelRegression& reg = report.regressions[0];
  CHECK(reg.model == ModelKind::kDpnn);
  REQUIRE(reg.accuracy.coefficients.size() == 3);
  CHECK(reg.accuracy.coefficients[0] == doctest::Approx(70.0).epsilon(1e-9));
  CHECK(reg.accuracy.coefficients[1] == doctest::Approx(5.0).epsilon(1e-9));   // eps level 2
  CHECK(reg.accuracy.coefficients[2] == doctest::Approx(1.0).epsilon(1e-9));   // delta level 2
  CHECK(reg.accuracy.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(reg.accuracy.df_model == 2);
  CHECK(reg.accuracy.df_residual == 1);

  // The rd response is constant, so nothing is explained.
  CHECK(reg.risk_difference.r_squared == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(reg.risk_difference.p_value == doctest::Approx(1.0).epsilon(1e-9));

  // Focal pairwise set: only dpnn has (0.1, 1e-5); no pairs, one baseline.
  CHECK(report.model_tests.empty());
  REQUIRE(report.baseline_tests.size() == 1);
  CHECK(report.baseline_tests[0].left == "dpnn");
  CHECK(report.baseline_tests[0].right == "priv-lr");
}

TEST_CASE("report: error paths") {
  CHECK_THROWS_AS(build_report({}, BaselineConstants::published()), ReportError);

  // A cell with a single successful seed.
  std::vector<RunRecord> thin;
  thin.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, 1, 0.8, 0.1));
  try {
    build_report(thin, BaselineConstants::published());
    FAIL("expected ReportError");
  } catch (const ReportError& e) {
    CHECK(std::string(e.what()).find("snn") != std::string::npos);
  }

  // Incomplete epsilon x delta product.
  std::vector<RunRecord> holes;
  for (int64_t seed = 1; seed <= 2; ++seed) {
    holes.push_back(make_record(ModelKind::kDpnn, 0.1, 1e-5, seed, 0.8, 0.1));
    holes.push_back(make_record(ModelKind::kDpnn, 1.0, 1e-5, seed, 0.8, 0.1));
    holes.push_back(make_record(ModelKind::kDpnn, 0.1, 1e-4, seed, 0.8, 0.1));
  }
  try {
    build_report(holes, BaselineConstants::published());
    FAIL("expected ReportError");
  } catch (const ReportError& e) {
    const std::string what = e.what();
    CHECK(what.find("missing") != std::string::npos);
    CHECK(what.find("eps=1") != std::string::npos);
    CHECK(what.find("delta=0.0001") != std::string::npos);
  }

  // A single private cell is complete by itself: no error, no regression.
  std::vector<RunRecord> single;
  single.push_back(make_record(ModelKind::kDpnn, 0.1, 1e-5, 1, 0.8, 0.1));
  single.push_back(make_record(ModelKind::kDpnn, 0.1, 1e-5, 2, 0.8, 0.1));
  const ReportTable ok = build_report(single, BaselineConstants::published());
  CHECK(ok.regressions.empty());
  CHECK(ok.cells.size() == 1);
}

TEST_CASE("emit writes the three artifacts") {
  testsupport::TempDir dir;
  std::vector<RunRecord> records;
  for (int64_t seed = 1; seed <= 3; ++seed) {
    records.push_back(make_record(ModelKind::kSnn, kNaN, kNaN, seed,
                                  0.83 + 0.001 * static_cast<double>(seed),
                                  0.12 + 0.001 * static_cast<double>(seed)));
    records.push_back(make_record(ModelKind::kFnn, kNaN, kNaN, seed,
                                  0.78 + 0.002 * static_cast<double>(seed),
                                  0.04 + 0.001 * static_cast<double>(seed)));
  }
  const ReportTable report = build_report(records, BaselineConstants::published());
  const std::string out = (dir.path() / "report").string();
  emit(report, out);

  const std::vector<RunRecord> csv = read_records_csv(out + "/records.csv");
  CHECK(csv.size() == records.size());

  std::ifstream md(out + "/summary.md");
  REQUIRE(md.good());
  std::string text((std::istreambuf_iterator<char>(md)), std::istreambuf_iterator<char>());
  CHECK(text.find("# Benchmark summary") != std::string::npos);
  CHECK(text.find("| snn") != std::string::npos);
  CHECK(text.find("fair (strict)") != std::string::npos);
  CHECK(text.find("snn vs fnn") != std::string::npos);
  CHECK(text.find("vs lr") != std::string::npos);
  CHECK(text.find("83.") != std::string::npos);  // two-decimal percent scale

  std::ifstream rg(out + "/regression.txt");
  REQUIRE(rg.good());
  std::string rtext((std::istreambuf_iterator<char>(rg)), std::istreambuf_iterator<char>());
  CHECK(rtext.find("No regression") != std::string::npos);
}
