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

// Deterministic census-format fixture. Mimics the source dialect: comma plus
// space separators, '?' for missing fields, a '|' header line in the test
// file, trailing periods on test labels. The label depends on age, hours,
// education and sex so a small network can learn it and shows a genuine
// group disparity.

#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <stdexcept>
#include <string>

namespace testsupport {

struct SyntheticOptions {
  int train_rows = 400;
  int test_rows = 200;
  std::uint64_t seed = 7;
  double missing_rate = 0.04;  // per optional field, rows with '?' get dropped
};

struct SyntheticCounts {
  int data_rows = 0;
  int data_complete = 0;  // rows without any missing marker
  int test_rows = 0;
  int test_complete = 0;
};

inline SyntheticCounts write_synthetic_adult(const std::filesystem::path& dir,
                                             const SyntheticOptions& opts = {}) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> age_d(17, 90);
  std::uniform_int_distribution<int> fnlwgt_d(12285, 500000);
  std::uniform_int_distribution<int> educ_d(1, 16);
  std::uniform_int_distribution<int> hours_d(10, 70);

  const char* workclasses[] = {"Private", "Self-emp-not-inc", "Local-gov"};
  const char* educations[] = {"Bachelors", "HS-grad", "Masters", "Some-college"};
  const char* maritals[] = {"Married-civ-spouse", "Never-married", "Divorced"};
  const char* occupations[] = {"Tech-support", "Sales", "Exec-managerial", "Craft-repair"};
  const char* relationships[] = {"Husband", "Wife", "Not-in-family", "Own-child"};
  const char* races[] = {"White", "Black", "Asian-Pac-Islander"};
  const char* countries[] = {"United-States", "Mexico", "Philippines"};

  const auto pick = [&rng](const char* const* list, int n) {
    return list[static_cast<int>(rng() % static_cast<std::uint64_t>(n))];
  };

  const auto emit = [&](std::ofstream& out, bool test_style) {
    const int age = age_d(rng);
    const int fnlwgt = fnlwgt_d(rng);
    const int educ_num = educ_d(rng);
    const int hours = hours_d(rng);
    const bool male = unit(rng) < 0.67;
    const std::string marital = pick(maritals, 3);
    const bool married = marital == "Married-civ-spouse";
    const int gain = unit(rng) < 0.08 ? static_cast<int>(unit(rng) * 20000) : 0;
    const int loss = unit(rng) < 0.05 ? static_cast<int>(unit(rng) * 2000) : 0;

    std::string workclass = pick(workclasses, 3);
    std::string occupation = pick(occupations, 4);
    std::string country = pick(countries, 3);
    if (unit(rng) < opts.missing_rate) workclass = "?";
    if (unit(rng) < opts.missing_rate) occupation = "?";
    if (unit(rng) < opts.missing_rate) country = "?";
    const bool complete = workclass != "?" && occupation != "?" && country != "?";

    const double score = 0.05 * (age - 38) + 0.08 * (hours - 40) + 0.30 * (educ_num - 10) +
                         (male ? 1.1 : -0.7) + (married ? 0.7 : -0.3) + 0.0001 * gain;
    const double p = 1.0 / (1.0 + std::exp(-0.9 * score));
    const bool positive = unit(rng) < p;

    out << age << ", " << workclass << ", " << fnlwgt << ", " << pick(educations, 4) << ", "
        << educ_num << ", " << marital << ", " << occupation << ", " << pick(relationships, 4)
        << ", " << pick(races, 3) << ", " << (male ? "Male" : "Female") << ", " << gain << ", "
        << loss << ", " << hours << ", " << country << ", "
        << (positive ? ">50K" : "<=50K") << (test_style ? "." : "") << "\n";
    return complete;
  };

  SyntheticCounts counts;
  {
    std::ofstream out(dir / "adult.data");
    if (!out) throw std::runtime_error("cannot write synthetic adult.data");
    for (int i = 0; i < opts.train_rows; ++i) {
      counts.data_rows++;
      if (emit(out, false)) counts.data_complete++;
    }
  }
  {
    std::ofstream out(dir / "adult.test");
    if (!out) throw std::runtime_error("cannot write synthetic adult.test");
    out << "|1x3 Cross validator\n";
    for (int i = 0; i < opts.test_rows; ++i) {
      counts.test_rows++;
      if (emit(out, true)) counts.test_complete++;
    }
    out << "\n";
  }
  return counts;
}

class TempDir {
 public:
  TempDir() {
    const auto base = std::filesystem::temp_directory_path();
    std::random_device rd;
    for (int attempt = 0; attempt < 64; ++attempt) {
      auto candidate = base / ("fairdp_test_" + std::to_string(rd()));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path_ = std::move(candidate);
        return;
      }
    }
    throw std::runtime_error("cannot create a temporary directory");
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::string str(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace testsupport
