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

#include "fairdp/matrix.hpp"

namespace fairdp::data {

inline constexpr int kAttributeCount = 14;

// Census attribute names in file order. `education-num` and `fnlwgt` are
// numeric codes but are treated as continuous features; every string-valued
// attribute is categorical.
inline constexpr std::array<const char*, kAttributeCount> kAttributeNames = {
    "age",          "workclass",    "fnlwgt",         "education",
    "education-num", "marital-status", "occupation",  "relationship",
    "race",         "sex",          "capital-gain",   "capital-loss",
    "hours-per-week", "native-country"};

inline constexpr std::array<bool, kAttributeCount> kAttributeIsContinuous = {
    true,  false, true,  false, true,  false, false,
    false, false, false, true,  true,  true,  false};

inline constexpr const char* kMissingMarker = "?";
inline constexpr const char* kPositiveLabel = ">50K";
inline constexpr const char* kNegativeLabel = "<=50K";
inline constexpr const char* kPrivilegedSex = "Male";
inline constexpr const char* kUnprivilegedSex = "Female";

enum class SourceFile : uint8_t { kTrain = 0, kTest = 1 };

struct RawRecord {
  std::array<std::string, kAttributeCount> fields;
  std::string label;       // ">50K" or "<=50K", trailing period already stripped
  SourceFile source = SourceFile::kTrain;
};

// Reads one file in the census CSV dialect: comma separated, optional space
// after commas, lines starting with '|' are headers, labels may carry a
// trailing period. Throws ParseError (with the line number) on a line whose
// field count is not 15, IoError if the file cannot be read.
std::vector<RawRecord> parse_adult_file(const std::string& path, SourceFile source);

// Parses the train and test files and concatenates the records.
std::vector<RawRecord> parse_adult(const std::string& train_path, const std::string& test_path);

// Drops every record that contains the missing marker in any field; order of
// the survivors is preserved.
std::vector<RawRecord> listwise_delete(const std::vector<RawRecord>& records);

enum class SplitTag : uint8_t { kTrain = 0, kValidation = 1, kTest = 2 };

const char* to_string(SplitTag tag);

// Target fractions of the *total* data. The test file is the test split
// unchanged; the train file is shuffled with shuffle_seed and divided between
// train and validation at train_fraction : validation_fraction.
struct SplitSpec {
  double train_fraction = 0.534;
  double validation_fraction = 0.133;
  double test_fraction = 0.333;
  int64_t shuffle_seed = 0;
};

enum class EncodingKind : uint8_t { kContinuous = 0, kDummy = 1 };

struct ColumnSpec {
  std::string name;      // "age" or "workclass=Private"
  EncodingKind kind = EncodingKind::kContinuous;
  std::string source;    // originating attribute
  std::string category;  // dummy columns only
  double mean = 0.0;     // continuous columns only, train-split statistics
  double sd = 1.0;       // sample standard deviation (n-1)

  bool operator==(const ColumnSpec&) const = default;
};

struct ColumnSchema {
  std::vector<ColumnSpec> columns;
  bool operator==(const ColumnSchema&) const = default;
};

struct ProcessedDataset {
  Matrix features;                       // rows x encoded columns
  std::vector<uint8_t> labels;           // 1 = income > 50K
  std::vector<uint8_t> protected_attr;   // 1 = privileged group (male)
  std::vector<SplitTag> split_tags;
  ColumnSchema schema;

  int64_t rows() const { return features.rows(); }
  std::vector<int64_t> rows_with_tag(SplitTag tag) const;
};

// Builds the schema (dummy categories observed across all given records,
// z-normalization statistics from the train split only), assigns split
// membership, and encodes every record. Throws DegenerateColumnError when a
// continuous column has zero variance on the train split.
ProcessedDataset encode_and_split(const std::vector<RawRecord>& records, const SplitSpec& spec);

// Encodes one record against a fixed schema (normalization applied). Throws
// SchemaError on a category the schema has never seen.
std::vector<double> encode_row(const ColumnSchema& schema, const RawRecord& record);

struct GroupStats {
  double majority_label_fraction = 0.0;
  double female_fraction = 0.0;
  double low_income_rate_female = 0.0;
  double low_income_rate_male = 0.0;
};

// Fractions over all rows (splits combined). Throws UndefinedMetricError if
// either protected group is empty.
GroupStats group_statistics(const ProcessedDataset& dataset);

// Serialization for reproducibility audits: an encoded CSV (header = column
// names plus label/protected/split) and a key-value schema sidecar.
void export_csv(const ProcessedDataset& dataset, const std::string& csv_path,
                const std::string& schema_path);
void write_schema(const ColumnSchema& schema, const std::string& path);
ColumnSchema read_schema(const std::string& path);

}  // namespace fairdp::data
