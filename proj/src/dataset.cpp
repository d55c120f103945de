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

#include "fairdp/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "fairdp/kv.hpp"
#include "fairdp/rng.hpp"

namespace fairdp::data {

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string current;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(trim(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(trim(current));
  return fields;
}

double parse_numeric_field(const std::string& value, const std::string& attribute) {
  try {
    size_t pos = 0;
    double d = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument("trailing");
    return d;
  } catch (const std::exception&) {
    throw ParseError("attribute '" + attribute + "': not numeric: '" + value + "'");
  }
}

}  // namespace

const char* to_string(SplitTag tag) {
  switch (tag) {
    case SplitTag::kTrain: return "train";
    case SplitTag::kValidation: return "validation";
    case SplitTag::kTest: return "test";
  }
  return "?";
}

std::vector<RawRecord> parse_adult_file(const std::string& path, SourceFile source) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::vector<RawRecord> records;
  std::string line;
  int64_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::string t = trim(line);
    if (t.empty()) continue;
    if (t[0] == '|') continue;  // header line in the test file
    std::vector<std::string> fields = split_csv_line(t);
    if (fields.size() != kAttributeCount + 1)
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected 15 fields, got " +
                       std::to_string(fields.size()));
    RawRecord rec;
    rec.source = source;
    for (int i = 0; i < kAttributeCount; ++i) rec.fields[i] = fields[i];
    rec.label = fields[kAttributeCount];
    if (!rec.label.empty() && rec.label.back() == '.') rec.label.pop_back();
    records.push_back(std::move(rec));
  }
  return records;
}

std::vector<RawRecord> parse_adult(const std::string& train_path, const std::string& test_path) {
  std::vector<RawRecord> records = parse_adult_file(train_path, SourceFile::kTrain);
  std::vector<RawRecord> test = parse_adult_file(test_path, SourceFile::kTest);
  records.insert(records.end(), std::make_move_iterator(test.begin()),
                 std::make_move_iterator(test.end()));
  return records;
}

std::vector<RawRecord> listwise_delete(const std::vector<RawRecord>& records) {
  std::vector<RawRecord> kept;
  kept.reserve(records.size());
  for (const RawRecord& rec : records) {
    bool missing = false;
    for (const std::string& f : rec.fields) {
      if (f == kMissingMarker) {
        missing = true;
        break;
      }
    }
    if (!missing) kept.push_back(rec);
  }
  return kept;
}

std::vector<int64_t> ProcessedDataset::rows_with_tag(SplitTag tag) const {
  std::vector<int64_t> idx;
  for (int64_t i = 0; i < static_cast<int64_t>(split_tags.size()); ++i)
    if (split_tags[i] == tag) idx.push_back(i);
  return idx;
}

std::vector<double> encode_row(const ColumnSchema& schema, const RawRecord& record) {
  // Categories present in the record but absent from the schema are an error;
  // detect them per attribute, not per column.
  std::map<std::string, bool> category_seen;  // attribute -> matched any dummy
  std::vector<double> out(schema.columns.size(), 0.0);
  for (size_t c = 0; c < schema.columns.size(); ++c) {
    const ColumnSpec& col = schema.columns[c];
    int attr = -1;
    for (int i = 0; i < kAttributeCount; ++i)
      if (col.source == kAttributeNames[i]) attr = i;
    if (attr < 0) throw SchemaError("schema column with unknown source: " + col.source);
    const std::string& value = record.fields[attr];
    if (col.kind == EncodingKind::kContinuous) {
      out[c] = (parse_numeric_field(value, col.source) - col.mean) / col.sd;
    } else {
      if (!category_seen.count(col.source)) category_seen[col.source] = false;
      if (value == col.category) {
        out[c] = 1.0;
        category_seen[col.source] = true;
      }
    }
  }
  for (const auto& [attr, matched] : category_seen) {
    if (!matched) {
      int idx = 0;
      for (int i = 0; i < kAttributeCount; ++i)
        if (attr == kAttributeNames[i]) idx = i;
      throw SchemaError("attribute '" + attr + "': category '" + record.fields[idx] +
                        "' not in schema");
    }
  }
  return out;
}

ProcessedDataset encode_and_split(const std::vector<RawRecord>& records, const SplitSpec& spec) {
  if (records.empty()) throw ContractViolation("encode_and_split: no records");
  double frac_sum = spec.train_fraction + spec.validation_fraction + spec.test_fraction;
  if (!(spec.train_fraction > 0) || !(spec.validation_fraction > 0) ||
      !(spec.test_fraction > 0) || std::abs(frac_sum - 1.0) > 1e-6)
    throw ContractViolation("encode_and_split: fractions must be positive and sum to 1");

  // Schema skeleton: dummy categories observed anywhere in the given records.
  ColumnSchema schema;
  for (int a = 0; a < kAttributeCount; ++a) {
    if (kAttributeIsContinuous[a]) {
      ColumnSpec col;
      col.name = kAttributeNames[a];
      col.kind = EncodingKind::kContinuous;
      col.source = kAttributeNames[a];
      schema.columns.push_back(std::move(col));
    } else {
      std::set<std::string> categories;
      for (const RawRecord& rec : records) categories.insert(rec.fields[a]);
      for (const std::string& cat : categories) {
        ColumnSpec col;
        col.name = std::string(kAttributeNames[a]) + "=" + cat;
        col.kind = EncodingKind::kDummy;
        col.source = kAttributeNames[a];
        col.category = cat;
        schema.columns.push_back(std::move(col));
      }
    }
  }

  // Split membership. Test-file rows form the test split; train-file rows are
  // shuffled by seed and divided train : validation.
  const int64_t n = static_cast<int64_t>(records.size());
  std::vector<SplitTag> tags(n, SplitTag::kTest);
  std::vector<int64_t> train_file_rows;
  for (int64_t i = 0; i < n; ++i)
    if (records[i].source == SourceFile::kTrain) train_file_rows.push_back(i);
  if (train_file_rows.empty()) throw ContractViolation("encode_and_split: no train-file records");

  std::vector<int64_t> shuffled = train_file_rows;
  std::mt19937_64 engine = make_engine(static_cast<uint64_t>(spec.shuffle_seed));
  std::shuffle(shuffled.begin(), shuffled.end(), engine);
  const double train_ratio =
      spec.train_fraction / (spec.train_fraction + spec.validation_fraction);
  const int64_t n_train = std::llround(static_cast<double>(shuffled.size()) * train_ratio);
  for (int64_t i = 0; i < static_cast<int64_t>(shuffled.size()); ++i)
    tags[shuffled[i]] = i < n_train ? SplitTag::kTrain : SplitTag::kValidation;

  // Normalization statistics from the train split only.
  for (ColumnSpec& col : schema.columns) {
    if (col.kind != EncodingKind::kContinuous) continue;
    int attr = 0;
    for (int i = 0; i < kAttributeCount; ++i)
      if (col.source == kAttributeNames[i]) attr = i;
    double sum = 0.0;
    int64_t count = 0;
    for (int64_t i = 0; i < n; ++i) {
      if (tags[i] != SplitTag::kTrain) continue;
      sum += parse_numeric_field(records[i].fields[attr], col.source);
      ++count;
    }
    if (count < 2) throw ContractViolation("encode_and_split: train split too small");
    const double mean = sum / static_cast<double>(count);
    double ss = 0.0;
    for (int64_t i = 0; i < n; ++i) {
      if (tags[i] != SplitTag::kTrain) continue;
      double d = parse_numeric_field(records[i].fields[attr], col.source) - mean;
      ss += d * d;
    }
    const double sd = std::sqrt(ss / static_cast<double>(count - 1));
    if (sd == 0.0) throw DegenerateColumnError("column '" + col.name + "' has zero train variance");
    col.mean = mean;
    col.sd = sd;
  }

  ProcessedDataset ds;
  ds.schema = schema;
  ds.split_tags = std::move(tags);
  ds.features = Matrix(n, static_cast<int64_t>(schema.columns.size()));
  ds.labels.resize(n);
  ds.protected_attr.resize(n);
  int sex_attr = 0;
  for (int i = 0; i < kAttributeCount; ++i)
    if (std::string("sex") == kAttributeNames[i]) sex_attr = i;
  for (int64_t i = 0; i < n; ++i) {
    std::vector<double> row = encode_row(schema, records[i]);
    std::copy(row.begin(), row.end(), ds.features.row(i).begin());
    if (records[i].label == kPositiveLabel)
      ds.labels[i] = 1;
    else if (records[i].label == kNegativeLabel)
      ds.labels[i] = 0;
    else
      throw ParseError("unknown label: '" + records[i].label + "'");
    const std::string& sex = records[i].fields[sex_attr];
    if (sex == kPrivilegedSex)
      ds.protected_attr[i] = 1;
    else if (sex == kUnprivilegedSex)
      ds.protected_attr[i] = 0;
    else
      throw ParseError("unknown sex value: '" + sex + "'");
  }
  return ds;
}

GroupStats group_statistics(const ProcessedDataset& dataset) {
  const int64_t n = dataset.rows();
  if (n == 0) throw ContractViolation("group_statistics: empty dataset");
  int64_t positives = 0, females = 0, female_low = 0, male_low = 0;
  for (int64_t i = 0; i < n; ++i) {
    positives += dataset.labels[i];
    if (dataset.protected_attr[i] == 0) {
      ++females;
      if (dataset.labels[i] == 0) ++female_low;
    } else if (dataset.labels[i] == 0) {
      ++male_low;
    }
  }
  const int64_t males = n - females;
  if (females == 0 || males == 0)
    throw UndefinedMetricError("group_statistics: a protected group is empty");
  GroupStats stats;
  const double pos_frac = static_cast<double>(positives) / static_cast<double>(n);
  stats.majority_label_fraction = std::max(pos_frac, 1.0 - pos_frac);
  stats.female_fraction = static_cast<double>(females) / static_cast<double>(n);
  stats.low_income_rate_female = static_cast<double>(female_low) / static_cast<double>(females);
  stats.low_income_rate_male = static_cast<double>(male_low) / static_cast<double>(males);
  return stats;
}

void write_schema(const ColumnSchema& schema, const std::string& path) {
  KvDoc doc;
  doc.set_int("columns", static_cast<int64_t>(schema.columns.size()));
  for (size_t i = 0; i < schema.columns.size(); ++i) {
    const ColumnSpec& col = schema.columns[i];
    const std::string p = "column." + std::to_string(i) + ".";
    doc.set(p + "name", col.name);
    doc.set(p + "kind", col.kind == EncodingKind::kContinuous ? "continuous" : "dummy");
    doc.set(p + "source", col.source);
    if (col.kind == EncodingKind::kDummy) {
      doc.set(p + "category", col.category);
    } else {
      doc.set_double(p + "mean", col.mean);
      doc.set_double(p + "sd", col.sd);
    }
  }
  doc.save(path);
}

ColumnSchema read_schema(const std::string& path) {
  KvDoc doc = KvDoc::load(path);
  ColumnSchema schema;
  const int64_t count = doc.get_int("columns");
  for (int64_t i = 0; i < count; ++i) {
    const std::string p = "column." + std::to_string(i) + ".";
    ColumnSpec col;
    col.name = doc.get(p + "name");
    const std::string kind = doc.get(p + "kind");
    if (kind == "continuous")
      col.kind = EncodingKind::kContinuous;
    else if (kind == "dummy")
      col.kind = EncodingKind::kDummy;
    else
      throw ParseError("bad column kind: " + kind);
    col.source = doc.get(p + "source");
    if (col.kind == EncodingKind::kDummy) {
      col.category = doc.get(p + "category");
    } else {
      col.mean = doc.get_double(p + "mean");
      col.sd = doc.get_double(p + "sd");
    }
    schema.columns.push_back(std::move(col));
  }
  return schema;
}

void export_csv(const ProcessedDataset& dataset, const std::string& csv_path,
                const std::string& schema_path) {
  std::ofstream out(csv_path);
  if (!out) throw IoError("cannot write " + csv_path);
  for (size_t c = 0; c < dataset.schema.columns.size(); ++c) {
    if (c) out << ',';
    out << dataset.schema.columns[c].name;
  }
  out << ",label,protected,split\n";
  char buf[40];
  for (int64_t i = 0; i < dataset.rows(); ++i) {
    std::span<const double> row = dataset.features.row(i);
    for (size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      std::snprintf(buf, sizeof(buf), "%.17g", row[c]);
      out << buf;
    }
    out << ',' << int(dataset.labels[i]) << ',' << int(dataset.protected_attr[i]) << ','
        << to_string(dataset.split_tags[i]) << "\n";
  }
  if (!out) throw IoError("write failed: " + csv_path);
  write_schema(dataset.schema, schema_path);
}

}  // namespace fairdp::data
