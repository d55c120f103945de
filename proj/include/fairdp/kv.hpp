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

#include <string>
#include <utility>
#include <vector>

namespace fairdp {

// Ordered `key = value` text document. Used for schema sidecars, policy
// files and other small reproducibility artifacts.
class KvDoc {
 public:
  void set(const std::string& key, const std::string& value);
  void set_double(const std::string& key, double value);  // round-trip exact
  void set_int(const std::string& key, int64_t value);

  bool has(const std::string& key) const;
  const std::string& get(const std::string& key) const;            // throws ParseError if absent
  double get_double(const std::string& key) const;
  int64_t get_int(const std::string& key) const;

  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

  std::string to_text() const;
  static KvDoc from_text(const std::string& text);

  void save(const std::string& path) const;
  static KvDoc load(const std::string& path);

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

std::string trim(const std::string& s);

}  // namespace fairdp
