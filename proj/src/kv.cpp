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

#include "fairdp/kv.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fairdp/errors.hpp"

namespace fairdp {

std::string trim(const std::string& s) {
  size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

void KvDoc::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : entries_) {
    if (k == key) {
      v = value;
      return;
    }
  }
  entries_.emplace_back(key, value);
}

void KvDoc::set_double(const std::string& key, double value) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  set(key, buf);
}

void KvDoc::set_int(const std::string& key, int64_t value) { set(key, std::to_string(value)); }

bool KvDoc::has(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return true;
  return false;
}

const std::string& KvDoc::get(const std::string& key) const {
  for (const auto& [k, v] : entries_)
    if (k == key) return v;
  throw ParseError("missing key: " + key);
}

double KvDoc::get_double(const std::string& key) const {
  const std::string& v = get(key);
  // from_chars instead of stod: stod rejects subnormals as out of range.
  const char* first = v.data();
  const char* last = v.data() + v.size();
  if (first != last && *first == '+') ++first;
  double d = 0.0;
  auto [ptr, ec] = std::from_chars(first, last, d);
  if (ec != std::errc() || ptr != last || first == last)
    throw ParseError("key " + key + ": not a number: '" + v + "'");
  return d;
}

int64_t KvDoc::get_int(const std::string& key) const {
  const std::string& v = get(key);
  try {
    size_t pos = 0;
    int64_t i = std::stoll(v, &pos);
    if (pos != v.size()) throw ParseError("trailing characters");
    return i;
  } catch (const std::exception&) {
    throw ParseError("key " + key + ": not an integer: '" + v + "'");
  }
}

std::string KvDoc::to_text() const {
  std::ostringstream out;
  for (const auto& [k, v] : entries_) out << k << " = " << v << "\n";
  return out.str();
}

KvDoc KvDoc::from_text(const std::string& text) {
  KvDoc doc;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    size_t eq = t.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) + ": expected 'key = value'");
    doc.entries_.emplace_back(trim(t.substr(0, eq)), trim(t.substr(eq + 1)));
  }
  return doc;
}

void KvDoc::save(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path);
  out << to_text();
  if (!out) throw IoError("write failed: " + path);
}

KvDoc KvDoc::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

}  // namespace fairdp
