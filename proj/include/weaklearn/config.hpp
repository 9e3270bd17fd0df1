// Copyright 2026 The weaklearn Authors
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

#include <istream>
#include <map>
#include <optional>
#include <string>

namespace weaklearn {

/// Flat "section.key" -> value map read from a config file.
class Config {
 public:
  void set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool has(const std::string& key) const { return values_.count(key) > 0; }
  std::optional<std::string> get(const std::string& key) const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  int64_t get_int(const std::string& key, int64_t fallback) const;
  double get_double(const std::string& key, double fallback) const;
  bool get_bool(const std::string& key, bool fallback) const;

  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// `[section]` headers and `key = value` lines. Values may be quoted; `#`
/// starts a comment outside quotes.
Config parse_ini(std::istream& in);

/// Nested JSON objects flatten to dotted keys.
Config parse_json_config(std::istream& in);

/// Chooses the parser by extension (.json or anything else). Throws
/// kConfigNotFound when the file does not exist.
Config load_config(const std::string& path);

}  // namespace weaklearn
