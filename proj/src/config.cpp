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

#include "weaklearn/config.hpp"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "weaklearn/error.hpp"

namespace weaklearn {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::string strip_comment(const std::string& line) {
  char quote = 0;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quote) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '#' || c == ';') {
      return line.substr(0, i);
    }
  }
  return line;
}

void flatten(const nlohmann::json& j, const std::string& prefix, Config& out) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else if (it->is_string()) {
      out.set(key, it->get<std::string>());
    } else if (it->is_array()) {
      std::string joined;
      for (const auto& v : *it) joined += (joined.empty() ? "" : ",") + (v.is_string() ? v.get<std::string>() : v.dump());
      out.set(key, joined);
    } else {
      out.set(key, it->dump());
    }
  }
}

}  // namespace

std::optional<std::string> Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

int64_t Config::get_int(const std::string& key, int64_t fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size() || d != double(int64_t(d))) throw std::invalid_argument("not an integer");
    return int64_t(d);
  } catch (const std::exception&) {
    throw Error(ErrorKind::kConfig, "config key " + key + ": expected integer, got '" + *v + "'");
  }
}

double Config::get_double(const std::string& key, double fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  try {
    size_t used = 0;
    const double d = std::stod(*v, &used);
    if (used != v->size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorKind::kConfig, "config key " + key + ": expected number, got '" + *v + "'");
  }
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  const auto v = get(key);
  if (!v) return fallback;
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw Error(ErrorKind::kConfig, "config key " + key + ": expected boolean, got '" + *v + "'");
}

Config parse_ini(std::istream& in) {
  Config cfg;
  std::string section;
  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(strip_comment(raw));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw Error(ErrorKind::kConfig, "line " + std::to_string(line_no) + ": bad section");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::kConfig, "line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front()) {
      value = value.substr(1, value.size() - 2);
    } else if (value.size() >= 2 && value.front() == '[' && value.back() == ']') {
      std::string joined;
      for (char c : value.substr(1, value.size() - 2)) {
        if (c != '"' && c != '\'' && c != ' ') joined += c;
      }
      value = joined;
    }
    if (key.empty()) throw Error(ErrorKind::kConfig, "line " + std::to_string(line_no) + ": empty key");
    cfg.set(section.empty() ? key : section + "." + key, value);
  }
  return cfg;
}

Config parse_json_config(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::kConfig, std::string("invalid JSON config: ") + e.what());
  }
  if (!j.is_object()) throw Error(ErrorKind::kConfig, "JSON config must be an object");
  Config cfg;
  flatten(j, "", cfg);
  return cfg;
}

Config load_config(const std::string& path) {
  if (!std::filesystem::is_regular_file(path)) throw Error(ErrorKind::kConfigNotFound, "config not found: " + path);
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::kConfigNotFound, "config not found: " + path);
  return std::filesystem::path(path).extension() == ".json" ? parse_json_config(in) : parse_ini(in);
}

}  // namespace weaklearn
