// Copyright 2026 The spse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "spse/util/key_value.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "spse/error.h"

namespace spse {

namespace {

std::string Trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

template <typename T>
T ParseNumber(const std::string& key, const std::string& text) {
  T v{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || ptr != text.data() + text.size())
    throw ConfigError("bad value for " + key + ": '" + text + "'");
  return v;
}

}  // namespace

KeyValueConfig KeyValueConfig::Parse(const std::string& text) {
  KeyValueConfig cfg;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = Trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    cfg.values_[key] = Trim(line.substr(eq + 1));
  }
  return cfg;
}

KeyValueConfig KeyValueConfig::Load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return Parse(ss.str());
}

const std::string* KeyValueConfig::Lookup(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  used_.insert(key);
  return &it->second;
}

void KeyValueConfig::Get(const std::string& key, int& value) const {
  if (const auto* s = Lookup(key)) value = ParseNumber<int>(key, *s);
}
void KeyValueConfig::Get(const std::string& key, std::int64_t& value) const {
  if (const auto* s = Lookup(key)) value = ParseNumber<std::int64_t>(key, *s);
}
void KeyValueConfig::Get(const std::string& key, std::uint64_t& value) const {
  if (const auto* s = Lookup(key)) value = ParseNumber<std::uint64_t>(key, *s);
}
void KeyValueConfig::Get(const std::string& key, double& value) const {
  if (const auto* s = Lookup(key)) {
    // Allow fractions such as 1/3.
    const auto slash = s->find('/');
    if (slash != std::string::npos) {
      value = ParseNumber<double>(key, Trim(s->substr(0, slash))) /
              ParseNumber<double>(key, Trim(s->substr(slash + 1)));
    } else {
      value = ParseNumber<double>(key, *s);
    }
  }
}
void KeyValueConfig::Get(const std::string& key, bool& value) const {
  if (const auto* s = Lookup(key)) {
    if (*s == "true" || *s == "1" || *s == "yes") {
      value = true;
    } else if (*s == "false" || *s == "0" || *s == "no") {
      value = false;
    } else {
      throw ConfigError("bad boolean for " + key + ": '" + *s + "'");
    }
  }
}
void KeyValueConfig::Get(const std::string& key, std::string& value) const {
  if (const auto* s = Lookup(key)) value = *s;
}
void KeyValueConfig::Get(const std::string& key, std::vector<int>& value) const {
  if (const auto* s = Lookup(key)) {
    std::vector<int> out;
    std::stringstream ss(*s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(ParseNumber<int>(key, Trim(item)));
    value = std::move(out);
  }
}

std::vector<std::string> KeyValueConfig::UnusedKeys() const {
  std::vector<std::string> out;
  for (const auto& [k, v] : values_)
    if (!used_.count(k)) out.push_back(k);
  return out;
}

std::string KeyValueConfig::ToText() const {
  std::string out;
  for (const auto& [k, v] : values_) out += k + " = " + v + "\n";
  return out;
}

}  // namespace spse
