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

#ifndef SPSE_UTIL_KEY_VALUE_H_
#define SPSE_UTIL_KEY_VALUE_H_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

namespace spse {

// Flat "key = value" text. '#' starts a comment; blank lines are ignored.
// Values are read through typed getters that record which keys were used,
// so leftovers can be reported as unknown.
class KeyValueConfig {
 public:
  KeyValueConfig() = default;
  explicit KeyValueConfig(std::map<std::string, std::string> values)
      : values_(std::move(values)) {}

  static KeyValueConfig Parse(const std::string& text);
  static KeyValueConfig Load(const std::string& path);

  void Set(const std::string& key, const std::string& value) { values_[key] = value; }
  bool Has(const std::string& key) const { return values_.count(key) > 0; }

  // Each getter leaves `value` untouched when the key is absent and throws
  // ConfigError when it does not parse.
  void Get(const std::string& key, int& value) const;
  void Get(const std::string& key, std::int64_t& value) const;
  void Get(const std::string& key, std::uint64_t& value) const;
  void Get(const std::string& key, double& value) const;
  void Get(const std::string& key, bool& value) const;
  void Get(const std::string& key, std::string& value) const;
  // Comma-separated integers.
  void Get(const std::string& key, std::vector<int>& value) const;

  std::vector<std::string> UnusedKeys() const;
  const std::map<std::string, std::string>& values() const { return values_; }
  std::string ToText() const;

 private:
  const std::string* Lookup(const std::string& key) const;

  std::map<std::string, std::string> values_;
  mutable std::set<std::string> used_;
};

}  // namespace spse

#endif  // SPSE_UTIL_KEY_VALUE_H_
