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

#include "spse/eval/plugin.h"

#include <cstdio>
#include <sstream>

#include "spse/error.h"

namespace spse::eval {

namespace {

constexpr const char* kPrefix = "eval.plugin.";

std::string Quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

void ReplaceAll(std::string& s, const std::string& from, const std::string& to) {
  for (size_t pos = s.find(from); pos != std::string::npos; pos = s.find(from, pos + to.size()))
    s.replace(pos, from.size(), to);
}

}  // namespace

std::vector<PluginMetric> ReadPlugins(const KeyValueConfig& kv) {
  std::vector<PluginMetric> out;
  const std::string prefix = kPrefix;
  for (const auto& [key, value] : kv.values()) {
    if (key.rfind(prefix, 0) != 0) continue;
    std::string command;
    kv.Get(key, command);  // marks the key as used
    out.push_back({key.substr(prefix.size()), command});
  }
  return out;
}

double RunPlugin(const PluginMetric& plugin, const std::string& reference_wav,
                 const std::string& estimate_wav) {
  std::string cmd = plugin.command;
  ReplaceAll(cmd, "{ref}", Quote(reference_wav));
  ReplaceAll(cmd, "{est}", Quote(estimate_wav));
  FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) throw DataError("plug-in " + plugin.name + ": cannot start command");
  std::string output;
  char buf[4096];
  while (size_t n = std::fread(buf, 1, sizeof buf, pipe)) output.append(buf, n);
  const int status = pclose(pipe);
  if (status != 0)
    throw DataError("plug-in " + plugin.name + " exited with status " + std::to_string(status));
  std::istringstream words(output);
  std::string word;
  bool found = false;
  double score = 0.0;
  while (words >> word) {
    try {
      size_t used = 0;
      const double v = std::stod(word, &used);
      if (used == word.size()) {
        score = v;
        found = true;
      }
    } catch (const std::exception&) {
    }
  }
  if (!found) throw DataError("plug-in " + plugin.name + " printed no score");
  return score;
}

}  // namespace spse::eval
