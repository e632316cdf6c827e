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

#ifndef SPSE_EVAL_PLUGIN_H_
#define SPSE_EVAL_PLUGIN_H_

#include <string>
#include <vector>

#include "spse/util/key_value.h"

namespace spse::eval {

// An external metric (PESQ and the like) run as a shell command. "{ref}"
// and "{est}" in the template are replaced by quoted WAV paths; the last
// number the command prints is the score.
struct PluginMetric {
  std::string name;
  std::string command;
};

// Every "eval.plugin.<name> = <command>" entry.
std::vector<PluginMetric> ReadPlugins(const KeyValueConfig& kv);

// Throws DataError when the command fails or prints no number.
double RunPlugin(const PluginMetric& plugin, const std::string& reference_wav,
                 const std::string& estimate_wav);

}  // namespace spse::eval

#endif  // SPSE_EVAL_PLUGIN_H_
