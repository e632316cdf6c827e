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

#ifndef SPSE_APP_RUN_CONFIG_H_
#define SPSE_APP_RUN_CONFIG_H_

#include <cstdint>
#include <string>
#include <vector>

#include "spse/data/dataset.h"
#include "spse/eval/plugin.h"
#include "spse/model/config.h"
#include "spse/train/train_config.h"
#include "spse/util/key_value.h"

namespace spse::app {

// Everything one command needs, read from a flat key = value file.
struct RunConfig {
  model::ModelConfig model;
  train::TrainConfig train;
  data::SynthConfig synth;
  std::vector<eval::PluginMetric> plugins;
  std::uint64_t seed = 1;
  // Single-threaded pools everywhere.
  bool deterministic = false;

  // Unknown keys throw ConfigError.
  static RunConfig FromKeyValue(const KeyValueConfig& kv);
  static RunConfig Load(const std::string& path);
  // Replaces every seed with `seed`.
  void SetSeed(std::uint64_t seed);
  KeyValueConfig ToKeyValue() const;
};

}  // namespace spse::app

#endif  // SPSE_APP_RUN_CONFIG_H_
