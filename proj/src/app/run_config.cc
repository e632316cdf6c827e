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

#include "spse/app/run_config.h"

#include <sstream>

#include "spse/error.h"

namespace spse::app {

RunConfig RunConfig::FromKeyValue(const KeyValueConfig& kv) {
  RunConfig cfg;
  cfg.model.Read(kv);
  cfg.model.Validate();
  cfg.train.Read(kv);
  cfg.train.Validate();
  cfg.synth.num_intermediate = cfg.model.num_intermediate;
  cfg.synth.delta_snr_db = cfg.train.delta_snr_db;
  kv.Get("synth.workers", cfg.synth.workers);
  if (cfg.synth.workers < 1) throw ConfigError("synth.workers must be at least 1");
  cfg.plugins = eval::ReadPlugins(kv);
  std::uint64_t seed = cfg.train.seed;
  kv.Get("seed", seed);
  cfg.SetSeed(seed);
  kv.Get("deterministic", cfg.deterministic);
  const auto unused = kv.UnusedKeys();
  if (!unused.empty()) {
    std::ostringstream msg;
    msg << "unknown config key";
    for (const auto& k : unused) msg << ' ' << k;
    throw ConfigError(msg.str());
  }
  return cfg;
}

RunConfig RunConfig::Load(const std::string& path) {
  return FromKeyValue(KeyValueConfig::Load(path));
}

void RunConfig::SetSeed(std::uint64_t s) {
  seed = s;
  train.seed = s;
}

KeyValueConfig RunConfig::ToKeyValue() const {
  KeyValueConfig kv;
  model.Write(kv);
  train.Write(kv);
  kv.Set("synth.workers", std::to_string(synth.workers));
  for (const auto& p : plugins) kv.Set("eval.plugin." + p.name, p.command);
  kv.Set("seed", std::to_string(seed));
  kv.Set("deterministic", deterministic ? "true" : "false");
  return kv;
}

}  // namespace spse::app
