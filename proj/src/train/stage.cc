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

#include "spse/train/stage.h"

#include "spse/error.h"

namespace spse::train {

std::string StageName(Stage stage) {
  switch (stage) {
    case Stage::kPl: return "pl";
    case Stage::kPitch: return "pitch";
    case Stage::kHc: return "hc";
  }
  return "?";
}

Stage ParseStage(const std::string& name) {
  if (name == "pl") return Stage::kPl;
  if (name == "pitch") return Stage::kPitch;
  if (name == "hc") return Stage::kHc;
  throw ConfigError("unknown stage '" + name + "' (expected pl, pitch or hc)");
}

std::set<std::string> LearnableGroups(Stage stage, const model::ModelConfig& cfg) {
  switch (stage) {
    case Stage::kPitch:
      return {model::kPitchGroup};
    case Stage::kHc:
      return {model::kMaskGroup, model::BlockGroup(cfg.num_blocks() - 1)};
    case Stage::kPl:
      break;
  }
  std::set<std::string> groups = {model::kEncoderGroup};
  if (cfg.use_phase_encoder) groups.insert(model::kPhaseEncoderGroup);
  for (int i = 0; i < cfg.num_blocks(); ++i) groups.insert(model::BlockGroup(i));
  for (int k = 1; k <= cfg.num_blocks(); ++k)
    if (cfg.HasDecoder(k)) groups.insert(model::DecoderGroup(k));
  return groups;
}

std::set<Stage> Prerequisites(Stage stage) {
  switch (stage) {
    case Stage::kPl: return {};
    case Stage::kPitch: return {Stage::kPl};
    case Stage::kHc: return {Stage::kPl, Stage::kPitch};
  }
  return {};
}

std::map<std::string, bool> TrainableMask(const std::set<std::string>& learnable,
                                          const nn::ParameterSet& ps) {
  for (const auto& g : learnable)
    if (!ps.HasGroup(g)) throw ConfigError("no parameter group named " + g);
  std::map<std::string, bool> mask;
  for (const auto& g : ps.GroupNames()) mask[g] = learnable.count(g) > 0;
  return mask;
}

std::map<std::string, bool> FreezeForStage(Stage stage, const model::ModelConfig& cfg,
                                           nn::ParameterSet& ps) {
  auto mask = TrainableMask(LearnableGroups(stage, cfg), ps);
  for (const auto& [group, on] : mask) ps.SetTrainable(group, on);
  return mask;
}

}  // namespace spse::train
