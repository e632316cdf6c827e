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

#ifndef SPSE_TRAIN_STAGE_H_
#define SPSE_TRAIN_STAGE_H_

#include <map>
#include <set>
#include <string>

#include "spse/model/config.h"
#include "spse/nn/parameter_set.h"

namespace spse::train {

enum class Stage { kPl, kPitch, kHc };

// "pl", "pitch", "hc".
std::string StageName(Stage stage);
// Throws ConfigError for anything else.
Stage ParseStage(const std::string& name);

// Groups the stage updates. PL trains the whole progressive model, PITCH only
// the pitch estimator, HC the mask module and the last SE block.
std::set<std::string> LearnableGroups(Stage stage, const model::ModelConfig& cfg);

// Stages whose weights must already be trained before `stage` starts.
std::set<Stage> Prerequisites(Stage stage);

// True exactly on `learnable`, false on every other group of ps. Throws
// ConfigError when a learnable group does not exist in ps.
std::map<std::string, bool> TrainableMask(const std::set<std::string>& learnable,
                                          const nn::ParameterSet& ps);

// Applies TrainableMask to ps and returns it.
std::map<std::string, bool> FreezeForStage(Stage stage, const model::ModelConfig& cfg,
                                           nn::ParameterSet& ps);

}  // namespace spse::train

#endif  // SPSE_TRAIN_STAGE_H_
