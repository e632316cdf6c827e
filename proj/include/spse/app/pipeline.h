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

#ifndef SPSE_APP_PIPELINE_H_
#define SPSE_APP_PIPELINE_H_

#include <cstdint>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "spse/app/run_config.h"
#include "spse/data/dataset.h"
#include "spse/eval/report.h"
#include "spse/model/enhancer.h"
#include "spse/train/stage.h"

namespace spse::app {

// Stages the model trains, in order: PL, then PITCH and HC when the model
// has harmonic compensation.
std::vector<train::Stage> StagesFor(const model::ModelConfig& cfg);

// Trains every stage of StagesFor(enhancer.config()) not yet in
// `completed`. Step records
// go to `log` and snapshots to <checkpoint_dir>/<stage>.ckpt when given.
// Returns the completed set.
std::set<train::Stage> TrainStages(model::SpeechEnhancer& enhancer,
                                   const train::TrainConfig& cfg,
                                   const std::vector<data::Example>& examples,
                                   std::set<train::Stage> completed,
                                   std::ostream* log = nullptr,
                                   const std::string& checkpoint_dir = "");

// Rebuilds an enhancer from a checkpoint's configuration and weights.
struct LoadedModel {
  std::unique_ptr<model::SpeechEnhancer> enhancer;
  std::set<train::Stage> completed;
};
LoadedModel LoadModel(const std::string& checkpoint_path);

// sdr, stoi and every plug-in metric of one estimate. STOI is left out,
// with a note on `warn`, when the utterance is too short for it.
eval::UtteranceScore ScoreUtterance(const std::string& id, const std::string& system,
                                    double snr_in_db, const audio::Waveform& estimate,
                                    const audio::Waveform& reference,
                                    const std::vector<eval::PluginMetric>& plugins,
                                    std::ostream* warn = nullptr);

// Throws NumericError naming `what` if any sample is not finite.
void RequireFinite(const audio::Waveform& w, const std::string& what);

}  // namespace spse::app

#endif  // SPSE_APP_PIPELINE_H_
