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

#include "spse/app/pipeline.h"

#include <cmath>
#include <filesystem>
#include <unistd.h>

#include "spse/audio/wav.h"
#include "spse/error.h"
#include "spse/eval/metrics.h"
#include "spse/model/checkpoint.h"
#include "spse/train/trainer.h"

namespace spse::app {

namespace fs = std::filesystem;

std::vector<train::Stage> StagesFor(const model::ModelConfig& cfg) {
  if (!cfg.use_harmonic_compensation) return {train::Stage::kPl};
  return {train::Stage::kPl, train::Stage::kPitch, train::Stage::kHc};
}

std::set<train::Stage> TrainStages(model::SpeechEnhancer& enhancer,
                                   const train::TrainConfig& cfg,
                                   const std::vector<data::Example>& examples,
                                   std::set<train::Stage> completed, std::ostream* log,
                                   const std::string& checkpoint_dir) {
  for (train::Stage stage : StagesFor(enhancer.config())) {
    if (completed.count(stage)) continue;
    train::Trainer trainer(enhancer, cfg, stage, examples, completed);
    trainer.Run(log, checkpoint_dir);
    completed = trainer.completed();
  }
  return completed;
}

LoadedModel LoadModel(const std::string& checkpoint_path) {
  const auto ckpt = model::ReadCheckpoint(checkpoint_path);
  LoadedModel out;
  out.enhancer = std::make_unique<model::SpeechEnhancer>(train::CheckpointModelConfig(ckpt), 0);
  model::ImportParameters(out.enhancer->params(), ckpt, /*require_all=*/true);
  out.completed = train::CompletedStages(ckpt);
  return out;
}

eval::UtteranceScore ScoreUtterance(const std::string& id, const std::string& system,
                                    double snr_in_db, const audio::Waveform& estimate,
                                    const audio::Waveform& reference,
                                    const std::vector<eval::PluginMetric>& plugins,
                                    std::ostream* warn) {
  if (estimate.size() != reference.size())
    throw DataError(id + ": " + std::to_string(estimate.size()) + " samples against a " +
                    std::to_string(reference.size()) + "-sample reference");
  eval::UtteranceScore score{id, system, snr_in_db, {}};
  score.metrics["sdr"] = eval::Sdr(estimate.samples, reference.samples);
  try {
    score.metrics["stoi"] = eval::Stoi(estimate.samples, reference.samples,
                                       reference.sample_rate_hz);
  } catch (const DataError& e) {
    if (warn != nullptr) *warn << id << ": no stoi: " << e.what() << '\n';
  }
  if (plugins.empty()) return score;
  const fs::path dir = fs::temp_directory_path() /
                       ("spse-plugin-" + std::to_string(::getpid()));
  fs::create_directories(dir);
  const std::string ref = (dir / "ref.wav").string();
  const std::string est = (dir / "est.wav").string();
  audio::WriteWav(ref, reference);
  audio::WriteWav(est, estimate);
  for (const auto& p : plugins) score.metrics[p.name] = eval::RunPlugin(p, ref, est);
  fs::remove_all(dir);
  return score;
}

void RequireFinite(const audio::Waveform& w, const std::string& what) {
  for (double v : w.samples)
    if (!std::isfinite(v)) throw NumericError("non-finite sample in " + what);
}

}  // namespace spse::app
