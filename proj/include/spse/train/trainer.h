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

#ifndef SPSE_TRAIN_TRAINER_H_
#define SPSE_TRAIN_TRAINER_H_

#include <cstdint>
#include <optional>
#include <ostream>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "spse/audio/stft.h"
#include "spse/data/dataset.h"
#include "spse/model/checkpoint.h"
#include "spse/model/enhancer.h"
#include "spse/pitch/comb_filter.h"
#include "spse/train/adam.h"
#include "spse/train/stage.h"
#include "spse/train/train_config.h"

namespace spse::train {

struct StepRecord {
  Stage stage = Stage::kPl;
  std::int64_t step = 0;  // 1-based index of the step just taken
  int epoch = 0;
  double lr = 0.0;
  double grad_norm = 0.0;  // before clipping
  std::vector<std::pair<std::string, double>> losses;  // "total" first

  double total() const { return losses.empty() ? 0.0 : losses.front().second; }
  nlohmann::json ToJson() const;
};

// Runs one training stage on an enhancer. Every parameter group outside the
// stage's learnable set is frozen for the lifetime of the trainer.
class Trainer {
 public:
  // `completed` lists stages already trained into the enhancer's weights.
  // Throws DataError when a prerequisite stage is missing and ConfigError
  // when the model lacks a group the stage trains.
  Trainer(model::SpeechEnhancer& enhancer, const TrainConfig& cfg, Stage stage,
          std::vector<data::Example> examples, std::set<Stage> completed = {});

  // One optimizer step on a freshly sampled batch. NumericError on a
  // non-finite loss or gradient.
  StepRecord Step();

  // Every later step reuses these whole utterances as its batch.
  void FixBatch(std::vector<int> example_indices);

  Stage stage() const { return stage_; }
  std::int64_t step() const { return step_; }
  std::int64_t total_steps() const { return cfg_.TotalSteps(stage_); }
  bool finished() const { return step_ >= total_steps(); }
  const std::set<Stage>& completed() const { return completed_; }

  // Parameters, optimizer moments and sampling state.
  model::Checkpoint Snapshot() const;
  // Continues from a Snapshot of the same stage.
  void Resume(const model::Checkpoint& ckpt);

  // Steps until the stage ends or `max_steps` is reached, writing one JSON
  // line per step to `log` (may be null). At every epoch boundary, and at
  // the end, the snapshot is written to <dir>/<stage>.ckpt and
  // <dir>/<stage>-epoch<N>.ckpt when `checkpoint_dir` is non-empty.
  void Run(std::ostream* log, const std::string& checkpoint_dir,
           std::int64_t max_steps = -1);

 private:
  struct Batch {
    std::vector<int> index;
    std::vector<size_t> offset;
    size_t length = 0;
    bool whole = false;  // every item is an uncut utterance
    std::vector<audio::Waveform> mixture, clean;
    std::vector<data::PitchLabelMatrix> labels;
  };

  Batch SampleBatch();
  Batch MakeBatch(std::vector<int> index, std::vector<size_t> offset, size_t length);
  nn::Tensor MixtureSpectra(const Batch& b) const;
  // Embedding plus the first `blocks` SE blocks, without gradients.
  nn::Tensor FrozenStream(const Batch& b, int blocks);
  const data::ProgressiveTargetSet& Ladder(int index);

  double PlLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts);
  double PitchLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts);
  double HcLoss(const Batch& b, std::vector<std::pair<std::string, double>>& parts);
  // Comb filters decoded from the frozen pitch estimator.
  std::vector<std::vector<pitch::CombFilterSpec>> PredictedPitch(
      const Batch& b, const nn::Tensor& frozen, const nn::Var& coarse);

  model::SpeechEnhancer& enh_;
  TrainConfig cfg_;
  Stage stage_;
  std::vector<data::Example> examples_;
  std::set<Stage> completed_;
  audio::StftConfig stft_;
  Adam adam_;
  std::mt19937_64 rng_;
  std::int64_t step_ = 0;
  std::optional<std::vector<int>> fixed_batch_;

  std::vector<std::optional<data::ProgressiveTargetSet>> ladders_;
  // Per-utterance results of frozen sub-networks, filled on first use.
  std::vector<std::optional<nn::Tensor>> stream_cache_;
  std::vector<std::vector<pitch::CombFilterSpec>> pitch_cache_;
};

// Stages recorded as finished in a checkpoint's metadata.
std::set<Stage> CompletedStages(const model::Checkpoint& ckpt);
// Model configuration stored in a checkpoint's metadata.
model::ModelConfig CheckpointModelConfig(const model::Checkpoint& ckpt);
// A model-only checkpoint: parameters, configuration and completed stages.
model::Checkpoint ModelCheckpoint(const model::SpeechEnhancer& enhancer,
                                  const std::set<Stage>& completed);

}  // namespace spse::train

#endif  // SPSE_TRAIN_TRAINER_H_
