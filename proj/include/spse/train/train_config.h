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

#ifndef SPSE_TRAIN_TRAIN_CONFIG_H_
#define SPSE_TRAIN_TRAIN_CONFIG_H_

#include <cstdint>

#include "spse/loss/losses.h"
#include "spse/train/adam.h"
#include "spse/train/stage.h"
#include "spse/util/key_value.h"

namespace spse::train {

// Optimization settings. Defaults are the full-scale values; desk-scale
// runs override epochs, steps, warmup and crop length from the config file.
struct TrainConfig {
  int epochs_pl = 100;
  int epochs_pitch = 25;
  int epochs_hc = 25;
  int steps_per_epoch = 1250;
  int batch_size = 8;
  double crop_seconds = 8.0;
  double warmup_steps = 10000.0;
  double lr_scale = 100.0;
  double clip_norm = 5.0;
  AdamOptions adam;
  double delta_snr_db = 5.0;
  // Last fraction of HC steps that filter with the estimated pitch instead
  // of the ground-truth labels.
  double predicted_pitch_fraction = 0.2;
  // Keep per-utterance outputs of frozen sub-networks between steps.
  bool cache_frozen = true;
  std::uint64_t seed = 1;
  loss::LossWeights loss;

  int Epochs(Stage stage) const;
  std::int64_t TotalSteps(Stage stage) const;
  void Validate() const;
  void Read(const KeyValueConfig& kv);
  void Write(KeyValueConfig& kv) const;
};

}  // namespace spse::train

#endif  // SPSE_TRAIN_TRAIN_CONFIG_H_
