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

#include "spse/train/train_config.h"

#include <sstream>

#include "spse/error.h"

namespace spse::train {

namespace {

std::string Num(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

int TrainConfig::Epochs(Stage stage) const {
  switch (stage) {
    case Stage::kPl: return epochs_pl;
    case Stage::kPitch: return epochs_pitch;
    case Stage::kHc: return epochs_hc;
  }
  return 0;
}

std::int64_t TrainConfig::TotalSteps(Stage stage) const {
  return static_cast<std::int64_t>(Epochs(stage)) * steps_per_epoch;
}

void TrainConfig::Validate() const {
  if (epochs_pl < 0 || epochs_pitch < 0 || epochs_hc < 0)
    throw ConfigError("epochs must be non-negative");
  if (steps_per_epoch <= 0) throw ConfigError("train.steps_per_epoch must be positive");
  if (batch_size <= 0) throw ConfigError("train.batch_size must be positive");
  if (!(crop_seconds > 0.0)) throw ConfigError("train.crop_seconds must be positive");
  if (!(warmup_steps > 0.0) || !(lr_scale > 0.0))
    throw ConfigError("train.warmup_steps and train.lr_scale must be positive");
  if (!(clip_norm > 0.0)) throw ConfigError("train.clip_norm must be positive");
  if (!(predicted_pitch_fraction >= 0.0 && predicted_pitch_fraction <= 1.0))
    throw ConfigError("train.predicted_pitch_fraction must lie in [0, 1]");
  if (!(adam.beta1 >= 0.0 && adam.beta1 < 1.0 && adam.beta2 >= 0.0 && adam.beta2 < 1.0))
    throw ConfigError("Adam betas must lie in [0, 1)");
  try {
    loss.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

void TrainConfig::Read(const KeyValueConfig& kv) {
  kv.Get("train.epochs_pl", epochs_pl);
  kv.Get("train.epochs_pitch", epochs_pitch);
  kv.Get("train.epochs_hc", epochs_hc);
  kv.Get("train.steps_per_epoch", steps_per_epoch);
  kv.Get("train.batch_size", batch_size);
  kv.Get("train.crop_seconds", crop_seconds);
  kv.Get("train.warmup_steps", warmup_steps);
  kv.Get("train.lr_scale", lr_scale);
  kv.Get("train.clip_norm", clip_norm);
  kv.Get("train.adam_beta1", adam.beta1);
  kv.Get("train.adam_beta2", adam.beta2);
  kv.Get("train.adam_eps", adam.eps);
  kv.Get("train.predicted_pitch_fraction", predicted_pitch_fraction);
  kv.Get("train.cache_frozen", cache_frozen);
  kv.Get("train.seed", seed);
  kv.Get("data.delta_snr_db", delta_snr_db);
  kv.Get("loss.alpha", loss.alpha);
  kv.Get("loss.beta", loss.beta);
  kv.Get("loss.lambda", loss.lambda);
  kv.Get("model.gamma", loss.gamma);
  Validate();
}

void TrainConfig::Write(KeyValueConfig& kv) const {
  kv.Set("train.epochs_pl", std::to_string(epochs_pl));
  kv.Set("train.epochs_pitch", std::to_string(epochs_pitch));
  kv.Set("train.epochs_hc", std::to_string(epochs_hc));
  kv.Set("train.steps_per_epoch", std::to_string(steps_per_epoch));
  kv.Set("train.batch_size", std::to_string(batch_size));
  kv.Set("train.crop_seconds", Num(crop_seconds));
  kv.Set("train.warmup_steps", Num(warmup_steps));
  kv.Set("train.lr_scale", Num(lr_scale));
  kv.Set("train.clip_norm", Num(clip_norm));
  kv.Set("train.adam_beta1", Num(adam.beta1));
  kv.Set("train.adam_beta2", Num(adam.beta2));
  kv.Set("train.adam_eps", Num(adam.eps));
  kv.Set("train.predicted_pitch_fraction", Num(predicted_pitch_fraction));
  kv.Set("train.cache_frozen", cache_frozen ? "true" : "false");
  kv.Set("train.seed", std::to_string(seed));
  kv.Set("data.delta_snr_db", Num(delta_snr_db));
  kv.Set("loss.alpha", Num(loss.alpha));
  kv.Set("loss.beta", Num(loss.beta));
  kv.Set("loss.lambda", Num(loss.lambda));
}

}  // namespace spse::train
