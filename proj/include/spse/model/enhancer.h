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

#ifndef SPSE_MODEL_ENHANCER_H_
#define SPSE_MODEL_ENHANCER_H_

#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "spse/audio/stft.h"
#include "spse/data/pitch_labels.h"
#include "spse/hc/compensation.h"
#include "spse/model/config.h"
#include "spse/model/progressive_model.h"
#include "spse/nn/parameter_set.h"
#include "spse/pitch/comb_filter.h"
#include "spse/pitch/estimator.h"

namespace spse::model {

struct EnhanceResult {
  audio::Waveform enhanced;
  // s~_1 .. s~_{K+1}; empty entries for stages without a decoder.
  std::vector<audio::Waveform> intermediates;
  std::vector<pitch::CombFilterSpec> pitch;  // empty without compensation
  data::PitchLabelMatrix posterior;
};

// Owns every parameter group: the progressive model, and with harmonic
// compensation enabled also the pitch estimator and the mask module.
class SpeechEnhancer {
 public:
  SpeechEnhancer(const ModelConfig& cfg, std::uint64_t seed);
  SpeechEnhancer(const SpeechEnhancer&) = delete;
  SpeechEnhancer& operator=(const SpeechEnhancer&) = delete;

  const ModelConfig& config() const { return cfg_; }
  nn::ParameterSet& params() { return params_; }
  const nn::ParameterSet& params() const { return params_; }
  const ProgressiveModel& model() const { return *model_; }
  const pitch::PitchEstimator& pitch_estimator() const { return *pitch_; }
  const hc::MaskModule& mask_module() const { return *mask_; }
  bool has_compensation() const { return cfg_.use_harmonic_compensation; }

  // Runs the full inference chain without gradients. With use_compensation
  // false the coarse estimate S~_{K+1} is returned.
  EnhanceResult Enhance(const audio::Waveform& noisy, bool use_compensation,
                        const audio::StftConfig& stft = {}) const;

 private:
  ModelConfig cfg_;
  nn::ParameterSet params_;
  std::unique_ptr<ProgressiveModel> model_;
  std::unique_ptr<pitch::PitchEstimator> pitch_;
  std::unique_ptr<hc::MaskModule> mask_;
};

// Uncompress + inverse STFT of a compressed estimate, cut to `length`.
audio::Waveform CompressedToWaveform(const audio::CompressedSpectrum& c,
                                     const audio::StftConfig& stft, int length);

}  // namespace spse::model

#endif  // SPSE_MODEL_ENHANCER_H_
