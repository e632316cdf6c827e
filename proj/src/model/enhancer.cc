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

#include "spse/model/enhancer.h"

#include <cmath>
#include <random>

#include "spse/error.h"
#include "spse/model/spectral_tensor.h"

namespace spse::model {

SpeechEnhancer::SpeechEnhancer(const ModelConfig& cfg, std::uint64_t seed) : cfg_(cfg) {
  cfg_.Validate();
  std::mt19937_64 rng(seed);
  model_ = std::make_unique<ProgressiveModel>(params_, cfg_, rng);
  if (cfg_.use_harmonic_compensation) {
    pitch_ = std::make_unique<pitch::PitchEstimator>(params_, cfg_.pitch, cfg_.num_bins, rng);
    mask_ = std::make_unique<hc::MaskModule>(params_, cfg_, rng);
  }
}

audio::Waveform CompressedToWaveform(const audio::CompressedSpectrum& c,
                                     const audio::StftConfig& stft, int length) {
  return audio::Istft(audio::Uncompress(c, stft), stft, length);
}

EnhanceResult SpeechEnhancer::Enhance(const audio::Waveform& noisy, bool use_compensation,
                                      const audio::StftConfig& stft) const {
  if (use_compensation && !has_compensation())
    throw ConfigError("model was built without harmonic compensation");
  nn::NoGradGuard no_grad;
  const int length = static_cast<int>(noisy.size());
  const audio::ComplexSpectrogram x = audio::Stft(noisy, stft);
  const auto outputs = model_->Forward(nn::Var(StackSpectrograms(std::span(&x, 1))));
  EnhanceResult result;
  for (const auto& out : outputs) {
    if (!out.defined()) {
      result.intermediates.emplace_back();
      continue;
    }
    for (float v : out.value().values())
      if (!std::isfinite(v)) throw NumericError("non-finite decoder output");
    result.intermediates.push_back(
        CompressedToWaveform(CompressedItem(out.value(), 0, cfg_.gamma), stft, length));
  }
  const nn::Var& coarse = outputs.back();
  if (!use_compensation) {
    result.enhanced = result.intermediates.back();
    return result;
  }
  const int source = cfg_.PitchSourceStage();
  // The raw mixture is uncompressed, which PitchFeatures reads as gamma 1.
  const nn::Tensor feats = source == 0
      ? pitch::PitchFeatures(StackSpectrograms(std::span(&x, 1)), 1.0)
      : pitch::PitchFeatures(outputs[source - 1].value(), cfg_.gamma);
  result.posterior = PosteriorItem(pitch_->Forward(nn::Var(feats), false).value(), 0);
  result.pitch = pitch::DecodePitch(result.posterior);
  const audio::ComplexSpectrogram filtered = pitch::ApplyPitchFilter(noisy, result.pitch, stft);
  const nn::Var filtered_mag(StackMagnitudes(std::span(&filtered, 1)));
  const nn::Var mask = mask_->Forward(coarse, filtered_mag);
  const nn::Var out = hc::CompensateCompressed(mask, coarse, filtered_mag, cfg_.gamma);
  result.enhanced = CompressedToWaveform(CompressedItem(out.value(), 0, cfg_.gamma), stft, length);
  for (double v : result.enhanced.samples)
    if (!std::isfinite(v)) throw NumericError("non-finite enhanced waveform");
  return result;
}

}  // namespace spse::model
