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

#ifndef SPSE_MODEL_PROGRESSIVE_MODEL_H_
#define SPSE_MODEL_PROGRESSIVE_MODEL_H_

#include <memory>
#include <random>
#include <vector>

#include "spse/model/blocks.h"
#include "spse/model/config.h"
#include "spse/nn/layers.h"

namespace spse::model {

// Complex convolution (kernel 3 over time, 1 over frequency) from the
// [re, im] spectrogram to pe_channels complex maps, followed by a square-root
// magnitude compression. [B, T, F, 2] -> [B, T, F, pe_channels].
class PhaseEncoder {
 public:
  PhaseEncoder() = default;
  PhaseEncoder(nn::ParameterSet& ps, const ModelConfig& cfg, std::mt19937_64& rng);
  nn::Var Forward(const nn::Var& spec) const;

 private:
  nn::Var weight_re_, weight_im_, bias_;
};

// Weight [kt, kf, 2, 2C] of the real convolution equivalent to the complex
// kernel re + i*im, each [kt, kf, 1, C]. Output channels [0, C) hold the
// real parts and [C, 2C) the imaginary parts.
nn::Var ComplexConvWeight(const nn::Var& re, const nn::Var& im);

// [..., 2C] holding (real parts, imaginary parts) -> [..., C] with
// (re^2 + im^2 + eps)^(power / 2).
nn::Var ComplexMagnitudePow(const nn::Var& x, float power, float eps = 1e-8f);

// Phase encoder (or a plain input convolution), encoder convolution with
// global normalization, K + 1 SE blocks and a decoder after each block.
// Decoders emit compressed real/imag estimates as [B, T, F, 2].
class ProgressiveModel {
 public:
  ProgressiveModel(nn::ParameterSet& ps, const ModelConfig& cfg, std::mt19937_64& rng);

  // [B, T, F, 2] noisy spectrogram -> [B, T, F, D] stream before block 0.
  nn::Var Embed(const nn::Var& spec) const;
  nn::Var Block(int index, const nn::Var& stream) const;
  // Decoder for progressive output `stage` (1-based), reading the stream
  // after block stage - 1.
  nn::Var Decode(int stage, const nn::Var& stream) const;

  // Entry k - 1 holds output k; stages without a decoder stay undefined.
  std::vector<nn::Var> Forward(const nn::Var& spec) const;

  const ModelConfig& config() const { return cfg_; }

 private:
  ModelConfig cfg_;
  PhaseEncoder phase_encoder_;
  nn::Conv2dLayer encoder_conv_;
  nn::NormLayer encoder_norm_;
  std::vector<std::unique_ptr<SeBlock>> blocks_;
  std::vector<nn::Conv2dLayer> decoders_;  // index stage - 1
};

}  // namespace spse::model

#endif  // SPSE_MODEL_PROGRESSIVE_MODEL_H_
