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

#ifndef SPSE_HC_COMPENSATION_H_
#define SPSE_HC_COMPENSATION_H_

#include <memory>
#include <random>
#include <span>

#include "spse/audio/stft.h"
#include "spse/model/blocks.h"
#include "spse/model/config.h"
#include "spse/nn/layers.h"

namespace spse::hc {

// |S| of compressed real/imag [..., 2] as (a^2 + b^2 + 1e-12)^(1 / (2 gamma)),
// shape [..., 1].
nn::Var UncompressedMagnitude(const nn::Var& compressed, double gamma);

// Compressed real/imag of M * (|coarse| + filtered) with the phase of the
// coarse estimate. coarse [B, T, F, 2] is compressed; mask and filtered
// magnitudes are [B, T, F, 1] in the linear domain.
nn::Var CompensateCompressed(const nn::Var& mask, const nn::Var& coarse,
                             const nn::Var& filtered_mag, double gamma);

// Polar reassembly on spectrograms: magnitude mask * (|coarse| + |filtered|),
// phase of coarse. mask holds frames * bins values.
audio::ComplexSpectrogram Compensate(const audio::ComplexSpectrogram& coarse,
                                     const audio::ComplexSpectrogram& filtered,
                                     std::span<const double> mask);

// log1p magnitudes of the coarse and filtered spectra -> conv + gLN -> one
// SE block -> conv head -> sigmoid mask in (0, 1).
class MaskModule {
 public:
  MaskModule() = default;
  MaskModule(nn::ParameterSet& ps, const model::ModelConfig& cfg,
             std::mt19937_64& rng);

  // coarse [B, T, F, 2] compressed, filtered_mag [B, T, F, 1] -> mask.
  nn::Var Forward(const nn::Var& coarse, const nn::Var& filtered_mag) const;

 private:
  model::ModelConfig cfg_;
  nn::Conv2dLayer input_conv_;
  nn::NormLayer input_norm_;
  std::shared_ptr<model::SeBlock> block_;
  nn::Conv2dLayer head_;
};

}  // namespace spse::hc

#endif  // SPSE_HC_COMPENSATION_H_
