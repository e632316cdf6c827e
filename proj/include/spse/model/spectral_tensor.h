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

#ifndef SPSE_MODEL_SPECTRAL_TENSOR_H_
#define SPSE_MODEL_SPECTRAL_TENSOR_H_

#include <span>

#include "spse/audio/stft.h"
#include "spse/data/pitch_labels.h"
#include "spse/nn/tensor.h"

namespace spse::model {

// [B, T, F, 2] real/imag; all spectrograms must share T and F.
nn::Tensor StackSpectrograms(std::span<const audio::ComplexSpectrogram> specs);
// [B, T, F, 1] magnitudes.
nn::Tensor StackMagnitudes(std::span<const audio::ComplexSpectrogram> specs);
nn::Tensor StackCompressed(std::span<const audio::CompressedSpectrum> specs);

// Item b of a [B, T, F, 2] tensor.
audio::CompressedSpectrum CompressedItem(const nn::Tensor& t, int b, double gamma);
// Writes item b of a gradient into a [B, T, F, 2] tensor, scaled by `scale`.
void SetCompressedItem(nn::Tensor& t, int b, const audio::CompressedSpectrum& c,
                       double scale = 1.0);

// Sigmoid of item b of [B, T, D] logits.
data::PitchLabelMatrix PosteriorItem(const nn::Tensor& logits, int b);
// [B, T, D] stack of label matrices.
nn::Tensor StackLabels(std::span<const data::PitchLabelMatrix> labels);

}  // namespace spse::model

#endif  // SPSE_MODEL_SPECTRAL_TENSOR_H_
