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

#ifndef SPSE_PITCH_COMB_FILTER_H_
#define SPSE_PITCH_COMB_FILTER_H_

#include <array>
#include <span>
#include <string>
#include <vector>

#include "spse/audio/stft.h"
#include "spse/data/pitch_labels.h"

namespace spse::pitch {

inline constexpr std::array<double, 3> kCombWeights = {0.25, 0.5, 0.25};
inline constexpr std::array<double, 3> kIdentityWeights = {0.0, 1.0, 0.0};

// Taps at -tau, 0, +tau samples. tau == 0 marks an unvoiced frame.
struct CombFilterSpec {
  int tau = 0;
  std::array<double, 3> weights = kIdentityWeights;

  bool voiced() const { return tau > 0; }
};

// Hard argmax per row. The unvoiced class gives the identity filter; other
// bins give tau = round(sample_rate / bin_centre).
std::vector<CombFilterSpec> DecodePitch(const data::PitchLabelMatrix& posterior,
                                        const data::PitchBins& bins = {},
                                        int sample_rate_hz = audio::kSampleRate);

// Per-frame f0 in Hz of a decoded sequence, 0 for unvoiced frames.
std::vector<double> DecodedF0(std::span<const CombFilterSpec> specs,
                              int sample_rate_hz = audio::kSampleRate);

// Each voiced frame replaces its analysis segment of the reflect-padded
// signal by the comb-filtered segment sum_i w_i * x[n - i * tau] (zero
// beyond the padded signal) before windowing and the DFT. Unvoiced frames
// are the plain STFT frames.
audio::ComplexSpectrogram ApplyPitchFilter(const audio::Waveform& x,
                                           std::span<const CombFilterSpec> specs,
                                           const audio::StftConfig& cfg);

// |w_0 + w_1 e^{-j omega tau} + w_-1 e^{j omega tau}| for symmetric weights.
double CombMagnitudeResponse(const CombFilterSpec& spec, double omega);

// Lines "frame_index f0_hz voiced_flag".
void WriteF0Dump(const std::string& path, std::span<const CombFilterSpec> specs,
                 int sample_rate_hz = audio::kSampleRate);

}  // namespace spse::pitch

#endif  // SPSE_PITCH_COMB_FILTER_H_
