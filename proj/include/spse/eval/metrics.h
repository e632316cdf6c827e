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

#ifndef SPSE_EVAL_METRICS_H_
#define SPSE_EVAL_METRICS_H_

#include <span>

#include "spse/data/pitch_labels.h"

namespace spse::eval {

// 10 log10(|s|^2 / |s - estimate|^2) in dB. +infinity when the estimate is
// exact. Throws std::invalid_argument on a length mismatch or a silent
// reference.
double Sdr(std::span<const double> estimate, std::span<const double> reference);

// Short-time objective intelligibility of `processed` against `clean`, both
// at sample_rate_hz (resampled to 10 kHz internally). Frames more than 40 dB
// below the loudest clean frame are dropped first. Throws DataError when
// fewer than 30 frames (384 ms) remain.
double Stoi(std::span<const double> processed, std::span<const double> clean,
            int sample_rate_hz = 16000);

// Percentage of frames whose row argmax agrees within one bin. Both
// unvoiced counts as a match; voiced against unvoiced never does. Throws
// std::invalid_argument on a shape mismatch or zero frames.
double PitchAccuracy(const data::PitchLabelMatrix& estimate,
                     const data::PitchLabelMatrix& reference,
                     const data::PitchBins& bins = {});

}  // namespace spse::eval

#endif  // SPSE_EVAL_METRICS_H_
