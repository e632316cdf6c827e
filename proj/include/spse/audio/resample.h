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

#ifndef SPSE_AUDIO_RESAMPLE_H_
#define SPSE_AUDIO_RESAMPLE_H_

#include <span>
#include <vector>

namespace spse::audio {

// Rational-rate resampling by up / down with a zero-phase Kaiser-windowed
// sinc low-pass (beta 5, 10 * max(up, down) taps per side, unit DC gain).
// Output length is ceil(x.size() * up / down).
std::vector<double> ResamplePoly(std::span<const double> x, int up, int down);

}  // namespace spse::audio

#endif  // SPSE_AUDIO_RESAMPLE_H_
