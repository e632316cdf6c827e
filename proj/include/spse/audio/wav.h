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

#ifndef SPSE_AUDIO_WAV_H_
#define SPSE_AUDIO_WAV_H_

#include <string>

#include "spse/audio/stft.h"

namespace spse::audio {

// 16-bit PCM mono 16 kHz RIFF/WAVE only. Anything else is refused with a
// DataError naming the offending property.
Waveform ReadWav(const std::string& path);

// Writes 16-bit PCM mono; samples are clipped to [-1, 1]. The file is written
// to a temporary name and renamed into place.
void WriteWav(const std::string& path, const Waveform& w);

}  // namespace spse::audio

#endif  // SPSE_AUDIO_WAV_H_
