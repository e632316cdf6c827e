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

#ifndef SPSE_EVAL_SPECTROGRAM_IMAGE_H_
#define SPSE_EVAL_SPECTROGRAM_IMAGE_H_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "spse/audio/stft.h"

namespace spse::eval {

inline constexpr double kSpectrogramFloorDb = -80.0;

// RGB raster, rows top to bottom.
struct Image {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;

  const std::uint8_t* pixel(int x, int y) const {
    return rgb.data() + (static_cast<size_t>(y) * width + x) * 3;
  }
  std::uint8_t* pixel(int x, int y) {
    return rgb.data() + (static_cast<size_t>(y) * width + x) * 3;
  }
};

// One column per frame, one row per bin with the highest bin on top. Level
// is 20 log10(|S| / max |S|) clipped to [-80, 0] dB and mapped through a
// fixed dark-to-bright colour ramp; an all-zero input is uniformly floor.
Image RenderSpectrogram(const audio::ComplexSpectrogram& s);

// Colour of a level in dB (clipped to the floor).
std::array<std::uint8_t, 3> LevelColour(double db);

// Writes an 8-bit RGB PNG. Throws DataError when the file cannot be written.
void WritePng(const Image& image, const std::string& path);

inline void RenderSpectrogram(const audio::ComplexSpectrogram& s, const std::string& path) {
  WritePng(RenderSpectrogram(s), path);
}

}  // namespace spse::eval

#endif  // SPSE_EVAL_SPECTROGRAM_IMAGE_H_
