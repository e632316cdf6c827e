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

#ifndef SPSE_DATA_PITCH_LABELS_H_
#define SPSE_DATA_PITCH_LABELS_H_

#include <string>
#include <vector>

#include "spse/audio/stft.h"

namespace spse::data {

struct PitchTrack {
  std::vector<double> f0_hz;  // 0 for unvoiced frames
  std::vector<bool> voiced;
  int hop = 256;

  int frames() const { return static_cast<int>(f0_hz.size()); }
};

// Logarithmic bins over [f_min, f_max]; index n is the unvoiced class.
struct PitchBins {
  int n = 225;
  double f_min = 62.5;
  double f_max = 500.0;

  int dims() const { return n + 1; }
  int unvoiced() const { return n; }
  // Clamps to [0, n - 1].
  int Bin(double f0_hz) const;
  double Center(int bin) const;
};

struct YinOptions {
  double threshold = 0.2;
  int window = 512;
  // Frames whose mean power falls below this are unvoiced.
  double silence_power = 1e-8;
};

// Frame t is centred on sample t * hop, matching the reflect-padded STFT.
PitchTrack ExtractF0(const audio::Waveform& s, const audio::StftConfig& cfg,
                     const PitchBins& bins = {}, const YinOptions& opts = {});

struct PitchLabelMatrix {
  int frames = 0;
  int dims = 0;
  std::vector<float> values;  // row-major frames x dims

  float& at(int t, int j) { return values[static_cast<size_t>(t) * dims + j]; }
  float at(int t, int j) const { return values[static_cast<size_t>(t) * dims + j]; }
  // Index of the row maximum (first one on ties).
  int Argmax(int t) const;
};

// Voiced rows get a unit-peak Gaussian (sigma 1 bin, cut at +-3 bins) around
// the f0 bin; unvoiced rows are one-hot on the last index.
PitchLabelMatrix F0ToLabelMatrix(const PitchTrack& track,
                                 const PitchBins& bins = {});

// 16-byte header {frames, dims, 0, 0} as little-endian int32, then the
// row-major float32 values.
void WriteLabels(const std::string& path, const PitchLabelMatrix& m);
PitchLabelMatrix ReadLabels(const std::string& path);

}  // namespace spse::data

#endif  // SPSE_DATA_PITCH_LABELS_H_
