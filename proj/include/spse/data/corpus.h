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

#ifndef SPSE_DATA_CORPUS_H_
#define SPSE_DATA_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "spse/audio/stft.h"
#include "spse/data/manifest.h"

namespace spse::data {

struct VowelOptions {
  double seconds = 1.0;
  double f0_min = 90.0;
  double f0_max = 280.0;
  double level_rms = 0.08;  // RMS over voiced samples
};

// Glottal-like harmonic source with a gliding f0, shaped by three formant
// resonators and split into voiced segments separated by pauses.
audio::Waveform SynthesizeVowel(std::uint64_t seed, const VowelOptions& opts = {});

audio::Waveform WhiteNoise(size_t length, std::uint64_t seed, double rms = 0.1);

// Band-limited sawtooth at a constant f0.
audio::Waveform Sawtooth(double f0_hz, size_t length, double amplitude = 0.5);

struct ToyCorpusOptions {
  int count = 200;
  double test_fraction = 0.2;
  double snr_min_db = -10.0;
  double snr_max_db = 0.0;
  // Fraction of the test split pinned to snr_min_db.
  double test_at_min_fraction = 0.5;
  VowelOptions vowel;
  std::uint64_t seed = 1;
};

// Writes clean/ and noise/ source WAVs plus manifest.jsonl under dir and
// returns the entries.
std::vector<ManifestEntry> WriteToyCorpus(const std::string& dir,
                                          const ToyCorpusOptions& opts);

}  // namespace spse::data

#endif  // SPSE_DATA_CORPUS_H_
