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

#ifndef SPSE_TESTS_TRAIN_FIXTURES_H_
#define SPSE_TESTS_TRAIN_FIXTURES_H_

#include <cstdint>
#include <vector>

#include "spse/data/corpus.h"
#include "spse/data/dataset.h"
#include "spse/data/mixing.h"
#include "spse/data/pitch_labels.h"

namespace spse::testing {

// Vowel-like utterances in white noise, built in memory.
inline std::vector<data::Example> VowelExamples(int count, double seconds, double snr_db,
                                                std::uint64_t seed) {
  std::vector<data::Example> out;
  data::VowelOptions opts;
  opts.seconds = seconds;
  for (int i = 0; i < count; ++i) {
    const std::uint64_t s = seed * 1000 + static_cast<std::uint64_t>(i);
    data::Example ex;
    ex.id = "utt" + std::to_string(i);
    ex.split = "train";
    ex.snr_db = snr_db;
    ex.clean = data::SynthesizeVowel(s, opts);
    ex.mixture = data::MixAtSnr(ex.clean, data::WhiteNoise(ex.clean.size(), s + 7), snr_db, s).mixture;
    ex.labels = data::F0ToLabelMatrix(data::ExtractF0(ex.clean, audio::StftConfig{}));
    out.push_back(std::move(ex));
  }
  return out;
}

}  // namespace spse::testing

#endif  // SPSE_TESTS_TRAIN_FIXTURES_H_
