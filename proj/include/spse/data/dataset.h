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

#ifndef SPSE_DATA_DATASET_H_
#define SPSE_DATA_DATASET_H_

#include <string>
#include <utility>
#include <vector>

#include "spse/audio/stft.h"
#include "spse/data/manifest.h"
#include "spse/data/mixing.h"
#include "spse/data/pitch_labels.h"

namespace spse::data {

struct SynthConfig {
  int num_intermediate = 4;
  double delta_snr_db = 5.0;
  audio::StftConfig stft;
  PitchBins bins;
  int workers = 1;
};

struct SynthItem {
  std::string id;
  std::string split;
  double snr_db = 0.0;
  audio::Waveform mixture;
  ProgressiveTargetSet ladder;  // last target is the clean target
  PitchLabelMatrix labels;

  const audio::Waveform& clean() const { return ladder.targets.back(); }
};

// Reads the sources, applies the optional RIR, mixes and labels one entry.
SynthItem SynthesizeItem(const ManifestEntry& entry, const SynthConfig& cfg);

// <out>/mix/<id>.wav, <out>/target_<k>/<id>.wav for k = 1..K,
// <out>/clean/<id>.wav and <out>/pitch/<id>.labels.
void WriteItem(const std::string& out_dir, const SynthItem& item);

struct SynthSummary {
  int written = 0;
  std::vector<std::pair<std::string, std::string>> failures;  // id, reason
};

// Items are synthesized on cfg.workers threads; failing items are reported
// and skipped. Writes <out>/index.jsonl in manifest order.
SynthSummary SynthesizeDataset(const std::vector<ManifestEntry>& entries,
                               const std::string& out_dir,
                               const SynthConfig& cfg);

struct Example {
  std::string id;
  std::string split;
  double snr_db = 0.0;
  audio::Waveform mixture;
  audio::Waveform clean;
  PitchLabelMatrix labels;
};

// Loads every indexed item of the split ("" for all).
std::vector<Example> LoadDataset(const std::string& out_dir,
                                 const std::string& split = "");

// Rebuilds the ladder from a mixture and its clean target: the noise is
// mixture - clean, so any K can be trained from the same files.
ProgressiveTargetSet LadderFromPair(const audio::Waveform& mixture,
                                    const audio::Waveform& clean,
                                    double input_snr_db, int num_intermediate,
                                    double delta_db);

}  // namespace spse::data

#endif  // SPSE_DATA_DATASET_H_
