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

#ifndef SPSE_DATA_MIXING_H_
#define SPSE_DATA_MIXING_H_

#include <cstdint>
#include <vector>

#include "spse/audio/stft.h"

namespace spse::data {

struct RoomImpulseResponse {
  std::vector<double> taps;  // taps[0] is the direct path
  int sample_rate_hz = audio::kSampleRate;
};

// Number of samples kept as early reflections (50 ms).
inline constexpr int kEarlyReflectionSamples = 800;

struct MixResult {
  audio::Waveform mixture;
  std::vector<double> noise_crop;  // unscaled crop aligned with the mixture
  double gain = 0.0;
  size_t offset = 0;
};

// Seeded uniform offset of a len_s crop inside a len_n noise signal.
size_t NoiseCropOffset(size_t len_n, size_t len_s, std::uint64_t seed);

// s + g * n_crop with g = (rms(s) / rms(n_crop)) * 10^(-target_db / 20).
// Throws DataError for silent inputs or noise shorter than speech.
MixResult MixAtSnr(const audio::Waveform& s, const audio::Waveform& n,
                   double target_db, std::uint64_t seed);

// Same, on an already aligned noise crop.
MixResult MixWithCrop(const audio::Waveform& s, std::vector<double> noise_crop,
                      double target_db);

struct ReverbPair {
  audio::Waveform reverberant;
  audio::Waveform target;
};

// reverberant = s * h, target = s * h[0:800], both cut to len(s).
ReverbPair EarlyReflectionTarget(const audio::Waveform& dry,
                                 const RoomImpulseResponse& h,
                                 int early_samples = kEarlyReflectionSamples);

// Full linear convolution truncated to the first len(x) samples.
std::vector<double> ConvolveTruncated(std::span<const double> x,
                                      std::span<const double> h);

// White-noise taps under an exponential envelope reaching -60 dB at t60,
// with a unit direct path at tap 0. Length defaults to t60 seconds.
RoomImpulseResponse SyntheticRir(double t60_s, std::uint64_t seed,
                                 int length = -1);

struct ProgressiveTargetSet {
  // targets[k-1] for k = 1..K, then the clean target last.
  std::vector<audio::Waveform> targets;
  std::vector<double> nominal_snr_db;  // K entries
  int num_intermediate = 0;
  double delta_snr_db = 5.0;
};

// Intermediate targets reuse the mixture's noise crop at input + k * delta dB.
ProgressiveTargetSet MakeProgressiveTargets(const audio::Waveform& s_target,
                                            const audio::Waveform& n,
                                            double input_snr_db, int num_intermediate,
                                            double delta_db, std::uint64_t seed);

ProgressiveTargetSet MakeProgressiveTargetsFromCrop(
    const audio::Waveform& s_target, const std::vector<double>& noise_crop,
    double input_snr_db, int num_intermediate, double delta_db);

}  // namespace spse::data

#endif  // SPSE_DATA_MIXING_H_
