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

#include "spse/data/mixing.h"

#include <cmath>
#include <random>

#include "spse/error.h"

namespace spse::data {

size_t NoiseCropOffset(size_t len_n, size_t len_s, std::uint64_t seed) {
  if (len_n < len_s) throw DataError("noise shorter than speech");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<size_t> pick(0, len_n - len_s);
  return pick(rng);
}

MixResult MixWithCrop(const audio::Waveform& s, std::vector<double> noise_crop,
                      double target_db) {
  if (noise_crop.size() != s.size()) throw DataError("noise crop length mismatch");
  const double rs = audio::Rms(s.samples);
  const double rn = audio::Rms(noise_crop);
  if (rs == 0.0) throw DataError("silent clean signal");
  if (rn == 0.0) throw DataError("silent noise signal");
  MixResult out;
  out.gain = rs / rn * std::pow(10.0, -target_db / 20.0);
  out.mixture.sample_rate_hz = s.sample_rate_hz;
  out.mixture.samples.resize(s.size());
  for (size_t i = 0; i < s.size(); ++i)
    out.mixture.samples[i] = s.samples[i] + out.gain * noise_crop[i];
  out.noise_crop = std::move(noise_crop);
  return out;
}

MixResult MixAtSnr(const audio::Waveform& s, const audio::Waveform& n,
                   double target_db, std::uint64_t seed) {
  const size_t offset = NoiseCropOffset(n.size(), s.size(), seed);
  std::vector<double> crop(n.samples.begin() + offset,
                           n.samples.begin() + offset + s.size());
  MixResult out = MixWithCrop(s, std::move(crop), target_db);
  out.offset = offset;
  return out;
}

std::vector<double> ConvolveTruncated(std::span<const double> x,
                                      std::span<const double> h) {
  std::vector<double> y(x.size(), 0.0);
  for (size_t k = 0; k < h.size() && k < x.size(); ++k) {
    const double hk = h[k];
    if (hk == 0.0) continue;
    for (size_t n = k; n < x.size(); ++n) y[n] += hk * x[n - k];
  }
  return y;
}

ReverbPair EarlyReflectionTarget(const audio::Waveform& dry,
                                 const RoomImpulseResponse& h,
                                 int early_samples) {
  if (h.taps.empty()) throw DataError("empty impulse response");
  ReverbPair out;
  out.reverberant.sample_rate_hz = out.target.sample_rate_hz = dry.sample_rate_hz;
  out.reverberant.samples = ConvolveTruncated(dry.samples, h.taps);
  const size_t early = std::min<size_t>(h.taps.size(), early_samples);
  out.target.samples =
      ConvolveTruncated(dry.samples, std::span(h.taps).first(early));
  return out;
}

RoomImpulseResponse SyntheticRir(double t60_s, std::uint64_t seed, int length) {
  if (!(t60_s > 0.0)) throw ConfigError("t60 must be positive");
  RoomImpulseResponse rir;
  const int n = length > 0 ? length : static_cast<int>(t60_s * rir.sample_rate_hz);
  rir.taps.resize(std::max(n, 1));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  // 60 dB amplitude decay over t60: exp(-6.9078 t / t60).
  const double rate = std::log(1000.0) / (t60_s * rir.sample_rate_hz);
  rir.taps[0] = 1.0;
  for (size_t i = 1; i < rir.taps.size(); ++i)
    rir.taps[i] = 0.3 * gauss(rng) * std::exp(-rate * static_cast<double>(i));
  return rir;
}

ProgressiveTargetSet MakeProgressiveTargetsFromCrop(
    const audio::Waveform& s_target, const std::vector<double>& noise_crop,
    double input_snr_db, int num_intermediate, double delta_db) {
  if (num_intermediate < 0) throw ConfigError("negative ladder size");
  ProgressiveTargetSet set;
  set.num_intermediate = num_intermediate;
  set.delta_snr_db = delta_db;
  for (int k = 1; k <= num_intermediate; ++k) {
    const double snr = input_snr_db + k * delta_db;
    set.nominal_snr_db.push_back(snr);
    set.targets.push_back(MixWithCrop(s_target, noise_crop, snr).mixture);
  }
  set.targets.push_back(s_target);
  return set;
}

ProgressiveTargetSet MakeProgressiveTargets(const audio::Waveform& s_target,
                                            const audio::Waveform& n,
                                            double input_snr_db, int num_intermediate,
                                            double delta_db, std::uint64_t seed) {
  const size_t offset = NoiseCropOffset(n.size(), s_target.size(), seed);
  std::vector<double> crop(n.samples.begin() + offset,
                           n.samples.begin() + offset + s_target.size());
  return MakeProgressiveTargetsFromCrop(s_target, crop, input_snr_db,
                                        num_intermediate, delta_db);
}

}  // namespace spse::data
