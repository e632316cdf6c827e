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

#include "spse/data/corpus.h"

#include <cmath>
#include <filesystem>
#include <numbers>
#include <random>

#include "spse/audio/wav.h"

namespace spse::data {

namespace fs = std::filesystem;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Two-pole resonator at centre frequency fc with bandwidth bw.
void Resonate(std::vector<double>& x, double fc, double bw, int rate) {
  const double r = std::exp(-std::numbers::pi * bw / rate);
  const double a1 = -2.0 * r * std::cos(kTwoPi * fc / rate);
  const double a2 = r * r;
  const double g = 1.0 - r;
  double y1 = 0.0, y2 = 0.0;
  for (double& v : x) {
    const double y = g * v - a1 * y1 - a2 * y2;
    y2 = y1;
    y1 = y;
    v = y;
  }
}

}  // namespace

audio::Waveform SynthesizeVowel(std::uint64_t seed, const VowelOptions& opts) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  audio::Waveform w;
  const int rate = w.sample_rate_hz;
  const size_t n = static_cast<size_t>(opts.seconds * rate);
  w.samples.assign(n, 0.0);

  // Segment layout: pause, voiced, pause, voiced, ...
  std::vector<std::pair<size_t, size_t>> segments;
  size_t pos = static_cast<size_t>((0.03 + 0.1 * u(rng)) * rate);
  while (pos + rate / 10 < n) {
    const size_t len = static_cast<size_t>((0.25 + 0.35 * u(rng)) * rate);
    const size_t end = std::min(n, pos + len);
    segments.emplace_back(pos, end);
    pos = end + static_cast<size_t>((0.05 + 0.15 * u(rng)) * rate);
  }

  std::vector<double> voiced(n, 0.0);
  for (auto [begin, end] : segments) {
    const double f_start = opts.f0_min + (opts.f0_max - opts.f0_min) * u(rng);
    const double f_end = f_start * (0.85 + 0.3 * u(rng));
    const double vib_rate = 4.0 + 2.0 * u(rng);
    const size_t len = end - begin;
    std::vector<double> seg(len, 0.0);
    double phase = kTwoPi * u(rng);
    for (size_t i = 0; i < len; ++i) {
      const double frac = static_cast<double>(i) / len;
      const double f0 = (f_start + (f_end - f_start) * frac) *
                        (1.0 + 0.015 * std::sin(kTwoPi * vib_rate * i / rate));
      phase += kTwoPi * f0 / rate;
      const int harmonics = static_cast<int>(4000.0 / f0);
      double acc = 0.0;
      for (int k = 1; k <= harmonics; ++k) acc += std::sin(k * phase) / k;
      seg[i] = acc;
    }
    Resonate(seg, 300.0 + 500.0 * u(rng), 90.0, rate);
    Resonate(seg, 900.0 + 1300.0 * u(rng), 110.0, rate);
    Resonate(seg, 2400.0 + 600.0 * u(rng), 150.0, rate);
    // 20 ms raised-cosine edges.
    const size_t ramp = std::min<size_t>(len / 2, rate / 50);
    for (size_t i = 0; i < ramp; ++i) {
      const double g = 0.5 - 0.5 * std::cos(std::numbers::pi * i / ramp);
      seg[i] *= g;
      seg[len - 1 - i] *= g;
    }
    std::copy(seg.begin(), seg.end(), voiced.begin() + begin);
  }
  double power = 0.0;
  size_t active = 0;
  for (auto [begin, end] : segments) {
    for (size_t i = begin; i < end; ++i) power += voiced[i] * voiced[i];
    active += end - begin;
  }
  const double scale = active > 0 && power > 0.0
                           ? opts.level_rms / std::sqrt(power / active)
                           : 0.0;
  for (size_t i = 0; i < n; ++i) w.samples[i] = scale * voiced[i];
  return w;
}

audio::Waveform WhiteNoise(size_t length, std::uint64_t seed, double rms) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0.0, rms);
  audio::Waveform w;
  w.samples.resize(length);
  for (double& v : w.samples) v = g(rng);
  return w;
}

audio::Waveform Sawtooth(double f0_hz, size_t length, double amplitude) {
  audio::Waveform w;
  w.samples.assign(length, 0.0);
  const int harmonics = static_cast<int>(0.5 * w.sample_rate_hz / f0_hz);
  for (size_t i = 0; i < length; ++i) {
    const double phase = kTwoPi * f0_hz * i / w.sample_rate_hz;
    double acc = 0.0;
    for (int k = 1; k <= harmonics; ++k) acc += std::sin(k * phase) / k;
    w.samples[i] = amplitude * 2.0 / std::numbers::pi * acc;
  }
  return w;
}

std::vector<ManifestEntry> WriteToyCorpus(const std::string& dir,
                                          const ToyCorpusOptions& opts) {
  fs::create_directories(fs::path(dir) / "clean");
  fs::create_directories(fs::path(dir) / "noise");
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> snr(opts.snr_min_db, opts.snr_max_db);
  const int num_test = static_cast<int>(std::lround(opts.count * opts.test_fraction));
  const int pinned = static_cast<int>(std::lround(num_test * opts.test_at_min_fraction));
  std::vector<ManifestEntry> entries;
  for (int i = 0; i < opts.count; ++i) {
    ManifestEntry e;
    char id[32];
    std::snprintf(id, sizeof(id), "utt%05d", i);
    e.id = id;
    e.seed = rng();
    const int test_index = i - (opts.count - num_test);
    e.split = test_index >= 0 ? "test" : "train";
    e.snr_db = (test_index >= 0 && test_index < pinned) ? opts.snr_min_db : snr(rng);
    const auto clean = SynthesizeVowel(e.seed, opts.vowel);
    // Noise gets half a second of slack for the crop offset.
    const auto noise = WhiteNoise(clean.size() + clean.sample_rate_hz / 2, e.seed ^ 0x9e3779b97f4a7c15ULL);
    e.clean_path = "clean/" + e.id + ".wav";
    e.noise_path = "noise/" + e.id + ".wav";
    audio::WriteWav((fs::path(dir) / e.clean_path).string(), clean);
    audio::WriteWav((fs::path(dir) / e.noise_path).string(), noise);
    entries.push_back(e);
  }
  WriteManifest((fs::path(dir) / "manifest.jsonl").string(), entries);
  return entries;
}

}  // namespace spse::data
