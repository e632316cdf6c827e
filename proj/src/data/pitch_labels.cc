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

#include "spse/data/pitch_labels.h"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>

#include "spse/error.h"

namespace spse::data {
namespace {

static_assert(std::endian::native == std::endian::little,
              "label files are written in host order");

// Cumulative-mean-normalized difference over lags [0, max_lag].
void Cmndf(const double* x, int window, int max_lag, std::vector<double>& d) {
  d.assign(max_lag + 1, 0.0);
  for (int lag = 1; lag <= max_lag; ++lag) {
    double acc = 0.0;
    for (int j = 0; j < window; ++j) {
      const double diff = x[j] - x[j + lag];
      acc += diff * diff;
    }
    d[lag] = acc;
  }
  d[0] = 1.0;
  double running = 0.0;
  for (int lag = 1; lag <= max_lag; ++lag) {
    running += d[lag];
    d[lag] = running > 0.0 ? d[lag] * lag / running : 1.0;
  }
}

}  // namespace

int PitchBins::Bin(double f0_hz) const {
  const double f = std::clamp(f0_hz, f_min, f_max);
  const double b = (n - 1) * std::log2(f / f_min) / std::log2(f_max / f_min);
  return std::clamp(static_cast<int>(std::lround(b)), 0, n - 1);
}

double PitchBins::Center(int bin) const {
  return f_min * std::pow(f_max / f_min, static_cast<double>(bin) / (n - 1));
}

PitchTrack ExtractF0(const audio::Waveform& s, const audio::StftConfig& cfg,
                     const PitchBins& bins, const YinOptions& opts) {
  PitchTrack track;
  track.hop = cfg.hop;
  const int frames = audio::NumFrames(s.size(), cfg);
  const int rate = s.sample_rate_hz;
  const int min_lag = std::max(2, static_cast<int>(std::floor(rate / bins.f_max)) - 1);
  const int max_lag = static_cast<int>(std::ceil(rate / bins.f_min)) + 1;
  const int span = opts.window + max_lag + 1;
  std::vector<double> seg(span), d;
  track.f0_hz.assign(frames, 0.0);
  track.voiced.assign(frames, false);
  const long n = static_cast<long>(s.size());
  for (int t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t) * cfg.hop - span / 2;
    double power = 0.0;
    for (int i = 0; i < span; ++i) {
      const long k = start + i;
      seg[i] = (k >= 0 && k < n) ? s.samples[k] : 0.0;
    }
    for (int i = 0; i < opts.window; ++i) power += seg[i] * seg[i];
    if (power / opts.window < opts.silence_power) continue;
    Cmndf(seg.data(), opts.window, max_lag, d);
    int lag = -1;
    for (int l = min_lag; l < max_lag; ++l) {
      if (d[l] < opts.threshold) {
        while (l + 1 < max_lag && d[l + 1] < d[l]) ++l;
        lag = l;
        break;
      }
    }
    if (lag < 0) continue;
    double refined = lag;
    const double a = d[lag - 1], b = d[lag], c = d[lag + 1];
    const double denom = a - 2 * b + c;
    if (denom > 0.0) refined += 0.5 * (a - c) / denom;
    track.voiced[t] = true;
    track.f0_hz[t] = std::clamp(rate / refined, bins.f_min, bins.f_max);
  }
  return track;
}

int PitchLabelMatrix::Argmax(int t) const {
  const float* row = values.data() + static_cast<size_t>(t) * dims;
  return static_cast<int>(std::max_element(row, row + dims) - row);
}

PitchLabelMatrix F0ToLabelMatrix(const PitchTrack& track, const PitchBins& bins) {
  PitchLabelMatrix m;
  m.frames = track.frames();
  m.dims = bins.dims();
  m.values.assign(static_cast<size_t>(m.frames) * m.dims, 0.0f);
  for (int t = 0; t < m.frames; ++t) {
    if (!track.voiced[t] || track.f0_hz[t] <= 0.0) {
      m.at(t, bins.unvoiced()) = 1.0f;
      continue;
    }
    const int b = bins.Bin(track.f0_hz[t]);
    for (int j = std::max(0, b - 3); j <= std::min(bins.n - 1, b + 3); ++j) {
      const double dj = j - b;
      m.at(t, j) = static_cast<float>(std::exp(-0.5 * dj * dj));
    }
  }
  return m;
}

void WriteLabels(const std::string& path, const PitchLabelMatrix& m) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + path);
    const std::int32_t header[4] = {m.frames, m.dims, 0, 0};
    out.write(reinterpret_cast<const char*>(header), sizeof(header));
    out.write(reinterpret_cast<const char*>(m.values.data()),
              static_cast<std::streamsize>(m.values.size() * sizeof(float)));
    if (!out) throw DataError("short write to " + path);
  }
  std::filesystem::rename(tmp, path);
}

PitchLabelMatrix ReadLabels(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::int32_t header[4];
  if (!in.read(reinterpret_cast<char*>(header), sizeof(header)))
    throw DataError("truncated label header in " + path);
  if (header[0] < 0 || header[1] <= 0)
    throw DataError("bad label shape in " + path);
  PitchLabelMatrix m;
  m.frames = header[0];
  m.dims = header[1];
  m.values.resize(static_cast<size_t>(m.frames) * m.dims);
  if (!in.read(reinterpret_cast<char*>(m.values.data()),
               static_cast<std::streamsize>(m.values.size() * sizeof(float))))
    throw DataError("truncated label data in " + path);
  return m;
}

}  // namespace spse::data
