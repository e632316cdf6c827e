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

#include "spse/pitch/comb_filter.h"

#include <cmath>
#include <fstream>

#include "spse/audio/fft.h"
#include "spse/error.h"

namespace spse::pitch {

std::vector<CombFilterSpec> DecodePitch(const data::PitchLabelMatrix& posterior,
                                        const data::PitchBins& bins,
                                        int sample_rate_hz) {
  if (posterior.dims != bins.dims())
    throw std::invalid_argument("posterior has " + std::to_string(posterior.dims) +
                                " columns, expected " + std::to_string(bins.dims()));
  std::vector<CombFilterSpec> specs(posterior.frames);
  for (int t = 0; t < posterior.frames; ++t) {
    const int b = posterior.Argmax(t);
    if (b == bins.unvoiced()) continue;
    specs[t].tau = static_cast<int>(std::lround(sample_rate_hz / bins.Center(b)));
    specs[t].weights = kCombWeights;
  }
  return specs;
}

std::vector<double> DecodedF0(std::span<const CombFilterSpec> specs, int sample_rate_hz) {
  std::vector<double> f0(specs.size(), 0.0);
  for (size_t t = 0; t < specs.size(); ++t)
    if (specs[t].voiced()) f0[t] = static_cast<double>(sample_rate_hz) / specs[t].tau;
  return f0;
}

audio::ComplexSpectrogram ApplyPitchFilter(const audio::Waveform& x,
                                           std::span<const CombFilterSpec> specs,
                                           const audio::StftConfig& cfg) {
  audio::ComplexSpectrogram out = audio::Stft(x, cfg);
  if (static_cast<int>(specs.size()) != out.frames())
    throw std::invalid_argument("ApplyPitchFilter: " + std::to_string(specs.size()) +
                                " specs for " + std::to_string(out.frames()) + " frames");
  const std::vector<double> padded = audio::ReflectPad(x.samples, cfg.win_len / 2);
  const long len = static_cast<long>(padded.size());
  const auto window = audio::PeriodicHann(cfg.win_len);
  audio::RealFft& fft = audio::ThreadLocalFft(cfg.dft_len);
  std::vector<double> buf(cfg.dft_len);
  auto at = [&](long i) { return (i >= 0 && i < len) ? padded[i] : 0.0; };
  for (int t = 0; t < out.frames(); ++t) {
    const CombFilterSpec& spec = specs[t];
    if (!spec.voiced()) continue;
    const long start = static_cast<long>(t) * cfg.hop;
    for (int n = 0; n < cfg.win_len; ++n) {
      const long i = start + n;
      const double y = spec.weights[0] * at(i + spec.tau) + spec.weights[1] * at(i) +
                       spec.weights[2] * at(i - spec.tau);
      buf[n] = window[n] * y;
    }
    fft.Forward(buf, out.frame(t));
  }
  return out;
}

double CombMagnitudeResponse(const CombFilterSpec& spec, double omega) {
  const double phase = omega * spec.tau;
  const std::complex<double> h =
      spec.weights[1] + spec.weights[0] * std::polar(1.0, phase) +
      spec.weights[2] * std::polar(1.0, -phase);
  return std::abs(h);
}

void WriteF0Dump(const std::string& path, std::span<const CombFilterSpec> specs,
                 int sample_rate_hz) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path);
  const auto f0 = DecodedF0(specs, sample_rate_hz);
  for (size_t t = 0; t < specs.size(); ++t)
    out << t << ' ' << f0[t] << ' ' << (specs[t].voiced() ? 1 : 0) << '\n';
}

}  // namespace spse::pitch
