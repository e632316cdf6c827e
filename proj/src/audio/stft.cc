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

#include "spse/audio/stft.h"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "spse/audio/fft.h"

namespace spse::audio {

void StftConfig::Validate() const {
  if (sample_rate_hz != kSampleRate) {
    throw std::invalid_argument("only 16 kHz audio is supported");
  }
  if (win_len != dft_len || hop * 2 != win_len || win_len <= 0) {
    throw std::invalid_argument(
        "STFT config needs win_len == dft_len and hop == win_len / 2");
  }
}

ComplexSpectrogram::ComplexSpectrogram(int frames, const StftConfig& config)
    : frames_(frames),
      bins_(config.num_bins()),
      config_(config),
      data_(static_cast<size_t>(frames) * config.num_bins()) {}

std::vector<double> PeriodicHann(int length) {
  std::vector<double> w(static_cast<size_t>(length));
  for (int n = 0; n < length; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * n / length);
  return w;
}

int NumFrames(size_t num_samples, const StftConfig& config) {
  return 1 + static_cast<int>(num_samples / static_cast<size_t>(config.hop));
}

namespace {

// Sample of x at index i of the reflect-padded signal (pad on both sides).
inline double Padded(std::span<const double> x, long i, long pad) {
  long j = i - pad;
  const long n = static_cast<long>(x.size());
  if (j < 0) j = -j;
  if (j >= n) j = 2 * (n - 1) - j;
  return x[static_cast<size_t>(j)];
}

}  // namespace

std::vector<double> ReflectPad(std::span<const double> x, int pad) {
  if (x.size() <= static_cast<size_t>(pad))
    throw std::length_error("ReflectPad: signal shorter than the padding");
  std::vector<double> out(x.size() + 2 * static_cast<size_t>(pad));
  for (size_t i = 0; i < out.size(); ++i) out[i] = Padded(x, static_cast<long>(i), pad);
  return out;
}

ComplexSpectrogram Stft(const Waveform& x, const StftConfig& config) {
  config.Validate();
  if (x.sample_rate_hz != config.sample_rate_hz) {
    throw std::invalid_argument("Stft: sample rate mismatch");
  }
  if (x.size() < static_cast<size_t>(config.win_len)) {
    throw std::length_error("Stft: signal of " + std::to_string(x.size()) +
                            " samples is shorter than one window");
  }
  const int frames = NumFrames(x.size(), config);
  const long pad = config.win_len / 2;
  const auto window = PeriodicHann(config.win_len);
  ComplexSpectrogram s(frames, config);
  RealFft& fft = ThreadLocalFft(config.dft_len);
  std::vector<double> buf(static_cast<size_t>(config.dft_len));
  for (int t = 0; t < frames; ++t) {
    const long start = static_cast<long>(t) * config.hop;
    for (int n = 0; n < config.win_len; ++n)
      buf[n] = window[n] * Padded(x.samples, start + n, pad);
    fft.Forward(buf, s.frame(t));
  }
  return s;
}

namespace {

std::vector<double> WindowEnvelope(int frames, const StftConfig& config) {
  const auto window = PeriodicHann(config.win_len);
  std::vector<double> env(static_cast<size_t>((frames - 1) * config.hop + config.win_len), 0.0);
  for (int t = 0; t < frames; ++t)
    for (int n = 0; n < config.win_len; ++n)
      env[static_cast<size_t>(t) * config.hop + n] += window[n] * window[n];
  return env;
}

int CheckedLength(int frames, const StftConfig& config, int length) {
  const int max_len = (frames - 1) * config.hop + config.win_len / 2;
  if (length < 0) return (frames - 1) * config.hop;
  if (length > max_len) {
    throw std::invalid_argument("Istft: requested length exceeds frame support");
  }
  return length;
}

}  // namespace

Waveform Istft(const ComplexSpectrogram& s, const StftConfig& config,
               int length) {
  config.Validate();
  if (!(s.config() == config)) {
    throw std::invalid_argument("Istft: spectrogram was made with another config");
  }
  Waveform out;
  if (s.frames() == 0) return out;
  const int n_out = CheckedLength(s.frames(), config, length);
  const int pad = config.win_len / 2;
  const auto window = PeriodicHann(config.win_len);
  const auto env = WindowEnvelope(s.frames(), config);
  std::vector<double> acc(env.size(), 0.0);
  RealFft& fft = ThreadLocalFft(config.dft_len);
  std::vector<double> buf(static_cast<size_t>(config.dft_len));
  const double scale = 1.0 / config.dft_len;
  for (int t = 0; t < s.frames(); ++t) {
    fft.Inverse(s.frame(t), buf);
    for (int n = 0; n < config.win_len; ++n)
      acc[static_cast<size_t>(t) * config.hop + n] += window[n] * buf[n] * scale;
  }
  out.samples.resize(static_cast<size_t>(n_out));
  for (int i = 0; i < n_out; ++i) {
    const double e = env[static_cast<size_t>(i + pad)];
    out.samples[i] = e > 1e-11 ? acc[static_cast<size_t>(i + pad)] / e : 0.0;
  }
  return out;
}

std::vector<std::complex<double>> IstftAdjoint(std::span<const double> grad,
                                               int frames,
                                               const StftConfig& config) {
  config.Validate();
  const int bins = config.num_bins();
  std::vector<std::complex<double>> out(static_cast<size_t>(frames) * bins);
  if (frames == 0) return out;
  CheckedLength(frames, config, static_cast<int>(grad.size()));
  const int pad = config.win_len / 2;
  const auto window = PeriodicHann(config.win_len);
  const auto env = WindowEnvelope(frames, config);
  std::vector<double> g(env.size(), 0.0);
  for (size_t i = 0; i < grad.size(); ++i) {
    const double e = env[i + pad];
    g[i + pad] = e > 1e-11 ? grad[i] / e : 0.0;
  }
  RealFft& fft = ThreadLocalFft(config.dft_len);
  std::vector<double> buf(static_cast<size_t>(config.dft_len));
  std::vector<std::complex<double>> spec(static_cast<size_t>(bins));
  const double n = config.dft_len;
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < config.win_len; ++k)
      buf[k] = window[k] * g[static_cast<size_t>(t) * config.hop + k];
    fft.Forward(buf, spec);
    // x[n] = (1/N)[Re X0 + Re X_{N/2}(-1)^n + 2 sum_k (Re X_k cos - Im X_k sin)]
    for (int k = 0; k < bins; ++k) {
      const double c = (k == 0 || k == bins - 1) ? 1.0 : 2.0;
      out[static_cast<size_t>(t) * bins + k] = {c / n * spec[k].real(),
                                                c / n * spec[k].imag()};
    }
  }
  return out;
}

CompressedSpectrum Compress(const ComplexSpectrogram& s, double gamma) {
  if (!(gamma > 0.0 && gamma <= 1.0)) {
    throw std::invalid_argument("Compress: gamma must lie in (0, 1]");
  }
  CompressedSpectrum c;
  c.frames = s.frames();
  c.bins = s.bins();
  c.gamma = gamma;
  c.real_c.resize(s.data().size());
  c.imag_c.resize(s.data().size());
  for (size_t i = 0; i < s.data().size(); ++i) {
    const auto v = s.data()[i];
    const double mag = std::abs(v);
    if (mag == 0.0) {
      c.real_c[i] = c.imag_c[i] = 0.0;
      continue;
    }
    const double scale = std::pow(mag, gamma) / mag;
    c.real_c[i] = v.real() * scale;
    c.imag_c[i] = v.imag() * scale;
  }
  return c;
}

ComplexSpectrogram Uncompress(const CompressedSpectrum& c,
                              const StftConfig& config) {
  ComplexSpectrogram s(c.frames, config);
  for (size_t i = 0; i < s.data().size(); ++i) {
    const double mag = std::hypot(c.real_c[i], c.imag_c[i]);
    if (mag == 0.0) continue;
    const double scale = std::pow(mag, 1.0 / c.gamma) / mag;
    s.data()[i] = {c.real_c[i] * scale, c.imag_c[i] * scale};
  }
  return s;
}

double Rms(std::span<const double> x) {
  if (x.empty()) return 0.0;
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return std::sqrt(acc / static_cast<double>(x.size()));
}

double SnrDb(std::span<const double> x, std::span<const double> s) {
  if (x.size() != s.size()) throw std::invalid_argument("SnrDb: length mismatch");
  double ps = 0.0, pn = 0.0;
  for (size_t i = 0; i < s.size(); ++i) {
    ps += s[i] * s[i];
    const double d = x[i] - s[i];
    pn += d * d;
  }
  if (ps == 0.0) throw std::invalid_argument("SnrDb: reference is all zero");
  if (pn == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(ps / pn);
}

}  // namespace spse::audio
