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

#ifndef SPSE_AUDIO_STFT_H_
#define SPSE_AUDIO_STFT_H_

#include <complex>
#include <span>
#include <vector>

namespace spse::audio {

inline constexpr int kSampleRate = 16000;

struct StftConfig {
  int sample_rate_hz = kSampleRate;
  int win_len = 512;  // 32 ms
  int hop = 256;      // 16 ms
  int dft_len = 512;

  int num_bins() const { return dft_len / 2 + 1; }
  // Throws std::invalid_argument unless win_len == dft_len and hop ==
  // win_len / 2 (periodic Hann is COLA at 50% overlap).
  void Validate() const;
  bool operator==(const StftConfig&) const = default;
};

struct Waveform {
  std::vector<double> samples;
  int sample_rate_hz = kSampleRate;

  size_t size() const { return samples.size(); }
};

class ComplexSpectrogram {
 public:
  ComplexSpectrogram() = default;
  ComplexSpectrogram(int frames, const StftConfig& config);

  int frames() const { return frames_; }
  int bins() const { return bins_; }
  const StftConfig& config() const { return config_; }

  std::complex<double>& at(int t, int f) { return data_[static_cast<size_t>(t) * bins_ + f]; }
  const std::complex<double>& at(int t, int f) const {
    return data_[static_cast<size_t>(t) * bins_ + f];
  }
  std::span<std::complex<double>> frame(int t) {
    return {data_.data() + static_cast<size_t>(t) * bins_, static_cast<size_t>(bins_)};
  }
  std::span<const std::complex<double>> frame(int t) const {
    return {data_.data() + static_cast<size_t>(t) * bins_, static_cast<size_t>(bins_)};
  }
  std::vector<std::complex<double>>& data() { return data_; }
  const std::vector<std::complex<double>>& data() const { return data_; }

 private:
  int frames_ = 0;
  int bins_ = 0;
  StftConfig config_;
  std::vector<std::complex<double>> data_;
};

// Magnitude-compressed spectrum |S|^gamma e^{j angle(S)} split into parts.
struct CompressedSpectrum {
  int frames = 0;
  int bins = 0;
  double gamma = 1.0 / 3.0;
  std::vector<double> real_c;
  std::vector<double> imag_c;
};

// Periodic Hann window of the given length.
std::vector<double> PeriodicHann(int length);

// Number of frames for a signal of n samples under centre (reflect) padding
// of win_len / 2 on both sides: 1 + n / hop.
int NumFrames(size_t num_samples, const StftConfig& config);

// x with `pad` reflected samples on both sides (edge sample not repeated).
std::vector<double> ReflectPad(std::span<const double> x, int pad);

// Reflect-pads by win_len / 2 and frames with a periodic Hann window.
// Throws std::length_error if the signal is shorter than one window.
ComplexSpectrogram Stft(const Waveform& x, const StftConfig& config);

// Weighted overlap-add inverse with window-square normalisation. Output has
// `length` samples when given (at most (T - 1) * hop + win_len / 2), otherwise
// (T - 1) * hop. Throws on a config other than the one given.
Waveform Istft(const ComplexSpectrogram& s, const StftConfig& config,
               int length = -1);

// Adjoint of Istft: maps dL/dx (length samples) to dL/d(Re S), dL/d(Im S)
// packed as complex values, for T frames.
std::vector<std::complex<double>> IstftAdjoint(std::span<const double> grad,
                                               int frames,
                                               const StftConfig& config);

// Exact |S|^gamma compression with phase kept; zero maps to zero.
CompressedSpectrum Compress(const ComplexSpectrogram& s, double gamma);
// Inverse of Compress.
ComplexSpectrogram Uncompress(const CompressedSpectrum& c,
                              const StftConfig& config);

// 10 log10(P_s / P_{x - s}) over the whole utterance. Returns +inf when
// x == s; throws std::invalid_argument for length mismatch or silent s.
double SnrDb(std::span<const double> x, std::span<const double> s);

double Rms(std::span<const double> x);

}  // namespace spse::audio

#endif  // SPSE_AUDIO_STFT_H_
