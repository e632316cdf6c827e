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

#ifndef SPSE_AUDIO_FFT_H_
#define SPSE_AUDIO_FFT_H_

#include <complex>
#include <memory>
#include <span>

namespace spse::audio {

// Real-input DFT of fixed length n backed by FFTW. Forward produces n/2 + 1
// bins with the e^{-j...} convention; Inverse is unnormalised.
class RealFft {
 public:
  explicit RealFft(int n);
  ~RealFft();
  RealFft(const RealFft&) = delete;
  RealFft& operator=(const RealFft&) = delete;

  int size() const { return n_; }
  void Forward(std::span<const double> in, std::span<std::complex<double>> out);
  void Inverse(std::span<const std::complex<double>> in, std::span<double> out);

 private:
  struct Plans;
  int n_;
  std::unique_ptr<Plans> plans_;
};

// Per-thread cached transform of the given size.
RealFft& ThreadLocalFft(int n);

}  // namespace spse::audio

#endif  // SPSE_AUDIO_FFT_H_
