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

#include "spse/audio/fft.h"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>

namespace spse::audio {

namespace {
// The FFTW planner is not thread safe.
std::mutex g_planner_mutex;
}  // namespace

struct RealFft::Plans {
  double* time = nullptr;
  fftw_complex* freq = nullptr;
  fftw_plan forward = nullptr;
  fftw_plan inverse = nullptr;
};

RealFft::RealFft(int n) : n_(n), plans_(std::make_unique<Plans>()) {
  if (n < 2) throw std::invalid_argument("RealFft: size must be >= 2");
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  plans_->time = fftw_alloc_real(n);
  plans_->freq = fftw_alloc_complex(n / 2 + 1);
  plans_->forward = fftw_plan_dft_r2c_1d(n, plans_->time, plans_->freq, FFTW_ESTIMATE);
  plans_->inverse = fftw_plan_dft_c2r_1d(n, plans_->freq, plans_->time, FFTW_ESTIMATE);
}

RealFft::~RealFft() {
  std::lock_guard<std::mutex> lock(g_planner_mutex);
  fftw_destroy_plan(plans_->forward);
  fftw_destroy_plan(plans_->inverse);
  fftw_free(plans_->time);
  fftw_free(plans_->freq);
}

void RealFft::Forward(std::span<const double> in,
                      std::span<std::complex<double>> out) {
  if (static_cast<int>(in.size()) != n_ || static_cast<int>(out.size()) != n_ / 2 + 1) {
    throw std::invalid_argument("RealFft::Forward: size mismatch");
  }
  std::copy(in.begin(), in.end(), plans_->time);
  fftw_execute(plans_->forward);
  for (int k = 0; k <= n_ / 2; ++k)
    out[k] = {plans_->freq[k][0], plans_->freq[k][1]};
}

void RealFft::Inverse(std::span<const std::complex<double>> in,
                      std::span<double> out) {
  if (static_cast<int>(in.size()) != n_ / 2 + 1 || static_cast<int>(out.size()) != n_) {
    throw std::invalid_argument("RealFft::Inverse: size mismatch");
  }
  for (int k = 0; k <= n_ / 2; ++k) {
    plans_->freq[k][0] = in[k].real();
    plans_->freq[k][1] = in[k].imag();
  }
  // c2r ignores the imaginary parts of DC and Nyquist.
  fftw_execute(plans_->inverse);
  std::copy(plans_->time, plans_->time + n_, out.begin());
}

RealFft& ThreadLocalFft(int n) {
  thread_local std::map<int, std::unique_ptr<RealFft>> cache;
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<RealFft>(n);
  return *slot;
}

}  // namespace spse::audio
