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

#include "spse/audio/resample.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace spse::audio {

namespace {

std::vector<double> LowPass(int up, int down) {
  const int rate = std::max(up, down);
  const int half = 10 * rate;
  const double cutoff = 1.0 / rate;  // fraction of Nyquist
  const double beta = 5.0;
  std::vector<double> h(2 * static_cast<size_t>(half) + 1);
  double sum = 0.0;
  for (int n = -half; n <= half; ++n) {
    const double x = cutoff * n;
    const double sinc = n == 0 ? 1.0 : std::sin(std::numbers::pi * x) / (std::numbers::pi * x);
    const double r = static_cast<double>(n) / half;
    const double win = std::cyl_bessel_i(0.0, beta * std::sqrt(std::max(0.0, 1.0 - r * r))) /
                       std::cyl_bessel_i(0.0, beta);
    h[n + half] = cutoff * sinc * win;
    sum += h[n + half];
  }
  for (double& v : h) v *= up / sum;
  return h;
}

}  // namespace

std::vector<double> ResamplePoly(std::span<const double> x, int up, int down) {
  if (up <= 0 || down <= 0) throw std::invalid_argument("ResamplePoly: rates must be positive");
  const int g = std::gcd(up, down);
  up /= g;
  down /= g;
  if (up == 1 && down == 1) return {x.begin(), x.end()};
  const auto h = LowPass(up, down);
  const long half = static_cast<long>(h.size() / 2);
  const long n_in = static_cast<long>(x.size());
  const long n_out = (n_in * up + down - 1) / down;
  std::vector<double> y(static_cast<size_t>(n_out), 0.0);
  for (long m = 0; m < n_out; ++m) {
    // Upsampled index i = m * down + half - k must be a multiple of up.
    const long centre = m * down;
    double acc = 0.0;
    const long lo = centre - half, hi = centre + half;
    long i = lo + ((-lo) % up + up) % up;  // first multiple of up >= lo
    for (; i <= hi; i += up) {
      const long j = i / up;
      if (i < 0 || j >= n_in) continue;
      acc += h[static_cast<size_t>(centre + half - i)] * x[static_cast<size_t>(j)];
    }
    y[static_cast<size_t>(m)] = acc;
  }
  return y;
}

}  // namespace spse::audio
