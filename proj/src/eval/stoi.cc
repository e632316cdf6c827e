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

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "spse/audio/fft.h"
#include "spse/audio/resample.h"
#include "spse/error.h"
#include "spse/eval/metrics.h"

namespace spse::eval {

namespace {

constexpr int kRate = 10000;
constexpr int kFrame = 256;
constexpr int kHop = kFrame / 2;
constexpr int kFft = 512;
constexpr int kBands = 15;
constexpr double kMinFreq = 150.0;
constexpr int kSegment = 30;
constexpr double kBeta = -15.0;
constexpr double kDynRange = 40.0;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// Symmetric Hann without its zero end points.
std::vector<double> Window() {
  std::vector<double> w(kFrame);
  for (int n = 0; n < kFrame; ++n)
    w[n] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * (n + 1) / (kFrame + 1));
  return w;
}

int CountFrames(size_t n) {
  return n > static_cast<size_t>(kFrame) ? static_cast<int>((n - kFrame - 1) / kHop) + 1 : 0;
}

// Drops frames of both signals where the clean frame is more than 40 dB
// below the loudest clean frame, then overlap-adds what is left.
void RemoveSilentFrames(std::vector<double>& clean, std::vector<double>& proc) {
  const auto w = Window();
  const int frames = CountFrames(clean.size());
  std::vector<double> energy(frames);
  for (int t = 0; t < frames; ++t) {
    double e = 0.0;
    for (int n = 0; n < kFrame; ++n) {
      const double v = w[n] * clean[static_cast<size_t>(t) * kHop + n];
      e += v * v;
    }
    energy[t] = 20.0 * std::log10(std::sqrt(e) + kEps);
  }
  const double top = frames ? *std::max_element(energy.begin(), energy.end()) : 0.0;
  std::vector<int> keep;
  for (int t = 0; t < frames; ++t)
    if (top - kDynRange - energy[t] < 0) keep.push_back(t);
  const size_t out_len = keep.empty() ? 0 : (keep.size() - 1) * kHop + kFrame;
  std::vector<double> c(out_len, 0.0), p(out_len, 0.0);
  for (size_t k = 0; k < keep.size(); ++k)
    for (int n = 0; n < kFrame; ++n) {
      const size_t src = static_cast<size_t>(keep[k]) * kHop + n;
      c[k * kHop + n] += w[n] * clean[src];
      p[k * kHop + n] += w[n] * proc[src];
    }
  clean.swap(c);
  proc.swap(p);
}

// Band index ranges [lo, hi) over the kFft / 2 + 1 bins.
std::vector<std::pair<int, int>> ThirdOctaveBands() {
  const int bins = kFft / 2 + 1;
  auto nearest = [&](double f) {
    int best = 0;
    double dist = std::numeric_limits<double>::infinity();
    for (int b = 0; b < bins; ++b) {
      const double d = std::pow(static_cast<double>(b) * kRate / kFft - f, 2);
      if (d < dist) {
        dist = d;
        best = b;
      }
    }
    return best;
  };
  std::vector<std::pair<int, int>> bands;
  for (int k = 0; k < kBands; ++k) {
    bands.emplace_back(nearest(kMinFreq * std::pow(2.0, (2.0 * k - 1.0) / 6.0)),
                       nearest(kMinFreq * std::pow(2.0, (2.0 * k + 1.0) / 6.0)));
  }
  return bands;
}

// Third-octave band envelopes, [frames][band].
std::vector<std::array<double, kBands>> BandEnvelopes(const std::vector<double>& x) {
  static const auto bands = ThirdOctaveBands();
  const auto w = Window();
  const int frames = CountFrames(x.size());
  audio::RealFft& fft = audio::ThreadLocalFft(kFft);
  std::vector<double> buf(kFft);
  std::vector<std::complex<double>> spec(kFft / 2 + 1);
  std::vector<std::array<double, kBands>> out(frames);
  for (int t = 0; t < frames; ++t) {
    std::fill(buf.begin(), buf.end(), 0.0);
    for (int n = 0; n < kFrame; ++n) buf[n] = w[n] * x[static_cast<size_t>(t) * kHop + n];
    fft.Forward(buf, spec);
    for (int j = 0; j < kBands; ++j) {
      double e = 0.0;
      for (int b = bands[j].first; b < bands[j].second; ++b) e += std::norm(spec[b]);
      out[t][j] = std::sqrt(e);
    }
  }
  return out;
}

}  // namespace

double Stoi(std::span<const double> processed, std::span<const double> clean,
            int sample_rate_hz) {
  if (processed.size() != clean.size())
    throw std::invalid_argument("Stoi: processed and clean lengths differ");
  if (sample_rate_hz <= 0) throw std::invalid_argument("Stoi: bad sample rate");
  std::vector<double> c = audio::ResamplePoly(clean, kRate, sample_rate_hz);
  std::vector<double> p = audio::ResamplePoly(processed, kRate, sample_rate_hz);
  RemoveSilentFrames(c, p);
  const auto x = BandEnvelopes(c);
  const auto y = BandEnvelopes(p);
  const int frames = static_cast<int>(x.size());
  if (frames < kSegment) {
    throw DataError("Stoi: only " + std::to_string(frames) +
                    " speech-active frames, need " + std::to_string(kSegment));
  }
  const double clip = std::pow(10.0, -kBeta / 20.0);
  double total = 0.0;
  int count = 0;
  std::array<double, kSegment> xs, ys;
  for (int m = kSegment; m <= frames; ++m) {
    for (int j = 0; j < kBands; ++j) {
      double nx = 0.0, ny = 0.0;
      for (int n = 0; n < kSegment; ++n) {
        xs[n] = x[m - kSegment + n][j];
        ys[n] = y[m - kSegment + n][j];
        nx += xs[n] * xs[n];
        ny += ys[n] * ys[n];
      }
      const double alpha = std::sqrt(nx) / (std::sqrt(ny) + kEps);
      double mx = 0.0, my = 0.0;
      for (int n = 0; n < kSegment; ++n) {
        ys[n] = std::min(alpha * ys[n], xs[n] * (1.0 + clip));
        mx += xs[n];
        my += ys[n];
      }
      mx /= kSegment;
      my /= kSegment;
      double sxy = 0.0, sxx = 0.0, syy = 0.0;
      for (int n = 0; n < kSegment; ++n) {
        const double a = xs[n] - mx, b = ys[n] - my;
        sxy += a * b;
        sxx += a * a;
        syy += b * b;
      }
      total += sxy / ((std::sqrt(sxx) + kEps) * (std::sqrt(syy) + kEps));
      ++count;
    }
  }
  return total / count;
}

}  // namespace spse::eval
