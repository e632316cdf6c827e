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

#ifndef SPSE_TESTS_LOSS_ORACLES_H_
#define SPSE_TESTS_LOSS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "spse/loss/losses.h"

namespace spse::testing {

// Central-difference checks of the analytic loss gradients at randomly drawn
// points, keeping every residual at least 1e-3 away from zero so the
// objectives are smooth in a neighbourhood of width h.
struct GradCheckResult {
  int points = 0;
  double max_rel_error = 0.0;
};

inline double RelError(double analytic, double numeric) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), 1e-8});
}

inline GradCheckResult CheckFreqLossGradient(int points, std::uint64_t seed,
                                             double h = 1e-4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  loss::LossWeights w;
  GradCheckResult res;
  audio::CompressedSpectrum est, ref, grad;
  est.frames = ref.frames = 1;
  est.bins = ref.bins = 4;
  est.real_c.resize(4);
  est.imag_c.resize(4);
  ref.real_c.resize(4);
  ref.imag_c.resize(4);
  while (res.points < points) {
    for (int i = 0; i < 4; ++i) {
      est.real_c[i] = u(rng);
      est.imag_c[i] = u(rng);
      ref.real_c[i] = u(rng);
      ref.imag_c[i] = u(rng);
    }
    const int i = res.points % 4;
    const bool imag = (res.points / 4) % 2 == 1;
    auto& slot = imag ? est.imag_c[i] : est.real_c[i];
    const double mag_e = std::hypot(est.real_c[i], est.imag_c[i]);
    const double mag_r = std::hypot(ref.real_c[i], ref.imag_c[i]);
    if (std::abs(slot - (imag ? ref.imag_c[i] : ref.real_c[i])) < 1e-3 ||
        std::abs(mag_e - mag_r) < 1e-3 || mag_e < 1e-3) {
      continue;
    }
    loss::FreqLossCompressed(est, ref, w, &grad);
    const double analytic = imag ? grad.imag_c[i] : grad.real_c[i];
    const double x0 = slot;
    slot = x0 + h;
    const double lp = loss::FreqLossCompressed(est, ref, w);
    slot = x0 - h;
    const double lm = loss::FreqLossCompressed(est, ref, w);
    slot = x0;
    res.max_rel_error = std::max(res.max_rel_error, RelError(analytic, (lp - lm) / (2 * h)));
    ++res.points;
  }
  return res;
}

inline GradCheckResult CheckTempLossGradient(int points, std::uint64_t seed,
                                             double h = 1e-4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  GradCheckResult res;
  std::vector<double> est(8), ref(8), grad;
  while (res.points < points) {
    for (int i = 0; i < 8; ++i) {
      est[i] = u(rng);
      ref[i] = u(rng);
    }
    const int i = res.points % 8;
    // Central differences of log(r^2) carry a relative error of h^2 / (3 r^2),
    // so residuals below ~6e-3 cannot reach 1e-4 at h = 1e-4.
    if (std::abs(ref[i] - est[i]) < 1e-2) continue;
    loss::LossTemp(est, ref, 1e-8, &grad);
    const double x0 = est[i];
    est[i] = x0 + h;
    const double lp = loss::LossTemp(est, ref, 1e-8);
    est[i] = x0 - h;
    const double lm = loss::LossTemp(est, ref, 1e-8);
    est[i] = x0;
    res.max_rel_error = std::max(res.max_rel_error, RelError(grad[i], (lp - lm) / (2 * h)));
    ++res.points;
  }
  return res;
}

inline GradCheckResult CheckPitchBceGradient(int points, std::uint64_t seed,
                                             double h = 1e-4) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  GradCheckResult res;
  std::vector<double> est(6), tgt(6), grad;
  while (res.points < points) {
    for (int i = 0; i < 6; ++i) {
      est[i] = 0.01 + 0.98 * u(rng);
      tgt[i] = u(rng) < 0.3 ? 1.0 : (u(rng) < 0.5 ? 0.0 : u(rng));
    }
    const int i = res.points % 6;
    if (std::abs(est[i] - tgt[i]) < 1e-3) continue;
    loss::LossPitchBce(est, tgt, &grad);
    const double x0 = est[i];
    est[i] = x0 + h;
    const double lp = loss::LossPitchBce(est, tgt);
    est[i] = x0 - h;
    const double lm = loss::LossPitchBce(est, tgt);
    est[i] = x0;
    res.max_rel_error = std::max(res.max_rel_error, RelError(grad[i], (lp - lm) / (2 * h)));
    ++res.points;
  }
  return res;
}

}  // namespace spse::testing

#endif  // SPSE_TESTS_LOSS_ORACLES_H_
