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

#include "spse/loss/losses.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace spse::loss {

using audio::CompressedSpectrum;

void LossWeights::Validate() const {
  if (!(alpha > 0 && beta > 0 && lambda >= 0 && gamma > 0 && gamma <= 1 &&
        eps_log > 0 && eps_compress > 0)) {
    throw std::invalid_argument("LossWeights: weights must be positive, gamma in (0, 1]");
  }
}

OverallTarget MakeTarget(const audio::Waveform& s, const audio::StftConfig& cfg,
                         double gamma) {
  OverallTarget t;
  t.compressed = audio::Compress(audio::Stft(s, cfg), gamma);
  t.waveform = s.samples;
  return t;
}

namespace {

void CheckCompatible(const CompressedSpectrum& a, const CompressedSpectrum& b) {
  if (a.frames != b.frames || a.bins != b.bins ||
      a.real_c.size() != b.real_c.size() || a.imag_c.size() != b.imag_c.size()) {
    throw std::invalid_argument("loss: spectrum shapes differ");
  }
}

CompressedSpectrum ZerosLike(const CompressedSpectrum& c) {
  CompressedSpectrum g;
  g.frames = c.frames;
  g.bins = c.bins;
  g.gamma = c.gamma;
  g.real_c.assign(c.real_c.size(), 0.0);
  g.imag_c.assign(c.imag_c.size(), 0.0);
  return g;
}

}  // namespace

double FreqLossCompressed(const CompressedSpectrum& est,
                          const CompressedSpectrum& ref, const LossWeights& w,
                          CompressedSpectrum* grad, LossBreakdown* parts) {
  CheckCompatible(est, ref);
  if (grad) *grad = ZerosLike(est);
  double mag = 0.0, ri = 0.0;
  for (size_t i = 0; i < est.real_c.size(); ++i) {
    const double a = est.real_c[i], b = est.imag_c[i];
    const double ar = ref.real_c[i], br = ref.imag_c[i];
    const double me = std::sqrt(a * a + b * b + w.eps_compress);
    const double mr = std::sqrt(ar * ar + br * br + w.eps_compress);
    const double dm = me - mr, da = a - ar, db = b - br;
    mag += dm * dm;
    ri += da * da + db * db;
    if (grad) {
      grad->real_c[i] = 2.0 * w.alpha * dm * a / me + 2.0 * w.beta * da;
      grad->imag_c[i] = 2.0 * w.alpha * dm * b / me + 2.0 * w.beta * db;
    }
  }
  const double total = w.alpha * mag + w.beta * ri;
  if (parts) {
    parts->mag = mag;
    parts->ri = ri;
    parts->freq = total;
  }
  return total;
}

double LossFreq(const audio::ComplexSpectrogram& est,
                const audio::ComplexSpectrogram& ref, const LossWeights& w) {
  return FreqLossCompressed(audio::Compress(est, w.gamma),
                            audio::Compress(ref, w.gamma), w);
}

double LossTemp(std::span<const double> est, std::span<const double> ref,
                double eps, std::vector<double>* grad) {
  if (est.size() != ref.size()) throw std::invalid_argument("LossTemp: length mismatch");
  if (grad) grad->assign(est.size(), 0.0);
  const double inv_ln10 = 1.0 / std::numbers::ln10;
  double acc = 0.0;
  for (size_t t = 0; t < est.size(); ++t) {
    const double r = ref[t] - est[t];
    const double num = r * r + eps;
    acc += std::log10(num) - std::log10(ref[t] * ref[t] + eps);
    if (grad) (*grad)[t] = -r / num * inv_ln10;
  }
  return 0.5 * acc;
}

double LossOvrlCompressed(const CompressedSpectrum& est,
                          const OverallTarget& target,
                          const audio::StftConfig& cfg, const LossWeights& w,
                          CompressedSpectrum* grad, LossBreakdown* parts) {
  LossBreakdown local;
  const double freq = FreqLossCompressed(est, target.compressed, w, grad, &local);
  double temp = 0.0;
  if (w.lambda != 0.0) {
    const double p = 1.0 / w.gamma;
    audio::ComplexSpectrogram spec(est.frames, cfg);
    for (size_t i = 0; i < est.real_c.size(); ++i) {
      const double a = est.real_c[i], b = est.imag_c[i];
      const double r = std::hypot(a, b);
      const double s = r > 0.0 ? std::pow(r, p - 1.0) : 0.0;
      spec.data()[i] = {a * s, b * s};
    }
    const auto wave = audio::Istft(spec, cfg, static_cast<int>(target.waveform.size()));
    std::vector<double> gwave;
    temp = LossTemp(wave.samples, target.waveform, w.eps_log, grad ? &gwave : nullptr);
    if (grad) {
      for (auto& g : gwave) g *= w.lambda;
      const auto gspec = audio::IstftAdjoint(gwave, est.frames, cfg);
      for (size_t i = 0; i < est.real_c.size(); ++i) {
        const double a = est.real_c[i], b = est.imag_c[i];
        const double r2 = a * a + b * b;
        if (r2 == 0.0) continue;
        const double r = std::sqrt(r2);
        const double s = std::pow(r, p - 1.0);
        const double t = (p - 1.0) * std::pow(r, p - 3.0);
        const double gr = gspec[i].real(), gi = gspec[i].imag();
        grad->real_c[i] += gr * (s + t * a * a) + gi * (t * a * b);
        grad->imag_c[i] += gr * (t * a * b) + gi * (s + t * b * b);
      }
    }
  }
  local.temp = temp;
  local.total = freq + w.lambda * temp;
  if (parts) *parts = local;
  return local.total;
}

double LossOvrl(const audio::ComplexSpectrogram& est_spec,
                const audio::ComplexSpectrogram& ref_spec,
                std::span<const double> est_wave,
                std::span<const double> ref_wave, const LossWeights& w) {
  return LossFreq(est_spec, ref_spec, w) +
         w.lambda * LossTemp(est_wave, ref_wave, w.eps_log);
}

double LossPl(std::span<const CompressedSpectrum> outputs,
              std::span<const OverallTarget> targets,
              const audio::StftConfig& cfg, const LossWeights& w,
              std::vector<CompressedSpectrum>* grads) {
  if (outputs.size() != targets.size()) {
    throw std::invalid_argument("LossPl: " + std::to_string(outputs.size()) +
                                " outputs vs " + std::to_string(targets.size()) +
                                " targets");
  }
  if (grads) grads->resize(outputs.size());
  double total = 0.0;
  for (size_t k = 0; k < outputs.size(); ++k) {
    total += LossOvrlCompressed(outputs[k], targets[k], cfg, w,
                                grads ? &(*grads)[k] : nullptr);
  }
  return total;
}

double LossPitchBce(std::span<const double> estimate,
                    std::span<const double> target, std::vector<double>* grad) {
  if (estimate.size() != target.size()) {
    throw std::invalid_argument("LossPitchBce: shape mismatch");
  }
  if (grad) grad->assign(estimate.size(), 0.0);
  double acc = 0.0;
  for (size_t i = 0; i < estimate.size(); ++i) {
    const double q = std::clamp(estimate[i], kBceClamp, 1.0 - kBceClamp);
    const double p = target[i];
    acc -= p * std::log(q) + (1.0 - p) * std::log(1.0 - q);
    if (grad && estimate[i] > kBceClamp && estimate[i] < 1.0 - kBceClamp) {
      (*grad)[i] = -p / q + (1.0 - p) / (1.0 - q);
    }
  }
  return acc;
}

double LossPitchBceLogits(std::span<const double> logits,
                          std::span<const double> target,
                          std::vector<double>* grad) {
  if (logits.size() != target.size()) {
    throw std::invalid_argument("LossPitchBceLogits: shape mismatch");
  }
  if (grad) grad->assign(logits.size(), 0.0);
  double acc = 0.0;
  for (size_t i = 0; i < logits.size(); ++i) {
    const double z = logits[i];
    // softplus(z) - p z, written to avoid overflow
    const double softplus = std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
    acc += softplus - target[i] * z;
    if (grad) (*grad)[i] = 1.0 / (1.0 + std::exp(-z)) - target[i];
  }
  return acc;
}

}  // namespace spse::loss
