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

#ifndef SPSE_LOSS_LOSSES_H_
#define SPSE_LOSS_LOSSES_H_

#include <span>
#include <vector>

#include "spse/audio/stft.h"

namespace spse::loss {

struct LossWeights {
  double alpha = 0.7;   // magnitude term
  double beta = 0.3;    // real/imag term
  double lambda = 1.0;  // temporal term
  double gamma = 1.0 / 3.0;
  double eps_log = 1e-8;        // inside the temporal logs
  double eps_compress = 1e-12;  // keeps |c| differentiable at zero

  void Validate() const;
};

struct LossBreakdown {
  double mag = 0.0;
  double ri = 0.0;
  double freq = 0.0;
  double temp = 0.0;
  double total = 0.0;
};

// One decoder target: compressed spectrum and the matching waveform.
struct OverallTarget {
  audio::CompressedSpectrum compressed;
  std::vector<double> waveform;
};

OverallTarget MakeTarget(const audio::Waveform& s, const audio::StftConfig& cfg,
                         double gamma);

// alpha * sum (|S^c|_eps - |est^c|_eps)^2 + beta * sum |S^c - est^c|^2 with
// |c|_eps = sqrt(re^2 + im^2 + eps). Sums, not means. grad (optional) gets
// dL/d(est real_c, imag_c).
double FreqLossCompressed(const audio::CompressedSpectrum& est,
                          const audio::CompressedSpectrum& ref,
                          const LossWeights& w,
                          audio::CompressedSpectrum* grad = nullptr,
                          LossBreakdown* parts = nullptr);

// Frequency loss between complex spectrograms (both compressed first).
double LossFreq(const audio::ComplexSpectrogram& est,
                const audio::ComplexSpectrogram& ref, const LossWeights& w);

// 0.5 * sum_t [log10((s - est)^2 + eps) - log10(s^2 + eps)].
double LossTemp(std::span<const double> est, std::span<const double> ref,
                double eps, std::vector<double>* grad = nullptr);

// Frequency + lambda * temporal loss for an estimate given in the compressed
// domain (what the decoders emit). The waveform leg uncompresses and runs the
// inverse STFT to the target length. grad is dL/d(est).
double LossOvrlCompressed(const audio::CompressedSpectrum& est,
                          const OverallTarget& target,
                          const audio::StftConfig& cfg, const LossWeights& w,
                          audio::CompressedSpectrum* grad = nullptr,
                          LossBreakdown* parts = nullptr);

// Same objective on explicit spectrogram/waveform pairs.
double LossOvrl(const audio::ComplexSpectrogram& est_spec,
                const audio::ComplexSpectrogram& ref_spec,
                std::span<const double> est_wave,
                std::span<const double> ref_wave, const LossWeights& w);

// The harmonic-compensation objective is the overall loss on the final output.
inline double LossHc(const audio::ComplexSpectrogram& est_spec,
                     const audio::ComplexSpectrogram& ref_spec,
                     std::span<const double> est_wave,
                     std::span<const double> ref_wave, const LossWeights& w) {
  return LossOvrl(est_spec, ref_spec, est_wave, ref_wave, w);
}

// Sum of overall losses over the progressive outputs. Throws
// std::invalid_argument when the counts differ.
double LossPl(std::span<const audio::CompressedSpectrum> outputs,
              std::span<const OverallTarget> targets,
              const audio::StftConfig& cfg, const LossWeights& w,
              std::vector<audio::CompressedSpectrum>* grads = nullptr);

inline constexpr double kBceClamp = 1e-7;

// Summed binary cross entropy (natural log) with estimates clamped to
// [1e-7, 1 - 1e-7]. grad is zero where the clamp is active.
double LossPitchBce(std::span<const double> estimate,
                    std::span<const double> target,
                    std::vector<double>* grad = nullptr);

// Same objective written on pre-sigmoid logits; numerically stable, used by
// the training loop.
double LossPitchBceLogits(std::span<const double> logits,
                          std::span<const double> target,
                          std::vector<double>* grad = nullptr);

}  // namespace spse::loss

#endif  // SPSE_LOSS_LOSSES_H_
