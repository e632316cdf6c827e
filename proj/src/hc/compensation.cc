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

#include "spse/hc/compensation.h"

#include <cmath>
#include <complex>

namespace spse::hc {

namespace {

constexpr double kMagEps = 1e-12;

}  // namespace

nn::Var UncompressedMagnitude(const nn::Var& compressed, double gamma) {
  nn::Shape shape = compressed.shape();
  if (shape.empty() || shape.back() != 2)
    throw std::invalid_argument("UncompressedMagnitude: last axis must be 2");
  shape.back() = 1;
  nn::Tensor out(shape);
  const float* c = compressed.value().data();
  const double half_power = 0.5 / gamma;
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const double a = c[2 * i], b = c[2 * i + 1];
    out[i] = static_cast<float>(std::pow(a * a + b * b + kMagEps, half_power));
  }
  return nn::MakeOpResult(std::move(out), {compressed}, [half_power](nn::Node& n) {
    nn::Node& in = *n.inputs[0];
    const float* c = in.value.data();
    float* gc = in.EnsureGrad().data();
    for (std::int64_t i = 0; i < n.grad.size(); ++i) {
      const double a = c[2 * i], b = c[2 * i + 1];
      const double s = 2.0 * half_power * std::pow(a * a + b * b + kMagEps, half_power - 1.0) * n.grad[i];
      gc[2 * i] += static_cast<float>(s * a);
      gc[2 * i + 1] += static_cast<float>(s * b);
    }
  });
}

nn::Var CompensateCompressed(const nn::Var& mask, const nn::Var& coarse,
                             const nn::Var& filtered_mag, double gamma) {
  const std::int64_t n = mask.value().size();
  if (coarse.value().size() != 2 * n || filtered_mag.value().size() != n)
    throw std::invalid_argument("CompensateCompressed: shape mismatch " +
                                nn::ShapeString(mask.shape()) + " / " +
                                nn::ShapeString(coarse.shape()) + " / " +
                                nn::ShapeString(filtered_mag.shape()));
  const double p = 1.0 / gamma;
  nn::Tensor out(coarse.shape());
  const float* m = mask.value().data();
  const float* u = coarse.value().data();
  const float* f = filtered_mag.value().data();
  for (std::int64_t i = 0; i < n; ++i) {
    const double a = u[2 * i], b = u[2 * i + 1];
    const double r = std::sqrt(a * a + b * b + kMagEps);
    const double g = std::pow(m[i] * (std::pow(r, p) + f[i]) + kMagEps, gamma);
    out[2 * i] = static_cast<float>(g * a / r);
    out[2 * i + 1] = static_cast<float>(g * b / r);
  }
  return nn::MakeOpResult(std::move(out), {mask, coarse, filtered_mag}, [mask, coarse, filtered_mag, n, p, gamma](nn::Node& self) {
    nn::Node& nm = *mask.node();
    nn::Node& nu = *coarse.node();
    nn::Node& nf = *filtered_mag.node();
    const float* m = nm.value.data();
    const float* u = nu.value.data();
    const float* f = nf.value.data();
    const float* gy = self.grad.data();
    float* gm = nm.requires_grad ? nm.EnsureGrad().data() : nullptr;
    float* gu = nu.requires_grad ? nu.EnsureGrad().data() : nullptr;
    float* gf = nf.requires_grad ? nf.EnsureGrad().data() : nullptr;
    for (std::int64_t i = 0; i < n; ++i) {
      const double a = u[2 * i], b = u[2 * i + 1];
      const double r = std::sqrt(a * a + b * b + kMagEps);
      const double rp = std::pow(r, p);
      const double big_a = m[i] * (rp + f[i]) + kMagEps;
      const double g = std::pow(big_a, gamma);
      const double dg_da = gamma * g / big_a;
      const double gu_dot = gy[2 * i] * a + gy[2 * i + 1] * b;
      if (gm) gm[i] += static_cast<float>(dg_da * (rp + f[i]) * gu_dot / r);
      if (gf) gf[i] += static_cast<float>(dg_da * m[i] * gu_dot / r);
      if (gu) {
        const double dg_dr = dg_da * m[i] * p * rp / r;
        const double radial = (dg_dr * r - g) / (r * r) * gu_dot / r;
        gu[2 * i] += static_cast<float>(g / r * gy[2 * i] + radial * a);
        gu[2 * i + 1] += static_cast<float>(g / r * gy[2 * i + 1] + radial * b);
      }
    }
  });
}

audio::ComplexSpectrogram Compensate(const audio::ComplexSpectrogram& coarse,
                                     const audio::ComplexSpectrogram& filtered,
                                     std::span<const double> mask) {
  if (coarse.frames() != filtered.frames() || coarse.bins() != filtered.bins() ||
      mask.size() != coarse.data().size())
    throw std::invalid_argument("Compensate: shape mismatch");
  audio::ComplexSpectrogram out(coarse.frames(), coarse.config());
  for (size_t i = 0; i < mask.size(); ++i) {
    const auto c = coarse.data()[i];
    const double mag = mask[i] * (std::abs(c) + std::abs(filtered.data()[i]));
    out.data()[i] = std::polar(mag, std::arg(c));
  }
  return out;
}

MaskModule::MaskModule(nn::ParameterSet& ps, const model::ModelConfig& cfg,
                       std::mt19937_64& rng)
    : cfg_(cfg) {
  const char* group = model::kMaskGroup;
  nn::Conv2dOptions same;
  same.pad_t = cfg.enc_kernel_t / 2;
  same.pad_f = cfg.enc_kernel_f / 2;
  input_conv_ = nn::Conv2dLayer(ps, group, "input.conv", 2, cfg.embed_dim,
                                cfg.enc_kernel_t, cfg.enc_kernel_f, same, rng);
  input_norm_ = nn::NormLayer(ps, group, "input.norm", cfg.embed_dim);
  block_ = model::MakeSeBlock(ps, group, cfg, rng);
  head_ = nn::Conv2dLayer(ps, group, "head.conv", cfg.embed_dim, 1,
                          cfg.enc_kernel_t, cfg.enc_kernel_f, same, rng);
}

nn::Var MaskModule::Forward(const nn::Var& coarse, const nn::Var& filtered_mag) const {
  const auto& s = coarse.shape();
  nn::Var feats = nn::Concat({nn::Log1p(UncompressedMagnitude(coarse, cfg_.gamma)),
                              nn::Log1p(filtered_mag)});
  nn::Var h = input_norm_.Forward(input_conv_.Forward(feats), s[1] * s[2] * cfg_.embed_dim);
  h = block_->Forward(h);
  return nn::Sigmoid(head_.Forward(h));
}

}  // namespace spse::hc
