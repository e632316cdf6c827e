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

#include "spse/model/progressive_model.h"

#include <cmath>

#include "spse/error.h"

namespace spse::model {

using nn::Tensor;
using nn::Var;

Var ComplexConvWeight(const Var& re, const Var& im) {
  const auto& s = re.shape();
  if (s.size() != 4 || s[2] != 1 || im.shape() != s)
    throw std::invalid_argument("complex kernel must be [kt, kf, 1, C]");
  const std::int64_t taps = s[0] * s[1], c = s[3];
  Tensor w({s[0], s[1], 2, 2 * c});
  const float* a = re.value().data();
  const float* b = im.value().data();
  for (std::int64_t k = 0; k < taps; ++k)
    for (std::int64_t j = 0; j < c; ++j) {
      float* row = w.data() + k * 4 * c;
      row[j] = a[k * c + j];
      row[c + j] = b[k * c + j];
      row[2 * c + j] = -b[k * c + j];
      row[3 * c + j] = a[k * c + j];
    }
  return nn::MakeOpResult(std::move(w), {re, im}, [taps, c](nn::Node& n) {
    const float* g = n.grad.data();
    nn::Node& ra = *n.inputs[0];
    nn::Node& rb = *n.inputs[1];
    for (std::int64_t k = 0; k < taps; ++k)
      for (std::int64_t j = 0; j < c; ++j) {
        const float* row = g + k * 4 * c;
        if (ra.requires_grad) ra.EnsureGrad()[k * c + j] += row[j] + row[3 * c + j];
        if (rb.requires_grad) rb.EnsureGrad()[k * c + j] += row[c + j] - row[2 * c + j];
      }
  });
}

Var ComplexMagnitudePow(const Var& x, float power, float eps) {
  const std::int64_t c2 = x.value().dim(-1);
  if (c2 % 2 != 0) throw std::invalid_argument("channel count must be even");
  const std::int64_t c = c2 / 2, rows = x.value().size() / c2;
  nn::Shape shape = x.shape();
  shape.back() = c;
  Tensor out(shape);
  const float* px = x.value().data();
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t j = 0; j < c; ++j) {
      const double re = px[r * c2 + j], im = px[r * c2 + c + j];
      out[r * c + j] = static_cast<float>(std::pow(re * re + im * im + eps, 0.5 * power));
    }
  return nn::MakeOpResult(std::move(out), {x}, [rows, c, c2, power, eps](nn::Node& n) {
    nn::Node& in = *n.inputs[0];
    const float* px = in.value.data();
    const float* g = n.grad.data();
    float* gx = in.EnsureGrad().data();
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t j = 0; j < c; ++j) {
        const double re = px[r * c2 + j], im = px[r * c2 + c + j];
        const double s = power * std::pow(re * re + im * im + eps, 0.5 * power - 1.0) *
                         g[r * c + j];
        gx[r * c2 + j] += static_cast<float>(s * re);
        gx[r * c2 + c + j] += static_cast<float>(s * im);
      }
  });
}

PhaseEncoder::PhaseEncoder(nn::ParameterSet& ps, const ModelConfig& cfg,
                           std::mt19937_64& rng) {
  const int c = cfg.pe_channels;
  const float bound = 1.0f / std::sqrt(3.0f * 2.0f);
  weight_re_ = ps.Create(kPhaseEncoderGroup, "conv.weight_re", nn::UniformInit({3, 1, 1, c}, bound, rng));
  weight_im_ = ps.Create(kPhaseEncoderGroup, "conv.weight_im", nn::UniformInit({3, 1, 1, c}, bound, rng));
  bias_ = ps.Create(kPhaseEncoderGroup, "conv.bias", nn::UniformInit({2 * c}, bound, rng));
}

Var PhaseEncoder::Forward(const Var& spec) const {
  nn::Conv2dOptions opts;
  opts.pad_t = 1;
  Var z = nn::Conv2d(spec, ComplexConvWeight(weight_re_, weight_im_), bias_, opts);
  return ComplexMagnitudePow(z, 0.5f);
}

ProgressiveModel::ProgressiveModel(nn::ParameterSet& ps, const ModelConfig& cfg,
                                   std::mt19937_64& rng)
    : cfg_(cfg) {
  cfg_.Validate();
  int in_channels = 2;
  if (cfg_.use_phase_encoder) {
    phase_encoder_ = PhaseEncoder(ps, cfg_, rng);
    in_channels = cfg_.pe_channels;
  }
  nn::Conv2dOptions same;
  same.pad_t = cfg_.enc_kernel_t / 2;
  same.pad_f = cfg_.enc_kernel_f / 2;
  encoder_conv_ = nn::Conv2dLayer(ps, kEncoderGroup, "conv", in_channels, cfg_.embed_dim,
                                  cfg_.enc_kernel_t, cfg_.enc_kernel_f, same, rng);
  encoder_norm_ = nn::NormLayer(ps, kEncoderGroup, "norm", cfg_.embed_dim);
  for (int i = 0; i < cfg_.num_blocks(); ++i)
    blocks_.push_back(MakeSeBlock(ps, BlockGroup(i), cfg_, rng));
  decoders_.resize(cfg_.num_blocks());
  for (int k = 1; k <= cfg_.num_blocks(); ++k) {
    if (!cfg_.HasDecoder(k)) continue;
    decoders_[k - 1] = nn::Conv2dLayer(ps, DecoderGroup(k), "conv", cfg_.embed_dim, 2,
                                       cfg_.enc_kernel_t, cfg_.enc_kernel_f, same, rng);
  }
}

Var ProgressiveModel::Embed(const Var& spec) const {
  const auto& s = spec.shape();
  if (s.size() != 4 || s[3] != 2 || s[2] != cfg_.num_bins)
    throw std::invalid_argument("expected [B, T, " + std::to_string(cfg_.num_bins) +
                                ", 2] input, got " + nn::ShapeString(s));
  Var x = cfg_.use_phase_encoder ? phase_encoder_.Forward(spec) : spec;
  x = encoder_conv_.Forward(x);
  return encoder_norm_.Forward(x, s[1] * s[2] * cfg_.embed_dim);
}

Var ProgressiveModel::Block(int index, const Var& stream) const {
  return blocks_.at(index)->Forward(stream);
}

Var ProgressiveModel::Decode(int stage, const Var& stream) const {
  if (!cfg_.HasDecoder(stage)) throw std::out_of_range("no decoder for stage " + std::to_string(stage));
  return decoders_.at(stage - 1).Forward(stream);
}

std::vector<Var> ProgressiveModel::Forward(const Var& spec) const {
  std::vector<Var> outputs(cfg_.num_blocks());
  Var stream = Embed(spec);
  for (int i = 0; i < cfg_.num_blocks(); ++i) {
    stream = Block(i, stream);
    if (cfg_.HasDecoder(i + 1)) outputs[i] = Decode(i + 1, stream);
  }
  return outputs;
}

}  // namespace spse::model
