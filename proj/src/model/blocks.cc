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

#include "spse/model/blocks.h"

#include <cmath>

#include "spse/error.h"

namespace spse::model {

using nn::Var;

UnfoldRnnPath::UnfoldRnnPath(nn::ParameterSet& ps, const std::string& group,
                             const std::string& name, const ModelConfig& cfg,
                             std::mt19937_64& rng)
    : kernel_(cfg.unfold_kernel), stride_(cfg.unfold_stride), dim_(cfg.embed_dim) {
  norm_ = nn::NormLayer(ps, group, name + ".norm", dim_);
  rnn_ = nn::BiLstmLayer(ps, group, name + ".rnn", kernel_ * dim_, cfg.rnn_hidden, rng);
  proj_ = nn::LinearLayer(ps, group, name + ".proj", 2 * cfg.rnn_hidden,
                          kernel_ * dim_, rng, /*with_bias=*/false);
  const float bound = 1.0f / std::sqrt(static_cast<float>(2 * cfg.rnn_hidden));
  bias_ = ps.Create(group, name + ".proj.bias", nn::UniformInit({dim_}, bound, rng));
}

Var UnfoldRnnPath::Forward(const Var& x) const {
  const std::int64_t len = x.value().dim(1);
  Var h = norm_.Forward(x, dim_);
  h = nn::Unfold(h, kernel_, stride_);
  h = rnn_.Forward(h);
  h = proj_.Forward(h);
  h = nn::Fold(h, kernel_, stride_, len);
  return nn::Add(nn::AddBias(h, bias_), x);
}

Var FramesAlongTime(const Var& x) {
  const auto& s = x.shape();
  return nn::Reshape(nn::Permute(x, {0, 2, 1, 3}), {s[0] * s[2], s[1], s[3]});
}

Var FramesFromTime(const Var& y, std::int64_t batch, std::int64_t bins) {
  const auto& s = y.shape();
  return nn::Permute(nn::Reshape(y, {batch, bins, s[1], s[2]}), {0, 2, 1, 3});
}

GridNetBlock::GridNetBlock(nn::ParameterSet& ps, const std::string& group,
                           const ModelConfig& cfg, std::mt19937_64& rng)
    : heads_(cfg.attn_heads), bins_(cfg.num_bins), dim_(cfg.embed_dim) {
  qk_dim_ = (cfg.attn_qk_width + bins_ - 1) / bins_;
  const int head_dim = dim_ / heads_;
  freq_path_ = UnfoldRnnPath(ps, group, "freq", cfg, rng);
  time_path_ = UnfoldRnnPath(ps, group, "time", cfg, rng);
  query_ = nn::LinearLayer(ps, group, "attn.query", dim_, heads_ * qk_dim_, rng);
  key_ = nn::LinearLayer(ps, group, "attn.key", dim_, heads_ * qk_dim_, rng);
  value_ = nn::LinearLayer(ps, group, "attn.value", dim_, dim_, rng);
  out_ = nn::LinearLayer(ps, group, "attn.out", dim_, dim_, rng);
  query_act_ = nn::PReluLayer(ps, group, "attn.query.act", heads_);
  key_act_ = nn::PReluLayer(ps, group, "attn.key.act", heads_);
  value_act_ = nn::PReluLayer(ps, group, "attn.value.act", heads_);
  out_act_ = nn::PReluLayer(ps, group, "attn.out.act", 1);
  query_norm_ = nn::NormLayer(ps, group, "attn.query.norm",
                              static_cast<std::int64_t>(heads_) * bins_ * qk_dim_);
  key_norm_ = nn::NormLayer(ps, group, "attn.key.norm",
                            static_cast<std::int64_t>(heads_) * bins_ * qk_dim_);
  value_norm_ = nn::NormLayer(ps, group, "attn.value.norm",
                              static_cast<std::int64_t>(heads_) * bins_ * head_dim);
  out_norm_ = nn::NormLayer(ps, group, "attn.out.norm",
                            static_cast<std::int64_t>(bins_) * dim_);
}

Var GridNetBlock::Attention(const Var& x) const {
  const auto& s = x.shape();
  const std::int64_t b = s[0], t = s[1], f = s[2];
  if (f != bins_) throw ConfigError("attention built for a different bin count");
  // [B, T, F, h * w] -> per-head normalized [B, h, T, F * w].
  auto heads_first = [&](const Var& proj, int width, const nn::PReluLayer& act,
                         const nn::NormLayer& norm) {
    Var h = nn::Permute(nn::Reshape(proj, {b, t, f, heads_, width}), {0, 1, 3, 2, 4});
    h = act.Forward(h, f * width);
    h = norm.Forward(h, f * width);
    return nn::Reshape(nn::Permute(h, {0, 2, 1, 3, 4}), {b, heads_, t, f * width});
  };
  const int head_dim = dim_ / heads_;
  Var q = heads_first(query_.Forward(x), qk_dim_, query_act_, query_norm_);
  Var k = heads_first(key_.Forward(x), qk_dim_, key_act_, key_norm_);
  Var v = heads_first(value_.Forward(x), head_dim, value_act_, value_norm_);
  Var scores = nn::Scale(nn::BatchedMatMul(q, k, /*transpose_b=*/true),
                         1.0f / std::sqrt(static_cast<float>(f * qk_dim_)));
  Var mixed = nn::BatchedMatMul(nn::SoftmaxLastDim(scores), v, false);
  // [B, h, T, F * d] -> [B, T, F, h * d]
  mixed = nn::Permute(nn::Reshape(mixed, {b, heads_, t, f, head_dim}), {0, 2, 3, 1, 4});
  mixed = nn::Reshape(mixed, {b, t, f, dim_});
  Var y = out_act_.Forward(out_.Forward(mixed));
  y = out_norm_.Forward(y, f * dim_);
  return nn::Add(y, x);
}

Var GridNetBlock::Forward(const Var& x) const {
  const auto& s = x.shape();
  const std::int64_t b = s[0], t = s[1], f = s[2], d = s[3];
  Var h = nn::Reshape(x, {b * t, f, d});
  h = nn::Reshape(freq_path_.Forward(h), {b, t, f, d});
  h = FramesFromTime(time_path_.Forward(FramesAlongTime(h)), b, f);
  return Attention(h);
}

RecurrentBlock::RecurrentBlock(nn::ParameterSet& ps, const std::string& group,
                               const ModelConfig& cfg, std::mt19937_64& rng)
    : time_path_(ps, group, "time", cfg, rng) {}

Var RecurrentBlock::Forward(const Var& x) const {
  return FramesFromTime(time_path_.Forward(FramesAlongTime(x)), x.shape()[0],
                        x.shape()[2]);
}

std::unique_ptr<SeBlock> MakeSeBlock(nn::ParameterSet& ps, const std::string& group,
                                     const ModelConfig& cfg, std::mt19937_64& rng) {
  if (cfg.block == SeBlockKind::kRecurrent)
    return std::make_unique<RecurrentBlock>(ps, group, cfg, rng);
  return std::make_unique<GridNetBlock>(ps, group, cfg, rng);
}

}  // namespace spse::model
