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

#include "spse/pitch/estimator.h"

#include <cmath>

namespace spse::pitch {

nn::Tensor PitchFeatures(const nn::Tensor& compressed, double gamma) {
  nn::Shape shape = compressed.shape();
  if (shape.size() != 4 || shape[3] != 2)
    throw std::invalid_argument("PitchFeatures: expected [B, T, F, 2]");
  shape[3] = 1;
  nn::Tensor out(shape);
  const float* c = compressed.data();
  const double half_power = 0.5 / gamma;
  for (std::int64_t i = 0; i < out.size(); ++i) {
    const double a = c[2 * i], b = c[2 * i + 1];
    out[i] = static_cast<float>(std::log(std::pow(a * a + b * b, half_power) + kPitchFeatureEps));
  }
  return out;
}

PitchEstimator::PitchEstimator(nn::ParameterSet& ps,
                               const model::PitchEstimatorConfig& cfg,
                               int num_bins, std::mt19937_64& rng) {
  const char* group = model::kPitchGroup;
  nn::Conv2dOptions down;
  down.stride_f = 2;
  down.pad_t = 1;
  down.pad_f = 1;
  int in = 1, bins = num_bins;
  for (size_t i = 0; i < cfg.conv_channels.size(); ++i) {
    const std::string name = "conv" + std::to_string(i);
    const int out = cfg.conv_channels[i];
    convs_.push_back({nn::Conv2dLayer(ps, group, name, in, out, 3, 3, down, rng),
                      nn::BatchNormLayer(ps, group, name + ".bn", out),
                      nn::PReluLayer(ps, group, name + ".act", 1)});
    in = out;
    bins = (bins - 1) / 2 + 1;
  }
  int width = bins * in;
  for (size_t i = 0; i < cfg.rnn_hidden.size(); ++i) {
    rnns_.push_back(nn::BiLstmLayer(ps, group, "rnn" + std::to_string(i), width,
                                    cfg.rnn_hidden[i], rng));
    width = 2 * cfg.rnn_hidden[i];
  }
  head_ = nn::LinearLayer(ps, group, "head", width, cfg.out_dim, rng);
}

nn::Var PitchEstimator::Forward(const nn::Var& features, bool training) const {
  nn::Var h = features;
  for (const auto& block : convs_)
    h = block.act.Forward(block.norm.Forward(block.conv.Forward(h), training));
  const auto& s = h.shape();
  h = nn::Reshape(h, {s[0], s[1], s[2] * s[3]});
  for (const auto& rnn : rnns_) h = rnn.Forward(h);
  return head_.Forward(h);
}

}  // namespace spse::pitch
