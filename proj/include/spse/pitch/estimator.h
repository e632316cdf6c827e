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

#ifndef SPSE_PITCH_ESTIMATOR_H_
#define SPSE_PITCH_ESTIMATOR_H_

#include <random>
#include <vector>

#include "spse/model/config.h"
#include "spse/nn/layers.h"

namespace spse::pitch {

inline constexpr double kPitchFeatureEps = 1e-7;

// Log magnitude log(|S| + 1e-7) of compressed real/imag input [B, T, F, 2],
// where |S| = |c|^(1 / gamma). Returns [B, T, F, 1].
nn::Tensor PitchFeatures(const nn::Tensor& compressed, double gamma);

// Conv blocks (3x3, stride 2 over frequency, batch norm, PReLU), then a
// stack of BiLSTMs over frames and a linear layer to out_dim logits.
class PitchEstimator {
 public:
  PitchEstimator() = default;
  PitchEstimator(nn::ParameterSet& ps, const model::PitchEstimatorConfig& cfg,
                 int num_bins, std::mt19937_64& rng);

  // features [B, T, F, 1] -> logits [B, T, out_dim]. Batch norm uses batch
  // statistics only when training.
  nn::Var Forward(const nn::Var& features, bool training) const;

 private:
  struct ConvBlock {
    nn::Conv2dLayer conv;
    nn::BatchNormLayer norm;
    nn::PReluLayer act;
  };
  std::vector<ConvBlock> convs_;
  std::vector<nn::BiLstmLayer> rnns_;
  nn::LinearLayer head_;
};

}  // namespace spse::pitch

#endif  // SPSE_PITCH_ESTIMATOR_H_
