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

#include "spse/nn/layers.h"

#include <cmath>

namespace spse::nn {

Conv2dLayer::Conv2dLayer(ParameterSet& ps, const std::string& group,
                         const std::string& name, int in_channels,
                         int out_channels, int kernel_t, int kernel_f,
                         Conv2dOptions opts, std::mt19937_64& rng)
    : opts_(opts) {
  const float bound =
      1.0f / std::sqrt(static_cast<float>(in_channels * kernel_t * kernel_f));
  weight_ = ps.Create(group, name + ".weight",
                      UniformInit({kernel_t, kernel_f, in_channels, out_channels},
                                  bound, rng));
  bias_ = ps.Create(group, name + ".bias", UniformInit({out_channels}, bound, rng));
}

LinearLayer::LinearLayer(ParameterSet& ps, const std::string& group,
                         const std::string& name, int in, int out,
                         std::mt19937_64& rng, bool with_bias) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(in));
  weight_ = ps.Create(group, name + ".weight", UniformInit({in, out}, bound, rng));
  if (with_bias) {
    bias_ = ps.Create(group, name + ".bias", UniformInit({out}, bound, rng));
  }
}

PReluLayer::PReluLayer(ParameterSet& ps, const std::string& group,
                       const std::string& name, int count) {
  alpha_ = ps.Create(group, name + ".alpha", Tensor({count}, 0.25f));
}

NormLayer::NormLayer(ParameterSet& ps, const std::string& group,
                     const std::string& name, std::int64_t param_size,
                     float eps)
    : eps_(eps) {
  gamma_ = ps.Create(group, name + ".gamma", Tensor({param_size}, 1.0f));
  beta_ = ps.Create(group, name + ".beta", Tensor({param_size}, 0.0f));
}

BatchNormLayer::BatchNormLayer(ParameterSet& ps, const std::string& group,
                               const std::string& name, int channels,
                               float momentum, float eps)
    : momentum_(momentum), eps_(eps) {
  gamma_ = ps.Create(group, name + ".gamma", Tensor({channels}, 1.0f));
  beta_ = ps.Create(group, name + ".beta", Tensor({channels}, 0.0f));
  running_mean_ = ps.Create(group, name + ".running_mean", Tensor({channels}, 0.0f), true);
  running_var_ = ps.Create(group, name + ".running_var", Tensor({channels}, 1.0f), true);
}

Var BatchNormLayer::Forward(const Var& x, bool training) const {
  const std::int64_t c = x.value().dim(-1);
  const std::int64_t rows = x.value().size() / c;
  std::vector<double> mean(c, 0.0), var(c, 0.0);
  const float* px = x.value().data();
  if (training) {
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t j = 0; j < c; ++j) mean[j] += px[r * c + j];
    for (auto& m : mean) m /= static_cast<double>(rows);
    for (std::int64_t r = 0; r < rows; ++r)
      for (std::int64_t j = 0; j < c; ++j) {
        double d = px[r * c + j] - mean[j];
        var[j] += d * d;
      }
    for (auto& v : var) v /= static_cast<double>(rows);
    // running_* are buffers: mutate in place, never part of the graph.
    Var rm = running_mean_, rv = running_var_;
    const double unbias = rows > 1 ? static_cast<double>(rows) / (rows - 1) : 1.0;
    for (std::int64_t j = 0; j < c; ++j) {
      rm.mutable_value()[j] = static_cast<float>((1.0 - momentum_) * rm.value()[j] + momentum_ * mean[j]);
      rv.mutable_value()[j] = static_cast<float>((1.0 - momentum_) * rv.value()[j] + momentum_ * var[j] * unbias);
    }
  } else {
    for (std::int64_t j = 0; j < c; ++j) {
      mean[j] = running_mean_.value()[j];
      var[j] = running_var_.value()[j];
    }
  }
  std::vector<float> inv_std(c);
  for (std::int64_t j = 0; j < c; ++j)
    inv_std[j] = static_cast<float>(1.0 / std::sqrt(var[j] + eps_));
  Tensor xhat(x.shape());
  Tensor out(x.shape());
  const float* g = gamma_.value().data();
  const float* b = beta_.value().data();
  for (std::int64_t r = 0; r < rows; ++r)
    for (std::int64_t j = 0; j < c; ++j) {
      const std::int64_t i = r * c + j;
      xhat[i] = static_cast<float>(px[i] - mean[j]) * inv_std[j];
      out[i] = xhat[i] * g[j] + b[j];
    }
  Var gamma = gamma_, beta = beta_;
  return MakeOpResult(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, training, c, rows, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Node& self) {
        const float* gy = self.grad.data();
        std::vector<double> sum_dy(c, 0.0), sum_dy_xhat(c, 0.0);
        for (std::int64_t r = 0; r < rows; ++r)
          for (std::int64_t j = 0; j < c; ++j) {
            sum_dy[j] += gy[r * c + j];
            sum_dy_xhat[j] += gy[r * c + j] * xhat[r * c + j];
          }
        if (gamma.requires_grad()) {
          Tensor& gg = gamma.node()->EnsureGrad();
          for (std::int64_t j = 0; j < c; ++j) gg[j] += static_cast<float>(sum_dy_xhat[j]);
        }
        if (beta.requires_grad()) {
          Tensor& gb = beta.node()->EnsureGrad();
          for (std::int64_t j = 0; j < c; ++j) gb[j] += static_cast<float>(sum_dy[j]);
        }
        if (!x.requires_grad()) return;
        Tensor& gx = x.node()->EnsureGrad();
        const float* pg = gamma.value().data();
        for (std::int64_t r = 0; r < rows; ++r)
          for (std::int64_t j = 0; j < c; ++j) {
            const std::int64_t i = r * c + j;
            if (training) {
              double m1 = sum_dy[j] / rows, m2 = sum_dy_xhat[j] / rows;
              gx[i] += static_cast<float>(pg[j] * inv_std[j] *
                                          (gy[i] - m1 - xhat[i] * m2));
            } else {
              gx[i] += pg[j] * inv_std[j] * gy[i];
            }
          }
      });
}

BiLstmLayer::BiLstmLayer(ParameterSet& ps, const std::string& group,
                         const std::string& name, int in, int hidden,
                         std::mt19937_64& rng)
    : hidden_(hidden) {
  const float bound = 1.0f / std::sqrt(static_cast<float>(hidden));
  auto make = [&](const std::string& dir) {
    LstmWeights w;
    w.w_ih = ps.Create(group, name + "." + dir + ".w_ih",
                       UniformInit({in, 4 * hidden}, bound, rng));
    w.w_hh = ps.Create(group, name + "." + dir + ".w_hh",
                       OrthogonalBlocksInit(hidden, 4, rng));
    Tensor bias({4 * hidden}, 0.0f);
    for (int j = hidden; j < 2 * hidden; ++j) bias[j] = 1.0f;  // forget gate
    w.bias = ps.Create(group, name + "." + dir + ".bias", std::move(bias));
    return w;
  };
  fwd_ = make("fwd");
  bwd_ = make("bwd");
}

}  // namespace spse::nn
