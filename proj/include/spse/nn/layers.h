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

#ifndef SPSE_NN_LAYERS_H_
#define SPSE_NN_LAYERS_H_

#include <random>
#include <string>

#include "spse/nn/lstm.h"
#include "spse/nn/ops.h"
#include "spse/nn/parameter_set.h"

namespace spse::nn {

// Small building blocks that own their parameters inside a ParameterSet
// group. Weights use fan-in uniform initialisation.

class Conv2dLayer {
 public:
  Conv2dLayer() = default;
  Conv2dLayer(ParameterSet& ps, const std::string& group,
              const std::string& name, int in_channels, int out_channels,
              int kernel_t, int kernel_f, Conv2dOptions opts,
              std::mt19937_64& rng);
  Var Forward(const Var& x) const { return Conv2d(x, weight_, bias_, opts_); }

 private:
  Var weight_, bias_;
  Conv2dOptions opts_;
};

class LinearLayer {
 public:
  LinearLayer() = default;
  LinearLayer(ParameterSet& ps, const std::string& group,
              const std::string& name, int in, int out, std::mt19937_64& rng,
              bool with_bias = true);
  Var Forward(const Var& x) const { return Linear(x, weight_, bias_); }

 private:
  Var weight_, bias_;
};

class PReluLayer {
 public:
  PReluLayer() = default;
  PReluLayer(ParameterSet& ps, const std::string& group,
             const std::string& name, int count = 1);
  Var Forward(const Var& x, std::int64_t inner = 1) const {
    return PRelu(x, alpha_, inner);
  }

 private:
  Var alpha_;
};

// Affine normalisation over contiguous blocks; see GroupNorm.
class NormLayer {
 public:
  NormLayer() = default;
  NormLayer(ParameterSet& ps, const std::string& group, const std::string& name,
            std::int64_t param_size, float eps = 1e-5f);
  Var Forward(const Var& x, std::int64_t block) const {
    return GroupNorm(x, block, gamma_, beta_, eps_);
  }

 private:
  Var gamma_, beta_;
  float eps_ = 1e-5f;
};

// Per-channel batch normalisation over every axis but the last.
class BatchNormLayer {
 public:
  BatchNormLayer() = default;
  BatchNormLayer(ParameterSet& ps, const std::string& group,
                 const std::string& name, int channels,
                 float momentum = 0.1f, float eps = 1e-5f);
  // In training mode uses batch statistics and updates the running ones.
  Var Forward(const Var& x, bool training) const;

 private:
  Var gamma_, beta_, running_mean_, running_var_;
  float momentum_ = 0.1f;
  float eps_ = 1e-5f;
};

class BiLstmLayer {
 public:
  BiLstmLayer() = default;
  BiLstmLayer(ParameterSet& ps, const std::string& group,
              const std::string& name, int in, int hidden,
              std::mt19937_64& rng);
  Var Forward(const Var& x) const { return BiLstm(x, fwd_, bwd_); }
  int hidden() const { return hidden_; }

 private:
  LstmWeights fwd_, bwd_;
  int hidden_ = 0;
};

}  // namespace spse::nn

#endif  // SPSE_NN_LAYERS_H_
