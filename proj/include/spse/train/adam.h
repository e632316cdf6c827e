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

#ifndef SPSE_TRAIN_ADAM_H_
#define SPSE_TRAIN_ADAM_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spse/model/checkpoint.h"
#include "spse/nn/parameter_set.h"

namespace spse::train {

struct AdamOptions {
  double beta1 = 0.9;
  double beta2 = 0.98;
  double eps = 1e-9;
};

// Bias-corrected Adam over the trainable, non-buffer parameters of a set.
// Parameters without a gradient in a step are left alone.
class Adam {
 public:
  explicit Adam(AdamOptions opts = {}) : opts_(opts) {}

  void Step(nn::ParameterSet& ps, double lr);
  std::int64_t steps() const { return steps_; }

  // Moments as "adam.m/<group>/<name>" and "adam.v/<group>/<name>".
  std::vector<model::NamedTensor> Export() const;
  void Import(const model::Checkpoint& ckpt, std::int64_t steps);

 private:
  struct Moments {
    nn::Tensor m, v;
  };
  AdamOptions opts_;
  std::int64_t steps_ = 0;
  std::map<std::string, Moments> state_;
};

// Global L2 norm of the trainable gradients before clipping. When it exceeds
// max_norm every gradient is scaled by max_norm / norm.
double ClipGlobalNorm(nn::ParameterSet& ps, double max_norm);

}  // namespace spse::train

#endif  // SPSE_TRAIN_ADAM_H_
