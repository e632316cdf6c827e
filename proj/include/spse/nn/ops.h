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

#ifndef SPSE_NN_OPS_H_
#define SPSE_NN_OPS_H_

#include <cstdint>
#include <vector>

#include "spse/nn/autograd.h"

namespace spse::nn {

// Elementwise ops require identical shapes unless noted.
Var Add(const Var& a, const Var& b);
Var Sub(const Var& a, const Var& b);
Var Mul(const Var& a, const Var& b);
Var Scale(const Var& a, float s);
// bias has the size of the last axis of x.
Var AddBias(const Var& x, const Var& bias);
Var Sigmoid(const Var& x);
Var Log1p(const Var& x);
// alpha index for element i is (i / inner) % alpha.size().
Var PRelu(const Var& x, const Var& alpha, std::int64_t inner = 1);

// x [..., in] times weight [in, out] (+ bias [out], may be undefined).
Var Linear(const Var& x, const Var& weight, const Var& bias);

Var Reshape(const Var& x, Shape shape);
Var Permute(const Var& x, const std::vector<int>& perm);
// Concatenates along the last axis; leading axes must agree.
Var Concat(const std::vector<Var>& xs);

// Normalizes each contiguous block of `group` elements to zero mean and unit
// variance, then applies gamma/beta indexed by (offset % gamma.size()).
// group = T*F*C with per-channel params is gLN; group = C is a per-unit
// layer norm; group = F*C with [F, C] params is the frequency-channel norm.
Var GroupNorm(const Var& x, std::int64_t group, const Var& gamma,
              const Var& beta, float eps);

struct Conv2dOptions {
  int stride_t = 1;
  int stride_f = 1;
  int pad_t = 0;
  int pad_f = 0;
};

// Channel-last 2-D convolution: x [B, T, F, Cin], weight [kt, kf, Cin, Cout],
// bias [Cout] (may be undefined) -> [B, To, Fo, Cout].
Var Conv2d(const Var& x, const Var& weight, const Var& bias,
           const Conv2dOptions& opts);

// x [..., L, C] -> [..., (L - k) / s + 1, k * C]; (L - k) must divide by s.
Var Unfold(const Var& x, int kernel, int stride);
// Adjoint of Unfold: overlap-adds [..., L', k * C] into [..., out_len, C].
Var Fold(const Var& y, int kernel, int stride, std::int64_t out_len);

// a [..., M, K] x b [..., K, P] (or b [..., P, K] when transpose_b).
Var BatchedMatMul(const Var& a, const Var& b, bool transpose_b);
Var SoftmaxLastDim(const Var& x);

Var SumAll(const Var& x);
// sum_i x_i * w_i for a constant w of x's shape.
Var WeightedSum(const Var& x, const Tensor& w);

}  // namespace spse::nn

#endif  // SPSE_NN_OPS_H_
