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

#ifndef SPSE_TESTS_GRAD_CHECK_H_
#define SPSE_TESTS_GRAD_CHECK_H_

#include <gtest/gtest.h>

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "spse/nn/autograd.h"
#include "spse/nn/ops.h"

namespace spse::testing {

inline nn::Tensor RandomTensor(nn::Shape shape, std::mt19937_64& rng,
                               float scale = 1.0f) {
  nn::Tensor t(std::move(shape));
  std::normal_distribution<float> d(0.0f, scale);
  for (auto& v : t.values()) v = d(rng);
  return t;
}

// Compares reverse-mode gradients of sum(f(x) * r) against central
// differences for every input element (float32 forward, so loose tolerance).
inline void CheckGradients(
    const std::function<nn::Var(const std::vector<nn::Var>&)>& f,
    std::vector<nn::Tensor> inputs, double tol = 2e-2, float h = 2e-3f,
    std::uint64_t seed = 7) {
  std::mt19937_64 rng(seed);
  std::vector<nn::Var> vars;
  for (auto& t : inputs) vars.emplace_back(t, true);
  nn::Var out = f(vars);
  nn::Tensor r = RandomTensor(out.shape(), rng);
  nn::WeightedSum(out, r).Backward();

  auto eval = [&](const std::vector<nn::Tensor>& ins) {
    nn::NoGradGuard guard;
    std::vector<nn::Var> vs;
    for (const auto& t : ins) vs.emplace_back(t, false);
    nn::Var o = f(vs);
    double s = 0.0;
    for (std::int64_t i = 0; i < r.size(); ++i) s += double(o.value()[i]) * r[i];
    return s;
  };

  for (size_t k = 0; k < inputs.size(); ++k) {
    ASSERT_TRUE(vars[k].has_grad()) << "input " << k << " got no gradient";
    for (std::int64_t i = 0; i < inputs[k].size(); ++i) {
      auto plus = inputs, minus = inputs;
      plus[k][i] += h;
      minus[k][i] -= h;
      double fd = (eval(plus) - eval(minus)) / (2.0 * h);
      double an = vars[k].grad()[i];
      double denom = std::max({1.0, std::abs(fd), std::abs(an)});
      ASSERT_NEAR(an / denom, fd / denom, tol)
          << "input " << k << " element " << i << " analytic " << an
          << " numeric " << fd;
    }
  }
}

}  // namespace spse::testing

#endif  // SPSE_TESTS_GRAD_CHECK_H_
