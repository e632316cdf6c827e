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

#include <gtest/gtest.h>

#include <random>

#include "grad_check.h"
#include "spse/nn/layers.h"
#include "spse/nn/lstm.h"
#include "spse/nn/ops.h"

namespace spse::nn {
namespace {

using spse::testing::CheckGradients;
using spse::testing::RandomTensor;

TEST(Ops, ElementwiseGradients) {
  std::mt19937_64 rng(1);
  CheckGradients([](const std::vector<Var>& v) { return Mul(Add(v[0], v[1]), Sub(v[0], v[1])); },
                 {RandomTensor({2, 3}, rng), RandomTensor({2, 3}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return Sigmoid(Scale(v[0], 1.5f)); },
                 {RandomTensor({7}, rng)});
  Tensor pos = RandomTensor({6}, rng);
  for (auto& x : pos.values()) x = std::abs(x) + 0.1f;
  CheckGradients([](const std::vector<Var>& v) { return Log1p(v[0]); }, {pos});
  CheckGradients([](const std::vector<Var>& v) { return PRelu(v[0], v[1], 2); },
                 {RandomTensor({3, 4}, rng), Tensor({2}, std::vector<float>{0.2f, -0.3f})});
  CheckGradients([](const std::vector<Var>& v) { return AddBias(v[0], v[1]); },
                 {RandomTensor({3, 4}, rng), RandomTensor({4}, rng)});
}

TEST(Ops, LinearAndMatMul) {
  std::mt19937_64 rng(2);
  CheckGradients([](const std::vector<Var>& v) { return Linear(v[0], v[1], v[2]); },
                 {RandomTensor({2, 3, 4}, rng), RandomTensor({4, 5}, rng), RandomTensor({5}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return BatchedMatMul(v[0], v[1], false); },
                 {RandomTensor({2, 3, 4}, rng), RandomTensor({2, 4, 2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return BatchedMatMul(v[0], v[1], true); },
                 {RandomTensor({2, 3, 4}, rng), RandomTensor({2, 5, 4}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return SoftmaxLastDim(v[0]); },
                 {RandomTensor({3, 5}, rng)});
}

TEST(Ops, ShapeOps) {
  std::mt19937_64 rng(3);
  CheckGradients([](const std::vector<Var>& v) { return Permute(v[0], {2, 0, 3, 1}); },
                 {RandomTensor({2, 3, 4, 2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return Concat({v[0], v[1]}); },
                 {RandomTensor({2, 3, 1}, rng), RandomTensor({2, 3, 2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return Fold(Unfold(v[0], 3, 1), 3, 1, 6); },
                 {RandomTensor({2, 6, 2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return Fold(v[0], 2, 2, 6); },
                 {RandomTensor({1, 3, 4}, rng)});
}

TEST(Ops, PermuteMatchesIndexing) {
  Tensor t({2, 3, 4});
  for (std::int64_t i = 0; i < t.size(); ++i) t[i] = static_cast<float>(i);
  Var p = Permute(Var(t), {1, 2, 0});
  ASSERT_EQ(p.shape(), (Shape{3, 4, 2}));
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 4; ++c)
        EXPECT_EQ(p.value()[(b * 4 + c) * 2 + a], t[(a * 3 + b) * 4 + c]);
}

TEST(Ops, UnfoldFoldAreAdjoint) {
  std::mt19937_64 rng(4);
  Tensor x = RandomTensor({2, 7, 3}, rng);
  Tensor y = RandomTensor({2, 4, 12}, rng);
  Var ux = Unfold(Var(x), 4, 1);
  Var fy = Fold(Var(y), 4, 1, 7);
  double lhs = 0, rhs = 0;
  for (std::int64_t i = 0; i < y.size(); ++i) lhs += double(ux.value()[i]) * y[i];
  for (std::int64_t i = 0; i < x.size(); ++i) rhs += double(fy.value()[i]) * x[i];
  EXPECT_NEAR(lhs, rhs, 1e-4);
}

TEST(Ops, GroupNormGradients) {
  std::mt19937_64 rng(5);
  CheckGradients([](const std::vector<Var>& v) { return GroupNorm(v[0], 6, v[1], v[2], 1e-5f); },
                 {RandomTensor({2, 3, 2}, rng), RandomTensor({2}, rng), RandomTensor({2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return GroupNorm(v[0], 4, v[1], v[2], 1e-5f); },
                 {RandomTensor({3, 4}, rng), RandomTensor({4}, rng), RandomTensor({4}, rng)});
  // Per-head params spanning two groups.
  CheckGradients([](const std::vector<Var>& v) { return GroupNorm(v[0], 3, v[1], v[2], 1e-5f); },
                 {RandomTensor({2, 2, 3}, rng), RandomTensor({6}, rng), RandomTensor({6}, rng)});
}

TEST(Ops, GroupNormNormalizes) {
  std::mt19937_64 rng(6);
  Var x(RandomTensor({2, 5, 3}, rng, 4.0f));
  Var g(Tensor({3}, 1.0f)), b(Tensor({3}, 0.0f));
  Var y = GroupNorm(x, 15, g, b, 1e-8f);
  for (int grp = 0; grp < 2; ++grp) {
    double m = 0, v = 0;
    for (int i = 0; i < 15; ++i) m += y.value()[grp * 15 + i];
    m /= 15;
    for (int i = 0; i < 15; ++i) v += std::pow(y.value()[grp * 15 + i] - m, 2);
    EXPECT_NEAR(m, 0.0, 1e-5);
    EXPECT_NEAR(v / 15, 1.0, 1e-4);
  }
}

TEST(Ops, Conv2dGradients) {
  std::mt19937_64 rng(7);
  Conv2dOptions same{1, 1, 1, 1};
  CheckGradients([same](const std::vector<Var>& v) { return Conv2d(v[0], v[1], v[2], same); },
                 {RandomTensor({2, 4, 5, 2}, rng), RandomTensor({3, 3, 2, 3}, rng), RandomTensor({3}, rng)});
  Conv2dOptions strided{1, 2, 1, 1};
  CheckGradients([strided](const std::vector<Var>& v) { return Conv2d(v[0], v[1], Var(), strided); },
                 {RandomTensor({1, 3, 7, 2}, rng), RandomTensor({3, 3, 2, 2}, rng)});
}

TEST(Ops, Conv2dMatchesDirectSum) {
  std::mt19937_64 rng(8);
  Tensor x = RandomTensor({1, 4, 6, 2}, rng);
  Tensor w = RandomTensor({3, 3, 2, 1}, rng);
  Var y = Conv2d(Var(x), Var(w), Var(), {1, 2, 1, 1});
  ASSERT_EQ(y.shape(), (Shape{1, 4, 3, 1}));
  for (int t = 0; t < 4; ++t)
    for (int f = 0; f < 3; ++f) {
      double s = 0;
      for (int dt = 0; dt < 3; ++dt)
        for (int df = 0; df < 3; ++df)
          for (int c = 0; c < 2; ++c) {
            int ti = t + dt - 1, fi = 2 * f + df - 1;
            if (ti < 0 || ti >= 4 || fi < 0 || fi >= 6) continue;
            s += double(x[(ti * 6 + fi) * 2 + c]) * w[((dt * 3 + df) * 2 + c)];
          }
      EXPECT_NEAR(y.value()[t * 3 + f], s, 1e-5);
    }
}

TEST(Ops, BiLstmGradients) {
  std::mt19937_64 rng(9);
  const int in = 3, hidden = 2;
  auto make = [&]() {
    return std::vector<Tensor>{RandomTensor({in, 4 * hidden}, rng, 0.5f),
                               RandomTensor({hidden, 4 * hidden}, rng, 0.5f),
                               RandomTensor({4 * hidden}, rng, 0.5f)};
  };
  auto fw = make(), bw = make();
  std::vector<Tensor> inputs = {RandomTensor({2, 4, in}, rng)};
  inputs.insert(inputs.end(), fw.begin(), fw.end());
  inputs.insert(inputs.end(), bw.begin(), bw.end());
  CheckGradients(
      [](const std::vector<Var>& v) {
        return BiLstm(v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]});
      },
      inputs);
}

TEST(Ops, BiLstmBackwardDirectionSeesFuture) {
  std::mt19937_64 rng(10);
  ParameterSet ps;
  BiLstmLayer layer(ps, "g", "rnn", 2, 3, rng);
  Tensor x = RandomTensor({1, 5, 2}, rng);
  Var y1 = layer.Forward(Var(x));
  x[4 * 2] += 1.0f;  // change the last step only
  Var y2 = layer.Forward(Var(x));
  // Forward states before the last step are unchanged; backward ones move.
  for (int l = 0; l < 4; ++l)
    for (int j = 0; j < 3; ++j) EXPECT_EQ(y1.value()[l * 6 + j], y2.value()[l * 6 + j]);
  EXPECT_NE(y1.value()[0 * 6 + 3], y2.value()[0 * 6 + 3]);
}

TEST(Ops, BatchNormGradientsTraining) {
  std::mt19937_64 rng(11);
  ParameterSet ps;
  BatchNormLayer bn(ps, "g", "bn", 3);
  CheckGradients([&bn](const std::vector<Var>& v) { return bn.Forward(v[0], true); },
                 {RandomTensor({4, 3}, rng)});
}

TEST(Autograd, NoGradGuardSkipsGraph) {
  Var a(Tensor({2}, 1.0f), true);
  {
    NoGradGuard guard;
    Var b = Scale(a, 2.0f);
    EXPECT_FALSE(b.requires_grad());
  }
  Var c = Scale(a, 2.0f);
  EXPECT_TRUE(c.requires_grad());
}

TEST(Autograd, SharedSubexpressionAccumulates) {
  Var a(Tensor({1}, 3.0f), true);
  Var b = Mul(a, a);
  Var c = Add(b, a);
  c.Backward();
  EXPECT_FLOAT_EQ(a.grad()[0], 7.0f);
}

TEST(Parameters, FreezeStopsGradient) {
  std::mt19937_64 rng(12);
  ParameterSet ps;
  LinearLayer l1(ps, "a", "l1", 2, 2, rng);
  LinearLayer l2(ps, "b", "l2", 2, 1, rng);
  ps.SetTrainable("a", false);
  Var y = SumAll(l2.Forward(l1.Forward(Var(Tensor({1, 2}, 1.0f)))));
  y.Backward();
  for (auto& p : ps.Group("a")) EXPECT_FALSE(p.var.has_grad());
  for (auto& p : ps.Group("b")) EXPECT_TRUE(p.var.has_grad());
}

TEST(Parameters, OrthogonalBlocksAreOrthonormal) {
  std::mt19937_64 rng(13), again(13);
  const Tensor t = OrthogonalBlocksInit(5, 4, rng);
  ASSERT_EQ(t.shape(), (Shape{5, 20}));
  for (int k = 0; k < 4; ++k)
    for (int a = 0; a < 5; ++a)
      for (int b = 0; b < 5; ++b) {
        double dot = 0.0;
        for (int i = 0; i < 5; ++i) dot += double(t[i * 20 + k * 5 + a]) * t[i * 20 + k * 5 + b];
        EXPECT_NEAR(dot, a == b ? 1.0 : 0.0, 1e-6);
      }
  const Tensor u = OrthogonalBlocksInit(5, 4, again);
  EXPECT_TRUE(std::ranges::equal(t.values(), u.values()));
}

}  // namespace
}  // namespace spse::nn
