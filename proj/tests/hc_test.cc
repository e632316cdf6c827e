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

#include <cmath>
#include <complex>
#include <random>

#include "grad_check.h"
#include "spse/hc/compensation.h"
#include "spse/model/config.h"
#include "spse/model/spectral_tensor.h"

namespace spse::hc {
namespace {

using nn::Tensor;
using nn::Var;
using spse::testing::CheckGradients;
using spse::testing::RandomTensor;

constexpr double kGamma = 1.0 / 3.0;

Tensor Uniform(nn::Shape shape, std::mt19937_64& rng, float lo, float hi) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<float> d(lo, hi);
  for (auto& v : t.values()) v = d(rng);
  return t;
}

audio::ComplexSpectrogram RandomSpec(int frames, std::mt19937_64& rng) {
  audio::ComplexSpectrogram s(frames, audio::StftConfig{});
  std::normal_distribution<double> g;
  for (auto& v : s.data()) v = {g(rng), g(rng)};
  return s;
}

TEST(Compensation, WorkedExample) {
  audio::StftConfig cfg;
  audio::ComplexSpectrogram coarse(1, cfg), filtered(1, cfg);
  coarse.at(0, 3) = std::polar(1.0, 0.7);
  filtered.at(0, 3) = std::polar(0.5, -2.0);
  std::vector<double> mask(cfg.num_bins(), 0.4);
  const auto out = Compensate(coarse, filtered, mask);
  EXPECT_NEAR(std::abs(out.at(0, 3)), 0.6, 1e-12);
  EXPECT_NEAR(std::arg(out.at(0, 3)), 0.7, 1e-12);
}

TEST(Compensation, PhaseOfCoarseAndMagnitudeBound) {
  std::mt19937_64 rng(1);
  const auto coarse = RandomSpec(4, rng), filtered = RandomSpec(4, rng);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> mask(coarse.data().size());
  for (auto& m : mask) m = u(rng);
  const auto out = Compensate(coarse, filtered, mask);
  ASSERT_GE(out.data().size(), 1000u);
  for (size_t i = 0; i < out.data().size(); ++i) {
    const auto c = coarse.data()[i], o = out.data()[i];
    EXPECT_NEAR(std::arg(o), std::arg(c), 1e-6);
    EXPECT_LE(std::abs(o), std::abs(c) + std::abs(filtered.data()[i]) + 1e-12);
  }
  // With nothing filtered, the output never exceeds the coarse estimate.
  const audio::ComplexSpectrogram zero(4, audio::StftConfig{});
  const auto masked = Compensate(coarse, zero, mask);
  for (size_t i = 0; i < masked.data().size(); ++i)
    EXPECT_LE(std::abs(masked.data()[i]), std::abs(coarse.data()[i]) + 1e-12);
}

TEST(Compensation, ShapeMismatchThrows) {
  std::mt19937_64 rng(2);
  const auto a = RandomSpec(3, rng), b = RandomSpec(4, rng);
  std::vector<double> mask(a.data().size(), 0.5);
  EXPECT_THROW(Compensate(a, b, mask), std::invalid_argument);
  EXPECT_THROW(Compensate(a, a, std::vector<double>(5, 0.5)), std::invalid_argument);
}

TEST(CompensateCompressed, AgreesWithPolarReassembly) {
  std::mt19937_64 rng(3);
  const auto coarse = RandomSpec(2, rng), filtered = RandomSpec(2, rng);
  const size_t n = coarse.data().size();
  const auto cc = audio::Compress(coarse, kGamma);
  const Tensor coarse_t = model::StackCompressed(std::span(&cc, 1));
  Tensor mask_t({1, 2, 257, 1}), fmag({1, 2, 257, 1});
  std::vector<double> mask(n);
  std::uniform_real_distribution<double> u(0.05, 0.95);
  for (size_t i = 0; i < n; ++i) {
    mask[i] = mask_t[i] = static_cast<float>(u(rng));
    fmag[i] = static_cast<float>(std::abs(filtered.data()[i]));
  }
  const Var out = CompensateCompressed(Var(mask_t), Var(coarse_t), Var(fmag), kGamma);
  const auto ref = Compensate(coarse, filtered, mask);
  const auto got = model::CompressedItem(out.value(), 0, kGamma);
  for (size_t i = 0; i < n; ++i) {
    const auto expect = std::polar(std::pow(std::abs(ref.data()[i]), kGamma),
                                   std::arg(ref.data()[i]));
    EXPECT_NEAR(got.real_c[i], expect.real(), 1e-4);
    EXPECT_NEAR(got.imag_c[i], expect.imag(), 1e-4);
  }
}

TEST(CompensateCompressed, Gradients) {
  std::mt19937_64 rng(4);
  CheckGradients(
      [](const std::vector<Var>& v) { return CompensateCompressed(v[0], v[1], v[2], kGamma); },
      {Uniform({1, 2, 3, 1}, rng, 0.1f, 0.9f), RandomTensor({1, 2, 3, 2}, rng),
       Uniform({1, 2, 3, 1}, rng, 0.1f, 2.0f)},
      2e-2, 1e-3f);
  CheckGradients([](const std::vector<Var>& v) { return UncompressedMagnitude(v[0], kGamma); },
                 {RandomTensor({2, 3, 2}, rng)}, 2e-2, 1e-3f);
}

TEST(CompensateCompressed, ConstantFilteredMagnitude) {
  std::mt19937_64 rng(6);
  const Var fmag(Uniform({1, 2, 3, 1}, rng, 0.1f, 2.0f));
  CheckGradients(
      [&](const std::vector<Var>& v) { return CompensateCompressed(v[0], v[1], fmag, kGamma); },
      {Uniform({1, 2, 3, 1}, rng, 0.1f, 0.9f), RandomTensor({1, 2, 3, 2}, rng)}, 2e-2, 1e-3f);
}

TEST(MaskModule, MaskInUnitIntervalAndGradientsReachBothBranches) {
  auto cfg = model::ModelConfig::Toy();
  cfg.num_bins = 9;
  cfg.embed_dim = 4;
  cfg.rnn_hidden = 3;
  cfg.attn_qk_width = 8;
  nn::ParameterSet ps;
  std::mt19937_64 rng(5);
  MaskModule module(ps, cfg, rng);
  Var coarse(RandomTensor({2, 5, 9, 2}, rng), true);
  Var fmag(Uniform({2, 5, 9, 1}, rng, 0.0f, 3.0f), true);
  const Var mask = module.Forward(coarse, fmag);
  ASSERT_EQ(mask.shape(), (nn::Shape{2, 5, 9, 1}));
  for (float m : mask.value().values()) {
    EXPECT_GT(m, 0.0f);
    EXPECT_LT(m, 1.0f);
  }
  const Var out = CompensateCompressed(mask, coarse, fmag, kGamma);
  nn::WeightedSum(out, RandomTensor(out.shape(), rng)).Backward();
  auto nonzero = [](const Tensor& g) {
    double s = 0.0;
    for (float v : g.values()) s += std::abs(v);
    return s > 0.0;
  };
  EXPECT_TRUE(nonzero(coarse.grad()));
  EXPECT_TRUE(nonzero(fmag.grad()));
  for (auto& p : ps.Group(model::kMaskGroup))
    if (!p.is_buffer) EXPECT_TRUE(p.var.has_grad()) << p.name;
}

}  // namespace
}  // namespace spse::hc
