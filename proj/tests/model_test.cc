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

#include <algorithm>
#include <cmath>
#include <complex>
#include <filesystem>
#include <fstream>
#include <random>

#include "grad_check.h"
#include "spse/error.h"
#include "spse/model/blocks.h"
#include "spse/model/checkpoint.h"
#include "spse/model/config.h"
#include "spse/model/enhancer.h"
#include "spse/model/progressive_model.h"
#include "spse/model/spectral_tensor.h"
#include "spse/nn/ops.h"

namespace spse::model {
namespace {

using nn::Tensor;
using nn::Var;
using spse::testing::CheckGradients;
using spse::testing::RandomTensor;

// Few bins so full-model gradient checks stay cheap.
ModelConfig Tiny() {
  ModelConfig c = ModelConfig::Toy();
  c.num_bins = 9;
  c.embed_dim = 4;
  c.rnn_hidden = 3;
  c.attn_heads = 2;
  c.attn_qk_width = 8;
  c.pe_channels = 2;
  return c;
}

bool Equal(const Tensor& a, const Tensor& b) {
  return a.shape() == b.shape() && std::ranges::equal(a.values(), b.values());
}

TEST(ComplexConvWeight, MatchesDirectComplexConvolution) {
  std::mt19937_64 rng(1);
  const Tensor re = RandomTensor({3, 1, 1, 2}, rng), im = RandomTensor({3, 1, 1, 2}, rng);
  const Tensor x = RandomTensor({1, 5, 3, 2}, rng);
  nn::Conv2dOptions opts;
  opts.pad_t = 1;
  const Var y = nn::Conv2d(Var(x), ComplexConvWeight(Var(re), Var(im)), Var(), opts);
  for (int t = 0; t < 5; ++t)
    for (int f = 0; f < 3; ++f)
      for (int c = 0; c < 2; ++c) {
        std::complex<double> acc = 0.0;
        for (int k = 0; k < 3; ++k) {
          const int ts = t + k - 1;
          if (ts < 0 || ts >= 5) continue;
          const std::complex<double> z(x[(ts * 3 + f) * 2], x[(ts * 3 + f) * 2 + 1]);
          acc += std::complex<double>(re[k * 2 + c], im[k * 2 + c]) * z;
        }
        const float* out = y.value().data() + (t * 3 + f) * 4;
        EXPECT_NEAR(out[c], acc.real(), 1e-5);
        EXPECT_NEAR(out[2 + c], acc.imag(), 1e-5);
      }
}

TEST(ComplexConvWeight, Gradients) {
  std::mt19937_64 rng(2);
  CheckGradients([](const std::vector<Var>& v) { return ComplexConvWeight(v[0], v[1]); },
                 {RandomTensor({3, 1, 1, 2}, rng), RandomTensor({3, 1, 1, 2}, rng)});
  CheckGradients([](const std::vector<Var>& v) { return ComplexMagnitudePow(v[0], 0.5f); },
                 {RandomTensor({2, 3, 4}, rng)});
}

TEST(PhaseEncoder, ShapeZeroInputAndScaleSensitivity) {
  ModelConfig cfg = ModelConfig::Toy();
  nn::ParameterSet ps;
  std::mt19937_64 rng(3);
  PhaseEncoder pe(ps, cfg, rng);
  const Var zero(Tensor({1, 6, 257, 2}));
  const Var a = pe.Forward(zero), b = pe.Forward(zero);
  EXPECT_EQ(a.shape(), (nn::Shape{1, 6, 257, 4}));
  EXPECT_TRUE(a.value().AllFinite());
  EXPECT_TRUE(Equal(a.value(), b.value()));
  Tensor x = RandomTensor({1, 6, 257, 2}, rng);
  Tensor x2 = x;
  for (auto& v : x2.values()) v *= 2.0f;
  const Var y1 = pe.Forward(Var(x)), y2 = pe.Forward(Var(x2));
  EXPECT_FALSE(Equal(y1.value(), y2.value()));
}

TEST(ProgressiveModel, ToyHasKPlusOneOutputsOfInputShape) {
  SpeechEnhancer enh(ModelConfig::Toy(), 4);
  std::mt19937_64 rng(5);
  const Var x(RandomTensor({2, 8, 257, 2}, rng));
  const auto outs = enh.model().Forward(x);
  ASSERT_EQ(outs.size(), 3u);
  for (const auto& o : outs) {
    ASSERT_TRUE(o.defined());
    EXPECT_EQ(o.shape(), (nn::Shape{2, 8, 257, 2}));
  }
  EXPECT_THROW(enh.model().Forward(Var(Tensor({1, 8, 256, 2}))), std::invalid_argument);
}

TEST(ProgressiveModel, FullConfigHasFiveOutputs) {
  ModelConfig cfg;
  EXPECT_EQ(cfg.num_intermediate, 4);
  nn::ParameterSet ps;
  std::mt19937_64 rng(6);
  ProgressiveModel m(ps, cfg, rng);
  nn::NoGradGuard no_grad;
  const auto outs = m.Forward(Var(RandomTensor({1, 4, 257, 2}, rng)));
  EXPECT_EQ(outs.size(), 5u);
  for (const auto& o : outs) EXPECT_EQ(o.shape(), (nn::Shape{1, 4, 257, 2}));
}

TEST(ProgressiveModel, GroupsAreNamedAndStable) {
  SpeechEnhancer enh(ModelConfig::Toy(), 7);
  const std::vector<std::string> expected = {
      "phase_encoder", "encoder",    "se_block[0]", "se_block[1]", "se_block[2]",
      "decoder[1]",    "decoder[2]", "decoder[3]",  "pitch_estimator", "mask_module"};
  EXPECT_EQ(enh.params().GroupNames(), expected);
  SpeechEnhancer again(ModelConfig::Toy(), 7);
  for (const auto& g : expected)
    EXPECT_EQ(enh.params().Checksum(g), again.params().Checksum(g)) << g;
}

TEST(ProgressiveModel, AblationsChangeTheGraph) {
  ModelConfig cfg = ModelConfig::Toy();
  cfg.use_phase_encoder = false;
  cfg.use_progressive = false;
  cfg.use_harmonic_compensation = false;
  SpeechEnhancer enh(cfg, 8);
  EXPECT_FALSE(enh.params().HasGroup("phase_encoder"));
  EXPECT_FALSE(enh.params().HasGroup("decoder[1]"));
  EXPECT_TRUE(enh.params().HasGroup("decoder[3]"));
  EXPECT_FALSE(enh.params().HasGroup("mask_module"));
  EXPECT_EQ(cfg.PitchSourceStage(), 3);
  std::mt19937_64 rng(9);
  nn::NoGradGuard no_grad;
  const auto outs = enh.model().Forward(Var(RandomTensor({1, 6, 257, 2}, rng)));
  EXPECT_FALSE(outs[0].defined());
  EXPECT_FALSE(outs[1].defined());
  EXPECT_TRUE(outs[2].defined());
}

TEST(ProgressiveModel, DeterministicInference) {
  SpeechEnhancer enh(ModelConfig::Toy(), 10);
  std::mt19937_64 rng(11);
  const Tensor x = RandomTensor({1, 6, 257, 2}, rng);
  nn::NoGradGuard no_grad;
  const auto a = enh.model().Forward(Var(x)), b = enh.model().Forward(Var(x));
  for (size_t k = 0; k < a.size(); ++k) EXPECT_TRUE(Equal(a[k].value(), b[k].value()));
}

TEST(ProgressiveModel, DecodersBranchOffIndependently) {
  SpeechEnhancer enh(ModelConfig::Toy(), 12);
  std::mt19937_64 rng(13);
  const Tensor x = RandomTensor({1, 6, 257, 2}, rng);
  nn::NoGradGuard no_grad;
  const auto before = enh.model().Forward(Var(x));
  for (auto& p : enh.params().Group("decoder[2]"))
    for (auto& v : p.var.mutable_value().values()) v += 0.05f;
  const auto after = enh.model().Forward(Var(x));
  EXPECT_TRUE(Equal(before[0].value(), after[0].value()));
  EXPECT_FALSE(Equal(before[1].value(), after[1].value()));
  EXPECT_TRUE(Equal(before[2].value(), after[2].value()));
}

TEST(ProgressiveModel, OutputsInvertToInputDuration) {
  SpeechEnhancer enh(ModelConfig::Toy(), 14);
  audio::Waveform w;
  std::mt19937_64 rng(15);
  std::normal_distribution<double> g(0.0, 0.1);
  for (int i = 0; i < 3000; ++i) w.samples.push_back(g(rng));
  const auto result = enh.Enhance(w, /*use_compensation=*/false);
  ASSERT_EQ(result.intermediates.size(), 3u);
  for (const auto& s : result.intermediates) EXPECT_EQ(s.size(), w.size());
  EXPECT_EQ(result.enhanced.size(), w.size());
}

TEST(ProgressiveModel, GradientsFiniteOverRandomSteps) {
  SpeechEnhancer enh(Tiny(), 16);
  std::mt19937_64 rng(17);
  for (int step = 0; step < 10; ++step) {
    enh.params().ZeroGrad();
    const auto outs = enh.model().Forward(Var(RandomTensor({2, 5, 9, 2}, rng)));
    Var loss = nn::SumAll(outs[0]);
    for (size_t k = 1; k < outs.size(); ++k)
      loss = nn::Add(loss, nn::WeightedSum(outs[k], RandomTensor(outs[k].shape(), rng)));
    loss.Backward();
    for (const auto& group : enh.params().GroupNames()) {
      if (group == "pitch_estimator" || group == "mask_module") continue;
      for (auto& p : enh.params().Group(group)) {
        if (p.is_buffer) continue;
        ASSERT_TRUE(p.var.has_grad()) << group << "/" << p.name;
        ASSERT_TRUE(p.var.grad().AllFinite()) << group << "/" << p.name;
        for (std::int64_t i = 0; i < p.var.value().size(); ++i)
          p.var.mutable_value()[i] -= 1e-3f * p.var.grad()[i];
      }
    }
  }
}

TEST(GridNetBlock, InputGradientMatchesFiniteDifferences) {
  ModelConfig cfg = Tiny();
  nn::ParameterSet ps;
  std::mt19937_64 rng(18);
  GridNetBlock block(ps, "b", cfg, rng);
  CheckGradients([&](const std::vector<Var>& v) { return block.Forward(v[0]); },
                 {RandomTensor({1, 5, 9, 4}, rng)}, 3e-2);
}

TEST(GridNetBlock, ParameterGradientsMatchFiniteDifferences) {
  ModelConfig cfg = Tiny();
  nn::ParameterSet ps;
  std::mt19937_64 rng(19);
  GridNetBlock block(ps, "b", cfg, rng);
  const Tensor x = RandomTensor({1, 5, 9, 4}, rng);
  const Tensor r = RandomTensor({1, 5, 9, 4}, rng);
  nn::WeightedSum(block.Forward(Var(x)), r).Backward();
  auto eval = [&] {
    nn::NoGradGuard no_grad;
    const Var y = block.Forward(Var(x));
    double s = 0.0;
    for (std::int64_t i = 0; i < r.size(); ++i) s += double(y.value()[i]) * r[i];
    return s;
  };
  const float h = 2e-3f;
  for (auto& p : ps.Group("b")) {
    ASSERT_TRUE(p.var.has_grad()) << p.name;
    for (std::int64_t i = 0; i < std::min<std::int64_t>(3, p.var.value().size()); ++i) {
      const float x0 = p.var.value()[i];
      p.var.mutable_value()[i] = x0 + h;
      const double lp = eval();
      p.var.mutable_value()[i] = x0 - h;
      const double lm = eval();
      p.var.mutable_value()[i] = x0;
      const double fd = (lp - lm) / (2 * h), an = p.var.grad()[i];
      EXPECT_NEAR(an, fd, 3e-2 * std::max({1.0, std::abs(fd), std::abs(an)})) << p.name << "[" << i << "]";
    }
  }
}

TEST(SeBlock, RecurrentStandInIsSwappable) {
  ModelConfig cfg = ModelConfig::Toy();
  cfg.block = SeBlockKind::kRecurrent;
  SpeechEnhancer enh(cfg, 20);
  EXPECT_FALSE(enh.params().Find("se_block[0]", "attn.query.weight"));
  EXPECT_TRUE(enh.params().Find("se_block[0]", "time.rnn.fwd.w_ih") ||
              enh.params().NumElements("se_block[0]") > 0);
  std::mt19937_64 rng(21);
  nn::NoGradGuard no_grad;
  const auto outs = enh.model().Forward(Var(RandomTensor({1, 6, 257, 2}, rng)));
  EXPECT_EQ(outs.size(), 3u);
}

TEST(Checkpoint, RoundTripIsBitwise) {
  const auto dir = std::filesystem::temp_directory_path() / "spse_ckpt_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "m.ckpt").string();
  SpeechEnhancer a(ModelConfig::Toy(), 22), b(ModelConfig::Toy(), 23);
  Checkpoint ckpt;
  ckpt.meta["stage"] = "pl";
  ckpt.meta["step"] = 17;
  ckpt.tensors = ExportParameters(a.params());
  WriteCheckpoint(path, ckpt);
  EXPECT_FALSE(std::filesystem::exists(path + ".tmp"));
  const Checkpoint back = ReadCheckpoint(path);
  EXPECT_EQ(back.meta["step"], 17);
  EXPECT_EQ(ImportParameters(b.params(), back, true),
            static_cast<int>(ckpt.tensors.size()));
  for (const auto& g : a.params().GroupNames())
    EXPECT_EQ(a.params().Checksum(g), b.params().Checksum(g)) << g;

  // Truncation and foreign files are data errors.
  const auto size = std::filesystem::file_size(path);
  std::filesystem::resize_file(path, size - 10);
  EXPECT_THROW(ReadCheckpoint(path), DataError);
  std::ofstream(path) << "not a checkpoint at all";
  EXPECT_THROW(ReadCheckpoint(path), DataError);

  ModelConfig other = ModelConfig::Toy();
  other.embed_dim = 6;
  SpeechEnhancer c(other, 24);
  EXPECT_THROW(ImportParameters(c.params(), back, true), DataError);
  std::filesystem::remove_all(dir);
}

TEST(ModelConfig, KeyValueRoundTrip) {
  ModelConfig cfg = ModelConfig::Toy();
  cfg.use_phase_encoder = false;
  cfg.block = SeBlockKind::kRecurrent;
  cfg.pitch_source = PitchSource::kMixture;
  KeyValueConfig kv;
  cfg.Write(kv);
  ModelConfig back;
  back.Read(KeyValueConfig::Parse(kv.ToText()));
  KeyValueConfig kv2;
  back.Write(kv2);
  EXPECT_EQ(kv.values(), kv2.values());
  EXPECT_DOUBLE_EQ(back.gamma, 1.0 / 3.0);
  EXPECT_EQ(back.PitchSourceStage(), 0);
  EXPECT_THROW(ModelConfig().Read(KeyValueConfig::Parse("model.pitch_source = ears\n")), ConfigError);
  EXPECT_THROW(ModelConfig().Read(KeyValueConfig::Parse("model.K = 0\n")), ConfigError);
  EXPECT_THROW(ModelConfig().Read(KeyValueConfig::Parse("model.K = four\n")), ConfigError);
  ModelConfig frac;
  frac.Read(KeyValueConfig::Parse("model.gamma = 1/2\n"));
  EXPECT_DOUBLE_EQ(frac.gamma, 0.5);
}

TEST(ModelConfig, PitchSourceStages) {
  ModelConfig cfg;
  EXPECT_EQ(cfg.PitchSourceStage(), 4);
  cfg.pitch_source = PitchSource::kCoarse;
  EXPECT_EQ(cfg.PitchSourceStage(), 5);
  cfg.pitch_source = PitchSource::kMixture;
  EXPECT_EQ(cfg.PitchSourceStage(), 0);
  cfg.pitch_source = PitchSource::kIntermediate;
  cfg.use_progressive = false;
  EXPECT_EQ(cfg.PitchSourceStage(), 5);
}

TEST(SpectralTensor, StackAndUnstack) {
  audio::StftConfig cfg;
  audio::Waveform w;
  std::mt19937_64 rng(25);
  std::normal_distribution<double> g;
  for (int i = 0; i < 2048; ++i) w.samples.push_back(g(rng));
  const auto s = audio::Stft(w, cfg);
  const auto c = audio::Compress(s, 1.0 / 3.0);
  const Tensor t = StackCompressed(std::span(&c, 1));
  const auto back = CompressedItem(t, 0, 1.0 / 3.0);
  for (size_t i = 0; i < c.real_c.size(); ++i) {
    EXPECT_NEAR(back.real_c[i], c.real_c[i], 1e-6 * std::max(1.0, std::abs(c.real_c[i])));
    EXPECT_NEAR(back.imag_c[i], c.imag_c[i], 1e-6 * std::max(1.0, std::abs(c.imag_c[i])));
  }
  const Tensor spec = StackSpectrograms(std::span(&s, 1));
  EXPECT_EQ(spec.shape(), (nn::Shape{1, s.frames(), 257, 2}));
  EXPECT_FLOAT_EQ(spec[2], static_cast<float>(s.data()[1].real()));
}

}  // namespace
}  // namespace spse::model
