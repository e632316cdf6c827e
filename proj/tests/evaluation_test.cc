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
#include <filesystem>
#include <fstream>
#include <iterator>
#include <numbers>
#include <random>

#include "spse/audio/resample.h"
#include "spse/audio/stft.h"
#include "spse/data/corpus.h"
#include "spse/data/mixing.h"
#include "spse/error.h"
#include "spse/eval/metrics.h"
#include "spse/eval/plugin.h"
#include "spse/eval/report.h"
#include "spse/eval/spectrogram_image.h"

namespace spse::eval {
namespace {

namespace fs = std::filesystem;

audio::Waveform Vowel(std::uint64_t seed, double seconds) {
  data::VowelOptions opts;
  opts.seconds = seconds;
  return data::SynthesizeVowel(seed, opts);
}

std::vector<double> Scaled(std::span<const double> x, double c) {
  std::vector<double> y(x.begin(), x.end());
  for (double& v : y) v *= c;
  return y;
}

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

TEST(Sdr, Definition) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  std::vector<double> s(4000), n(4000);
  for (auto& v : s) v = g(rng);
  for (auto& v : n) v = g(rng);
  // Scale the error to exactly a tenth of the signal energy.
  double es = 0, en = 0;
  for (size_t i = 0; i < s.size(); ++i) {
    es += s[i] * s[i];
    en += n[i] * n[i];
  }
  std::vector<double> est(s.size());
  for (size_t i = 0; i < s.size(); ++i) est[i] = s[i] + n[i] * std::sqrt(es / 10 / en);
  EXPECT_NEAR(Sdr(est, s), 10.0, 1e-9);
  EXPECT_NEAR(Sdr(std::vector<double>(s.size(), 0.0), s), 0.0, 1e-12);
  EXPECT_TRUE(std::isinf(Sdr(s, s)));
  EXPECT_GT(Sdr(s, s), 0.0);
  EXPECT_THROW(Sdr(std::vector<double>(3), s), std::invalid_argument);
}

TEST(Sdr, AgreesWithMixingSnr) {
  const auto clean = Vowel(2, 1.0);
  for (double snr : {-15.0, -7.5, 0.0, 12.0}) {
    const auto mix = data::MixAtSnr(clean, data::WhiteNoise(clean.size(), 3), snr, 4).mixture;
    EXPECT_NEAR(Sdr(mix.samples, clean.samples), snr, 0.01);
    EXPECT_NEAR(Sdr(mix.samples, clean.samples), audio::SnrDb(mix.samples, clean.samples), 1e-9);
  }
}

TEST(Resample, LengthDcGainAndTone) {
  std::vector<double> dc(1600, 0.7);
  const auto y = audio::ResamplePoly(dc, 10000, 16000);
  EXPECT_EQ(y.size(), 1000u);
  for (size_t i = 200; i < 800; ++i) EXPECT_NEAR(y[i], 0.7, 1e-3);
  std::vector<double> tone(16000);
  for (size_t i = 0; i < tone.size(); ++i) tone[i] = std::sin(2 * std::numbers::pi * 1000.0 * i / 16000.0);
  const auto t = audio::ResamplePoly(tone, 5, 8);
  for (size_t i = 1000; i < 9000; i += 37)
    EXPECT_NEAR(t[i], std::sin(2 * std::numbers::pi * 1000.0 * i / 10000.0), 2e-3);
  EXPECT_EQ(audio::ResamplePoly(std::vector<double>(7, 1.0), 5, 8).size(), 5u);
}

TEST(Stoi, IdentityAndScaleInvariance) {
  const auto s = Vowel(5, 2.0);
  EXPECT_NEAR(Stoi(s.samples, s.samples), 1.0, 1e-6);
  EXPECT_NEAR(Stoi(Scaled(s.samples, 3.7), s.samples), 1.0, 1e-6);
  const auto noisy = data::MixAtSnr(s, data::WhiteNoise(s.size(), 6), 0.0, 7).mixture;
  const double base = Stoi(noisy.samples, s.samples);
  EXPECT_NEAR(Stoi(Scaled(noisy.samples, 0.25), s.samples), base, 1e-9);
  EXPECT_GE(base, -1.0);
  EXPECT_LE(base, 1.0);
}

TEST(Stoi, LowerForHeavierNoise) {
  for (int i = 0; i < 20; ++i) {
    const auto s = Vowel(100 + i, 1.5);
    const auto n = data::WhiteNoise(s.size(), 200 + i);
    const auto heavy = data::MixAtSnr(s, n, -15.0, i).mixture;
    const auto light = data::MixAtSnr(s, n, 5.0, i).mixture;
    EXPECT_LT(Stoi(heavy.samples, s.samples), Stoi(light.samples, s.samples)) << i;
  }
}

TEST(Stoi, RejectsTooLittleSpeech) {
  const auto s = Vowel(8, 0.3);
  EXPECT_THROW(Stoi(s.samples, s.samples), DataError);
  EXPECT_THROW(Stoi(std::vector<double>(10), std::vector<double>(11)), std::invalid_argument);
}

data::PitchLabelMatrix Rows(const std::vector<int>& argmax) {
  data::PitchLabelMatrix m;
  m.frames = static_cast<int>(argmax.size());
  m.dims = data::PitchBins{}.dims();
  m.values.assign(static_cast<size_t>(m.frames) * m.dims, 0.0f);
  for (int t = 0; t < m.frames; ++t) m.at(t, argmax[t]) = 1.0f;
  return m;
}

TEST(PitchAccuracy, ToleranceAndVoicing) {
  const auto truth = Rows({10, 50, 225, 224, 100});
  EXPECT_DOUBLE_EQ(PitchAccuracy(truth, truth), 100.0);
  EXPECT_DOUBLE_EQ(PitchAccuracy(Rows({11, 48, 225, 225, 99}), truth), 60.0);
  EXPECT_DOUBLE_EQ(PitchAccuracy(Rows({225, 225, 225}), Rows({3, 4, 5})), 0.0);
  // Row permutation applied to both leaves the score alone.
  EXPECT_DOUBLE_EQ(PitchAccuracy(Rows({99, 225, 224, 48, 11}), Rows({100, 224, 225, 50, 10})),
                   PitchAccuracy(Rows({11, 48, 224, 225, 99}), Rows({10, 50, 225, 224, 100})));
  EXPECT_THROW(PitchAccuracy(Rows({1}), Rows({1, 2})), std::invalid_argument);
}

TEST(Spectrogram, ZeroInputIsFloorColour) {
  const audio::ComplexSpectrogram zero(4, audio::StftConfig{});
  const Image img = RenderSpectrogram(zero);
  ASSERT_EQ(img.width, 4);
  ASSERT_EQ(img.height, 257);
  const auto floor = LevelColour(kSpectrogramFloorDb);
  for (int y = 0; y < img.height; ++y)
    for (int x = 0; x < img.width; ++x)
      for (int c = 0; c < 3; ++c) ASSERT_EQ(img.pixel(x, y)[c], floor[c]);
  EXPECT_EQ(LevelColour(-200.0), floor);
}

TEST(Spectrogram, ToneDrawsARidgeAtItsBin) {
  audio::Waveform tone;
  for (int i = 0; i < 8000; ++i) tone.samples.push_back(0.5 * std::sin(2 * std::numbers::pi * 1000.0 * i / 16000.0));
  const Image img = RenderSpectrogram(audio::Stft(tone, audio::StftConfig{}));
  const int x = img.width / 2;
  int brightest = -1, best = -1;
  for (int y = 0; y < img.height; ++y) {
    const auto* p = img.pixel(x, y);
    const int level = p[0] + p[1] + p[2];
    if (level > best) {
      best = level;
      brightest = y;
    }
  }
  EXPECT_EQ(img.height - 1 - brightest, 32);
}

TEST(Spectrogram, PngIsDeterministic) {
  const fs::path dir = fs::temp_directory_path() / "spse_png_test";
  fs::create_directories(dir);
  const auto s = audio::Stft(Vowel(9, 0.5), audio::StftConfig{});
  RenderSpectrogram(s, (dir / "a.png").string());
  RenderSpectrogram(s, (dir / "b.png").string());
  const std::string a = ReadFile(dir / "a.png");
  EXPECT_EQ(a.substr(1, 3), "PNG");
  EXPECT_EQ(a, ReadFile(dir / "b.png"));
  EXPECT_THROW(RenderSpectrogram(s, (dir / "missing" / "c.png").string()), DataError);
  fs::remove_all(dir);
}

TEST(Report, BucketsAndMeans) {
  EXPECT_EQ(BucketOf(-15.0), 0);
  EXPECT_EQ(BucketOf(-5.0), 1);
  EXPECT_EQ(BucketOf(4.99), 1);
  EXPECT_EQ(BucketOf(15.0), 2);
  EXPECT_EQ(BucketOf(-16.0), -1);
  MetricReport r;
  r.Add({"a", "noisy", -10.0, {{"sdr", -10.0}, {"stoi", 0.5}}});
  r.Add({"b", "noisy", 0.0, {{"sdr", 0.0}, {"stoi", 0.7}}});
  r.Add({"a", "enhanced", -10.0, {{"sdr", 2.0}, {"stoi", 0.6}}});
  r.Add({"b", "enhanced", 0.0, {{"sdr", 8.0}, {"stoi", 0.9}}});
  EXPECT_EQ(r.Systems(), (std::vector<std::string>{"noisy", "enhanced"}));
  EXPECT_EQ(r.Metrics(), (std::vector<std::string>{"sdr", "stoi"}));
  EXPECT_DOUBLE_EQ(*r.Mean("enhanced", "sdr", -1), 5.0);
  EXPECT_DOUBLE_EQ(*r.Mean("enhanced", "sdr", 0), 2.0);
  EXPECT_FALSE(r.Mean("enhanced", "sdr", 2).has_value());
  const std::string table = r.FormatTable();
  EXPECT_NE(table.find("sdr[-15~-5]"), std::string::npos);
  EXPECT_NE(table.find("stoi[Avg]"), std::string::npos);
  EXPECT_NE(table.find("enhanced"), std::string::npos);
  const auto j = r.ToJson();
  EXPECT_EQ(j["utterances"].size(), 4u);
  EXPECT_DOUBLE_EQ(j["summary"]["noisy"]["stoi"]["Avg"].get<double>(), 0.6);
}

TEST(Plugin, RunsCommandAndParsesLastNumber) {
  const auto kv = KeyValueConfig::Parse("eval.plugin.pesq = echo {ref} {est} score: 3.25\nmodel.K = 4\n");
  const auto plugins = ReadPlugins(kv);
  ASSERT_EQ(plugins.size(), 1u);
  EXPECT_EQ(plugins[0].name, "pesq");
  EXPECT_DOUBLE_EQ(RunPlugin(plugins[0], "/tmp/r 1.wav", "/tmp/e.wav"), 3.25);
  EXPECT_THROW(RunPlugin({"bad", "exit 3"}, "r", "e"), DataError);
  EXPECT_THROW(RunPlugin({"quiet", "echo nothing"}, "r", "e"), DataError);
}

}  // namespace
}  // namespace spse::eval
