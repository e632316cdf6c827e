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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

#include <json.hpp>

#include "spse/audio/wav.h"
#include "spse/data/corpus.h"
#include "spse/data/manifest.h"

namespace {

namespace fs = std::filesystem;

// Runs the command-line tool and returns its exit status.
int Spse(const std::string& args) {
  const std::string cmd = std::string(SPSE_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string Slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

class CliTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    root_ = fs::temp_directory_path() / "spse_cli_test";
    fs::remove_all(root_);
    fs::create_directories(root_);
    std::ofstream(root_ / "toy.cfg") << "model.preset = toy\n"
                                        "train.epochs_pl = 1\n"
                                        "train.epochs_pitch = 1\n"
                                        "train.epochs_hc = 1\n"
                                        "train.steps_per_epoch = 2\n"
                                        "train.batch_size = 2\n"
                                        "train.crop_seconds = 1\n"
                                        "train.warmup_steps = 10\n";
  }
  static void TearDownTestSuite() { fs::remove_all(root_); }

  static std::string P(const std::string& rel) { return (root_ / rel).string(); }
  static std::string Cfg() { return "--config " + P("toy.cfg") + " --deterministic "; }

  // synth -> three stages -> enhance every test item -> eval, in `dir`.
  static void Pipeline(const std::string& dir) {
    ASSERT_EQ(Spse(Cfg() + "synth --toy 5 --out " + P(dir + "/data")), 0);
    const std::string data = " --data " + P(dir + "/data") + " --out " + P(dir + "/ck");
    ASSERT_EQ(Spse(Cfg() + "train --stage pl" + data), 0);
    ASSERT_EQ(Spse(Cfg() + "train --stage pitch --init " + P(dir + "/ck/pl.ckpt") + data), 0);
    ASSERT_EQ(Spse(Cfg() + "train --stage hc --init " + P(dir + "/ck/pitch.ckpt") + data), 0);
    fs::create_directories(P(dir + "/enh"));
    for (const auto& e : fs::directory_iterator(P(dir + "/data/mix")))
      ASSERT_EQ(Spse("enhance --in " + e.path().string() + " --checkpoint " + P(dir + "/ck/hc.ckpt") +
                     " --out " + P(dir + "/enh/") + e.path().filename().string()),
                0);
    ASSERT_EQ(Spse(Cfg() + "eval --enhanced " + P(dir + "/enh") + " --reference " +
                   P(dir + "/data/clean") + " --index " + P(dir + "/data/index.jsonl") +
                   " --out " + P(dir + "/report.txt") + " --json " + P(dir + "/report.json")),
              0);
  }

  static inline fs::path root_;
};

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(Spse(""), 1);
  EXPECT_EQ(Spse("--bogus plot --in a --out b"), 1);
  EXPECT_EQ(Spse("train --stage sideways --data a --out b"), 1);
  EXPECT_EQ(Spse("synth --out " + P("nothing")), 1);
  std::ofstream(root_ / "bad.cfg") << "model.nonsense = 3\n";
  EXPECT_EQ(Spse("--config " + P("bad.cfg") + " plot --in a --out b"), 1);
  EXPECT_EQ(Spse("--config " + P("absent.cfg") + " plot --in a --out b"), 1);
  EXPECT_EQ(Spse("--help"), 0);
}

TEST_F(CliTest, DataErrorsExitTwo) {
  EXPECT_EQ(Spse("plot --in " + P("absent.wav") + " --out " + P("x.png")), 2);
  EXPECT_EQ(Spse("enhance --in a.wav --checkpoint " + P("absent.ckpt") + " --out b.wav"), 2);
  EXPECT_EQ(Spse("train --stage pl --data " + P("absent") + " --out " + P("ck")), 2);
}

TEST_F(CliTest, EmptyManifestGivesEmptyIndex) {
  std::ofstream(root_ / "empty.jsonl") << "";
  EXPECT_EQ(Spse("synth --manifest " + P("empty.jsonl") + " --out " + P("empty")), 0);
  EXPECT_EQ(Slurp(root_ / "empty" / "index.jsonl"), "");
}

TEST_F(CliTest, SynthListsBrokenItemsAndKeepsTheRest) {
  const fs::path src = root_ / "partial_src";
  spse::data::ToyCorpusOptions opts;
  opts.count = 3;
  spse::data::WriteToyCorpus(src.string(), opts);
  auto entries = spse::data::ReadManifest((src / "manifest.jsonl").string());
  entries[1].clean_path = (src / "gone.wav").string();
  spse::data::WriteManifest((src / "broken.jsonl").string(), entries);
  EXPECT_EQ(Spse("synth --manifest " + (src / "broken.jsonl").string() + " --out " + P("partial")), 0);
  EXPECT_TRUE(fs::exists(root_ / "partial" / "mix" / (entries[0].id + ".wav")));
  EXPECT_FALSE(fs::exists(root_ / "partial" / "mix" / (entries[1].id + ".wav")));
  EXPECT_TRUE(fs::exists(root_ / "partial" / "mix" / (entries[2].id + ".wav")));
}

TEST_F(CliTest, EndToEndIsDeterministic) {
  Pipeline("run1");
  Pipeline("run2");
  const std::string a = Slurp(root_ / "run1" / "report.json");
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, Slurp(root_ / "run2" / "report.json"));
  EXPECT_EQ(Slurp(root_ / "run1" / "report.txt"), Slurp(root_ / "run2" / "report.txt"));
}

TEST_F(CliTest, EnhanceContracts) {
  if (!fs::exists(root_ / "run1" / "ck" / "hc.ckpt")) Pipeline("run1");
  const auto mix = (root_ / "run1" / "data" / "mix").string();
  const std::string in = fs::directory_iterator(mix)->path().string();
  const std::string ck = " --checkpoint " + P("run1/ck/");

  ASSERT_EQ(Spse("enhance --in " + in + ck + "hc.ckpt --out " + P("dump/out.wav") + " --dump-intermediates"), 0);
  const auto noisy = spse::audio::ReadWav(in);
  const auto out = spse::audio::ReadWav(P("dump/out.wav"));
  EXPECT_LE(std::abs(static_cast<long>(out.size()) - static_cast<long>(noisy.size())), 256);
  bool finite = true;
  for (double v : out.samples) finite = finite && std::isfinite(v);
  EXPECT_TRUE(finite);
  int dumped = 0;
  for (const auto& e : fs::directory_iterator(P("dump")))
    if (e.path().filename().string().starts_with("out.s")) ++dumped;
  EXPECT_EQ(dumped, 3);  // toy model: K = 2
  EXPECT_TRUE(fs::exists(P("dump/out.f0.txt")));

  // A model without a finished HC stage cannot serve HC output.
  EXPECT_EQ(Spse("enhance --in " + in + ck + "pl.ckpt --out " + P("dump/pl.wav")), 2);
  EXPECT_EQ(Spse("enhance --in " + in + ck + "pl.ckpt --out " + P("dump/pl.wav") + " --stage pl"), 0);
  EXPECT_EQ(Spse("enhance --in " + in + ck + "pl.ckpt --out " + P("dump/pl.wav") + " --stage pitch"), 1);
  // Stage prerequisites.
  EXPECT_EQ(Spse(Cfg() + "train --stage hc --init " + P("run1/ck/pl.ckpt") + " --data " +
                 P("run1/data") + " --out " + P("bad_ck")),
            2);
  EXPECT_EQ(Spse("plot --in " + in + " --out " + P("dump/s.png") + " --f0 " + P("dump/out.f0.txt")), 0);
  EXPECT_TRUE(fs::exists(P("dump/s.png")));
}

TEST_F(CliTest, SelfEvaluationIsPerfect) {
  if (!fs::exists(root_ / "run1" / "data")) Pipeline("run1");
  const std::string clean = P("run1/data/clean");
  ASSERT_EQ(Spse("eval --enhanced " + clean + " --reference " + clean + " --out " + P("self.txt") +
                 " --json " + P("self.json")),
            0);
  const auto js = nlohmann::json::parse(Slurp(root_ / "self.json"));
  ASSERT_FALSE(js["utterances"].empty());
  for (const auto& u : js["utterances"]) {
    EXPECT_EQ(u["sdr"], "inf");
    EXPECT_NEAR(u["stoi"].get<double>(), 1.0, 1e-6);
  }
}

}  // namespace
