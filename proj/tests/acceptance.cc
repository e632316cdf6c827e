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

// Acceptance probes. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Criterion numbers given on the command line
// restrict the run to those.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loss_oracles.h"
#include "spse/app/pipeline.h"
#include "spse/audio/stft.h"
#include "spse/data/corpus.h"
#include "spse/data/manifest.h"
#include "spse/data/mixing.h"
#include "spse/data/pitch_labels.h"
#include "spse/eval/metrics.h"
#include "spse/hc/compensation.h"
#include "spse/model/checkpoint.h"
#include "spse/model/enhancer.h"
#include "spse/model/spectral_tensor.h"
#include "spse/pitch/comb_filter.h"
#include "spse/train/schedule.h"
#include "spse/train/stage.h"
#include "spse/train/trainer.h"
#include "train_fixtures.h"

namespace {

using namespace spse;
namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::string Fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

std::map<std::string, std::uint64_t> Checksums(const model::SpeechEnhancer& enh) {
  std::map<std::string, std::uint64_t> out;
  for (const auto& g : enh.params().GroupNames()) out[g] = enh.params().Checksum(g);
  return out;
}

Outcome StftRoundTrip() {
  const auto start = Clock::now();
  audio::StftConfig cfg;
  double worst = 0.0;
  std::mt19937_64 rng(101);
  std::normal_distribution<double> g;
  for (int i = 0; i < 100; ++i) {
    audio::Waveform x;
    x.samples.resize(32000);
    for (auto& v : x.samples) v = g(rng);
    const auto y = audio::Istft(audio::Stft(x, cfg), cfg, static_cast<int>(x.size()));
    double err = 0, ref = 0;
    for (size_t n = 0; n < x.size(); ++n) {
      err += (y.samples[n] - x.samples[n]) * (y.samples[n] - x.samples[n]);
      ref += x.samples[n] * x.samples[n];
    }
    worst = std::max(worst, std::sqrt(err / ref));
  }
  const double took = Seconds(start);
  return {worst < 1e-6 && took < 1.0,
          "max relative L2 " + Fmt("%.2e", worst) + ", " + Fmt("%.3f", took) + " s"};
}

Outcome SnrLadder() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> snr(-15.0, 0.0);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = data::SynthesizeVowel(rng());
    const auto n = data::WhiteNoise(s.size() + 4000, rng());
    const double in = snr(rng);
    const auto set = data::MakeProgressiveTargets(s, n, in, 4, 5.0, rng());
    for (int k = 1; k <= 4; ++k)
      worst = std::max(worst, std::abs(audio::SnrDb(set.targets[k - 1].samples, s.samples) -
                                       (in + 5.0 * k)));
  }
  return {worst <= 0.05, "max |measured - nominal| " + Fmt("%.4f", worst) + " dB over 50 ladders"};
}

Outcome CombFilter() {
  double dft_err = 0.0;
  for (int tau : {32, 80, 159, 160, 256}) {
    const pitch::CombFilterSpec spec{tau, pitch::kCombWeights};
    const int n = 4 * tau + 8;
    for (int k = 0; k <= n / 2; ++k) {
      const double omega = 2.0 * std::numbers::pi * k / n;
      std::complex<double> acc = 0.0;
      for (int i = -1; i <= 1; ++i) acc += spec.weights[i + 1] * std::polar(1.0, -omega * i * tau);
      dft_err = std::max(dft_err, std::abs(pitch::CombMagnitudeResponse(spec, omega) - std::abs(acc)));
    }
  }
  double gain_err = 0.0;
  const pitch::CombFilterSpec spec{160, pitch::kCombWeights};
  for (int h = 1; h <= 40; ++h) {
    const double harmonic = 2.0 * std::numbers::pi * h / 160.0;
    const double half = std::numbers::pi * (2 * h - 1) / 160.0;
    gain_err = std::max({gain_err, std::abs(pitch::CombMagnitudeResponse(spec, harmonic) - 1.0),
                         pitch::CombMagnitudeResponse(spec, half)});
  }
  audio::StftConfig cfg;
  const auto clean = data::Sawtooth(100.0, 32000, 0.3);
  const auto noisy = data::MixAtSnr(clean, data::WhiteNoise(32000, 6), 0.0, 6).mixture;
  const int frames = audio::NumFrames(noisy.size(), cfg);
  const std::vector<pitch::CombFilterSpec> specs(static_cast<size_t>(frames), spec);
  const auto out = audio::Istft(pitch::ApplyPitchFilter(noisy, specs, cfg), cfg,
                                static_cast<int>(noisy.size()));
  const double margin = eval::Sdr(out.samples, clean.samples) - eval::Sdr(noisy.samples, clean.samples);
  return {dft_err < 1e-10 && gain_err < 1e-12 && margin > 0.0,
          "DFT error " + Fmt("%.1e", dft_err) + ", harmonic gain error " + Fmt("%.1e", gain_err) +
              ", SDR improvement " + Fmt("%+.2f", margin) + " dB"};
}

Outcome LossGradients() {
  const auto f = spse::testing::CheckFreqLossGradient(100, 401);
  const auto t = spse::testing::CheckTempLossGradient(100, 402);
  const auto b = spse::testing::CheckPitchBceGradient(100, 403);
  const bool ok = f.points == 100 && t.points == 100 && b.points == 100 &&
                  f.max_rel_error < 1e-4 && t.max_rel_error < 1e-4 && b.max_rel_error < 1e-4;
  return {ok, "max relative error freq " + Fmt("%.1e", f.max_rel_error) + ", temp " +
                  Fmt("%.1e", t.max_rel_error) + ", bce " + Fmt("%.1e", b.max_rel_error)};
}

Outcome Warmup() {
  const double a = train::LrAtStep(1), b = train::LrAtStep(10000), c = train::LrAtStep(40000);
  bool shape = true;
  for (int s = 2; s <= 10000; ++s) shape = shape && train::LrAtStep(s) > train::LrAtStep(s - 1);
  for (int s = 10001; s <= 40000; ++s) shape = shape && train::LrAtStep(s) < train::LrAtStep(s - 1);
  const bool exact = std::abs(a - 1e-7) <= 1e-7 * 1e-12 && std::abs(b - 1e-3) <= 1e-3 * 1e-12 &&
                     std::abs(c - 5e-4) <= 5e-4 * 1e-12;
  return {exact && shape, "lr(1) " + Fmt("%.6g", a) + ", lr(10000) " + Fmt("%.6g", b) +
                              ", lr(40000) " + Fmt("%.6g", c) +
                              (shape ? ", rises then falls" : ", not unimodal")};
}

Outcome FreezeInvariants() {
  const auto examples = spse::testing::VowelExamples(4, 0.6, -5.0, 606);
  train::TrainConfig cfg;
  cfg.steps_per_epoch = 10;
  cfg.batch_size = 1;
  cfg.crop_seconds = 0.5;
  cfg.warmup_steps = 20;
  cfg.lr_scale = 1.0;
  std::string detail;
  bool ok = true;
  for (train::Stage stage : {train::Stage::kPitch, train::Stage::kHc}) {
    model::SpeechEnhancer enh(model::ModelConfig::Toy(), 6);
    train::Trainer trainer(enh, cfg, stage, examples, {train::Stage::kPl, train::Stage::kPitch});
    const auto before = Checksums(enh);
    for (int i = 0; i < 10; ++i) trainer.Step();
    const auto after = Checksums(enh);
    const auto learnable = train::LearnableGroups(stage, enh.config());
    int frozen = 0, changed = 0, trained = 0;
    for (const auto& [group, sum] : before) {
      if (learnable.count(group)) {
        trained += sum != after.at(group);
      } else {
        ++frozen;
        changed += sum != after.at(group);
      }
    }
    ok = ok && changed == 0 && trained == static_cast<int>(learnable.size());
    detail += train::StageName(stage) + ": " + std::to_string(frozen) + " frozen groups, " +
              std::to_string(changed) + " changed, " + std::to_string(trained) + "/" +
              std::to_string(learnable.size()) + " learnable moved; ";
  }
  detail.resize(detail.size() - 2);
  return {ok, detail};
}

Outcome OverfitProbe() {
  const auto start = Clock::now();
  const auto examples = spse::testing::VowelExamples(2, 1.0, -5.0, 707);
  train::TrainConfig cfg;
  cfg.steps_per_epoch = 500;
  cfg.epochs_pl = 1;
  cfg.batch_size = 2;
  cfg.crop_seconds = 1.0;
  cfg.warmup_steps = 100;
  cfg.lr_scale = 100;
  cfg.seed = 7;
  model::SpeechEnhancer enh(model::ModelConfig::Toy(), 7);
  train::Trainer trainer(enh, cfg, train::Stage::kPl, examples);
  trainer.FixBatch({0, 1});
  const double first = trainer.Step().total();
  double last = first;
  int steps = 1;
  while (!trainer.finished()) {
    last = trainer.Step().total();
    ++steps;
  }
  const double reduction = (first - last) / std::abs(first);
  const double took = Seconds(start);
  return {reduction >= 0.8 && took < 600.0,
          "L_PL " + Fmt("%.1f", first) + " -> " + Fmt("%.1f", last) + " (" +
              Fmt("%.1f", 100 * reduction) + "% lower) in " + std::to_string(steps) + " steps, " +
              Fmt("%.0f", took) + " s"};
}

struct SeedResult {
  double sdr_noisy = 0, sdr_enh = 0, stoi_noisy = 0, stoi_enh = 0;
  double pitch_intermediate = 0, pitch_mixture = 0;
};

double MeanPitchAccuracy(const model::SpeechEnhancer& enh, const std::vector<data::Example>& test) {
  double acc = 0;
  int n = 0;
  for (const auto& ex : test) {
    if (ex.snr_db > -10.0 + 1e-6) continue;
    acc += eval::PitchAccuracy(enh.Enhance(ex.mixture, true).posterior, ex.labels);
    ++n;
  }
  return n ? acc / n : std::nan("");
}

SeedResult DeskScaleSeed(std::uint64_t seed, const fs::path& dir) {
  data::ToyCorpusOptions corpus;
  corpus.count = 200;
  corpus.snr_min_db = -10.0;
  corpus.snr_max_db = 0.0;
  corpus.seed = seed;
  data::WriteToyCorpus((dir / "sources").string(), corpus);
  const auto model_cfg = model::ModelConfig::Toy();
  data::SynthConfig synth;
  synth.num_intermediate = model_cfg.num_intermediate;
  data::SynthesizeDataset(data::ReadManifest((dir / "sources" / "manifest.jsonl").string()),
                          dir.string(), synth);
  const auto train_set = data::LoadDataset(dir.string(), "train");
  const auto test_set = data::LoadDataset(dir.string(), "test");

  train::TrainConfig cfg;
  cfg.batch_size = 2;
  cfg.crop_seconds = 1.0;
  cfg.steps_per_epoch = 100;
  cfg.epochs_pl = 8;
  cfg.epochs_pitch = 10;
  cfg.epochs_hc = 6;
  cfg.warmup_steps = 200;
  cfg.lr_scale = 300;
  cfg.seed = seed;
  model::SpeechEnhancer enh(model_cfg, seed);
  app::TrainStages(enh, cfg, train_set, {});

  // Same SE weights, pitch estimator trained on the noisy mixture instead.
  auto mix_cfg = model_cfg;
  mix_cfg.pitch_source = model::PitchSource::kMixture;
  model::SpeechEnhancer from_mixture(mix_cfg, seed + 1000);
  model::Checkpoint se_only;
  for (auto& t : model::ExportParameters(enh.params()))
    if (!t.name.starts_with(std::string(model::kPitchGroup) + "/")) se_only.tensors.push_back(t);
  model::ImportParameters(from_mixture.params(), se_only, /*require_all=*/false);
  train::Trainer pitch_trainer(from_mixture, cfg, train::Stage::kPitch, train_set, {train::Stage::kPl});
  pitch_trainer.Run(nullptr, "");

  SeedResult r;
  for (const auto& ex : test_set) {
    const auto out = enh.Enhance(ex.mixture, true);
    r.sdr_noisy += eval::Sdr(ex.mixture.samples, ex.clean.samples);
    r.sdr_enh += eval::Sdr(out.enhanced.samples, ex.clean.samples);
    r.stoi_noisy += eval::Stoi(ex.mixture.samples, ex.clean.samples);
    r.stoi_enh += eval::Stoi(out.enhanced.samples, ex.clean.samples);
  }
  const double n = static_cast<double>(test_set.size());
  r.sdr_noisy /= n;
  r.sdr_enh /= n;
  r.stoi_noisy /= n;
  r.stoi_enh /= n;
  r.pitch_intermediate = MeanPitchAccuracy(enh, test_set);
  r.pitch_mixture = MeanPitchAccuracy(from_mixture, test_set);
  return r;
}

Outcome DeskScale() {
  const auto start = Clock::now();
  const fs::path root = fs::temp_directory_path() / "spse_acceptance_desk";
  fs::remove_all(root);
  SeedResult mean;
  std::string per_seed;
  const std::vector<std::uint64_t> seeds = {1, 2, 3};
  for (std::uint64_t seed : seeds) {
    const auto r = DeskScaleSeed(seed, root / ("seed" + std::to_string(seed)));
    std::printf("  seed %llu: SDR %.2f -> %.2f dB, STOI %.3f -> %.3f, pitch@-10dB %.1f%% (S~_K) vs %.1f%% (X)\n",
                static_cast<unsigned long long>(seed), r.sdr_noisy, r.sdr_enh, r.stoi_noisy,
                r.stoi_enh, r.pitch_intermediate, r.pitch_mixture);
    std::fflush(stdout);
    mean.sdr_noisy += r.sdr_noisy / seeds.size();
    mean.sdr_enh += r.sdr_enh / seeds.size();
    mean.stoi_noisy += r.stoi_noisy / seeds.size();
    mean.stoi_enh += r.stoi_enh / seeds.size();
    mean.pitch_intermediate += r.pitch_intermediate / seeds.size();
    mean.pitch_mixture += r.pitch_mixture / seeds.size();
  }
  fs::remove_all(root);
  const double d_sdr = mean.sdr_enh - mean.sdr_noisy, d_stoi = mean.stoi_enh - mean.stoi_noisy;
  return {d_sdr >= 3.0 && d_stoi >= 0.05 && mean.pitch_intermediate > mean.pitch_mixture,
          "mean over 3 seeds: SDR " + Fmt("%+.2f", d_sdr) + " dB, STOI " + Fmt("%+.3f", d_stoi) +
              ", pitch accuracy at -10 dB " + Fmt("%.1f", mean.pitch_intermediate) + "% from S~_K vs " +
              Fmt("%.1f", mean.pitch_mixture) + "% from X, " + Fmt("%.0f", Seconds(start)) + " s"};
}

Outcome CompensationStructure() {
  std::mt19937_64 rng(909);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  audio::ComplexSpectrogram coarse(4, audio::StftConfig{}), filtered(4, audio::StftConfig{});
  for (auto& v : coarse.data()) v = {g(rng), g(rng)};
  for (auto& v : filtered.data()) v = {g(rng), g(rng)};
  std::vector<double> mask(coarse.data().size());
  for (auto& m : mask) m = u(rng);
  const auto out = hc::Compensate(coarse, filtered, mask);
  double phase_err = 0.0, excess = -1e300;
  for (size_t i = 0; i < out.data().size(); ++i) {
    const auto c = coarse.data()[i], o = out.data()[i];
    phase_err = std::max(phase_err, std::abs(std::arg(o * std::conj(c))));
    excess = std::max(excess, std::abs(o) - std::abs(c) - std::abs(filtered.data()[i]));
  }
  return {out.data().size() >= 1000 && phase_err < 1e-9 && excess <= 1e-12,
          std::to_string(out.data().size()) + " bins, max phase error " + Fmt("%.1e", phase_err) +
              " rad, max |S~| - (|coarse| + |filtered|) " + Fmt("%.3f", excess)};
}

Outcome F0Oracle() {
  data::PitchBins bins;
  int good = 0, total = 0;
  for (double f = 62.5; f <= 500.0; f *= 1.02) {
    const auto track = data::ExtractF0(data::Sawtooth(f, 8000), audio::StftConfig{});
    const int truth = bins.Bin(f);
    for (int t = 0; t < track.frames(); ++t, ++total)
      good += track.voiced[t] && std::abs(bins.Bin(track.f0_hz[t]) - truth) <= 1;
  }
  const double pct = 100.0 * good / total;
  return {pct >= 95.0, Fmt("%.2f", pct) + "% of " + std::to_string(total) + " frames within one bin"};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"stft round trip", StftRoundTrip},
      {"snr ladder", SnrLadder},
      {"comb filter", CombFilter},
      {"loss gradients", LossGradients},
      {"warmup schedule", Warmup},
      {"freeze invariants", FreezeInvariants},
      {"overfit probe", OverfitProbe},
      {"desk-scale end to end", DeskScale},
      {"compensation structure", CompensationStructure},
      {"f0 oracle", F0Oracle},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    if (!only.empty() && !only.count(id)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("%s %2d %s: %s\n", o.pass ? "PASS" : "FAIL", id, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
