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

// Command-line front end: synth, train, enhance, eval, plot and ablate.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "spse/app/pipeline.h"
#include "spse/app/run_config.h"
#include "spse/audio/stft.h"
#include "spse/audio/wav.h"
#include "spse/data/corpus.h"
#include "spse/data/dataset.h"
#include "spse/data/manifest.h"
#include "spse/error.h"
#include "spse/eval/metrics.h"
#include "spse/eval/report.h"
#include "spse/eval/spectrogram_image.h"
#include "spse/model/checkpoint.h"
#include "spse/pitch/comb_filter.h"
#include "spse/train/stage.h"
#include "spse/train/trainer.h"

namespace {

namespace fs = std::filesystem;
using spse::app::RunConfig;

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

struct GlobalFlags {
  std::string config;
  std::int64_t seed = -1;
  bool deterministic = false;
};

RunConfig MakeRunConfig(const GlobalFlags& g) {
  RunConfig cfg = g.config.empty() ? RunConfig::FromKeyValue({}) : RunConfig::Load(g.config);
  if (g.seed >= 0) cfg.SetSeed(static_cast<std::uint64_t>(g.seed));
  if (g.deterministic) cfg.deterministic = true;
  if (cfg.deterministic) cfg.synth.workers = 1;
  return cfg;
}

// ---- synth

struct SynthArgs {
  std::string manifest;
  int toy = 0;
  double toy_snr_min = -10.0;
  double toy_snr_max = 0.0;
  double toy_seconds = 1.0;
  std::string out;
};

int RunSynth(const GlobalFlags& g, const SynthArgs& a) {
  const RunConfig cfg = MakeRunConfig(g);
  std::vector<spse::data::ManifestEntry> entries;
  if (a.toy > 0) {
    spse::data::ToyCorpusOptions opts;
    opts.count = a.toy;
    opts.snr_min_db = a.toy_snr_min;
    opts.snr_max_db = a.toy_snr_max;
    opts.vowel.seconds = a.toy_seconds;
    opts.seed = cfg.seed;
    const fs::path sources = fs::path(a.out) / "sources";
    spse::data::WriteToyCorpus(sources.string(), opts);
    entries = spse::data::ReadManifest((sources / "manifest.jsonl").string());
  } else {
    entries = spse::data::ReadManifest(a.manifest);
  }
  const auto summary = spse::data::SynthesizeDataset(entries, a.out, cfg.synth);
  for (const auto& [id, reason] : summary.failures)
    std::cerr << "skipped " << id << ": " << reason << '\n';
  std::cout << "wrote " << summary.written << " of " << entries.size() << " items to "
            << a.out << '\n';
  return 0;
}

// ---- train

struct TrainArgs {
  std::string stage;
  std::string data;
  std::string out;
  std::string init;
  std::string resume;
  std::string log;
  std::int64_t max_steps = -1;
};

int RunTrain(const GlobalFlags& g, const TrainArgs& a) {
  const RunConfig cfg = MakeRunConfig(g);
  const spse::train::Stage stage = spse::train::ParseStage(a.stage);
  if (!a.init.empty() && !a.resume.empty())
    throw spse::ConfigError("--init and --resume are exclusive");

  auto examples = spse::data::LoadDataset(a.data, "train");
  if (examples.empty()) throw spse::DataError("no train items in " + a.data);
  std::unique_ptr<spse::model::SpeechEnhancer> enh;
  std::set<spse::train::Stage> completed;
  std::optional<spse::model::Checkpoint> snapshot;
  const std::string source = !a.resume.empty() ? a.resume : a.init;
  if (!source.empty()) {
    auto loaded = spse::app::LoadModel(source);
    enh = std::move(loaded.enhancer);
    completed = loaded.completed;
    if (!a.resume.empty()) snapshot = spse::model::ReadCheckpoint(a.resume);
  } else {
    enh = std::make_unique<spse::model::SpeechEnhancer>(cfg.model, cfg.seed);
  }

  spse::train::Trainer trainer(*enh, cfg.train, stage, std::move(examples), completed);
  if (snapshot) trainer.Resume(*snapshot);

  fs::create_directories(a.out);
  const std::string log_path = a.log.empty()
      ? (fs::path(a.out) / (spse::train::StageName(stage) + ".log.jsonl")).string()
      : a.log;
  std::ofstream log(log_path, snapshot ? std::ios::app : std::ios::trunc);
  if (!log) throw spse::DataError("cannot write " + log_path);
  trainer.Run(&log, a.out, a.max_steps);
  std::cout << spse::train::StageName(stage) << ": step " << trainer.step() << " of "
            << trainer.total_steps() << ", checkpoint "
            << (fs::path(a.out) / (spse::train::StageName(stage) + ".ckpt")).string() << '\n';
  return 0;
}

// ---- enhance

struct EnhanceArgs {
  std::string in;
  std::string checkpoint;
  std::string out;
  std::string stage;
  bool dump = false;
};

int RunEnhance(const GlobalFlags& g, const EnhanceArgs& a) {
  MakeRunConfig(g);
  auto loaded = spse::app::LoadModel(a.checkpoint);
  const auto& enh = *loaded.enhancer;
  const std::string want = a.stage.empty()
      ? (enh.has_compensation() ? "hc" : "pl") : a.stage;
  const spse::train::Stage stage = spse::train::ParseStage(want);
  if (stage == spse::train::Stage::kPitch)
    throw spse::ConfigError("enhance runs stage pl or hc");
  if (stage == spse::train::Stage::kHc && !enh.has_compensation())
    throw spse::DataError(a.checkpoint + " has no harmonic compensation");
  if (!loaded.completed.count(stage))
    throw spse::DataError(a.checkpoint + " has not completed stage " + want);

  const auto noisy = spse::audio::ReadWav(a.in);
  const spse::audio::StftConfig stft;
  if (noisy.size() < static_cast<size_t>(stft.win_len))
    throw spse::DataError(a.in + " is shorter than one analysis window");
  const auto result = enh.Enhance(noisy, stage == spse::train::Stage::kHc, stft);
  spse::app::RequireFinite(result.enhanced, "enhanced output");
  if (const auto parent = fs::path(a.out).parent_path(); !parent.empty())
    fs::create_directories(parent);
  spse::audio::WriteWav(a.out, result.enhanced);
  if (!a.dump) return 0;

  const fs::path out(a.out);
  const std::string stem = (out.parent_path() / out.stem()).string();
  for (size_t k = 0; k < result.intermediates.size(); ++k) {
    if (result.intermediates[k].size() == 0) continue;
    spse::app::RequireFinite(result.intermediates[k], "intermediate " + std::to_string(k + 1));
    spse::audio::WriteWav(stem + ".s" + std::to_string(k + 1) + ".wav", result.intermediates[k]);
  }
  if (!result.pitch.empty()) spse::pitch::WriteF0Dump(stem + ".f0.txt", result.pitch);
  return 0;
}

// ---- eval

struct EvalArgs {
  std::string enhanced;
  std::string reference;
  std::string out;
  std::string json;
  std::string index;
  std::string noisy;
  std::string system = "enhanced";
};

std::map<std::string, fs::path> WavFiles(const std::string& dir) {
  if (!fs::is_directory(dir)) throw spse::DataError("not a directory: " + dir);
  std::map<std::string, fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".wav") files[e.path().stem().string()] = e.path();
  return files;
}

std::map<std::string, double> IndexSnrs(const std::string& path) {
  std::map<std::string, double> snr;
  std::ifstream in(path);
  if (!in) throw spse::DataError("cannot read " + path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      snr[j.at("id").get<std::string>()] = j.at("snr_db").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw spse::DataError(path + ": " + e.what());
    }
  }
  return snr;
}

int RunEval(const GlobalFlags& g, const EvalArgs& a) {
  const RunConfig cfg = MakeRunConfig(g);
  const auto estimates = WavFiles(a.enhanced);
  const auto references = WavFiles(a.reference);
  const auto snrs = a.index.empty() ? std::map<std::string, double>{} : IndexSnrs(a.index);
  const auto noisy = a.noisy.empty() ? std::map<std::string, fs::path>{} : WavFiles(a.noisy);

  for (const auto& [id, path] : references)
    if (!estimates.count(id)) std::cerr << "unmatched reference " << path.string() << '\n';
  spse::eval::MetricReport report;
  for (const auto& [id, path] : estimates) {
    const auto ref_it = references.find(id);
    if (ref_it == references.end()) {
      std::cerr << "unmatched estimate " << path.string() << '\n';
      continue;
    }
    try {
      const auto ref = spse::audio::ReadWav(ref_it->second.string());
      const auto est = spse::audio::ReadWav(path.string());
      std::optional<spse::audio::Waveform> mix;
      if (const auto it = noisy.find(id); it != noisy.end())
        mix = spse::audio::ReadWav(it->second.string());
      double snr = std::nan("");
      if (const auto it = snrs.find(id); it != snrs.end()) snr = it->second;
      else if (mix) snr = spse::eval::Sdr(mix->samples, ref.samples);
      if (mix) report.Add(spse::app::ScoreUtterance(id, "noisy", snr, *mix, ref, cfg.plugins, &std::cerr));
      report.Add(spse::app::ScoreUtterance(id, a.system, snr, est, ref, cfg.plugins, &std::cerr));
    } catch (const spse::DataError& e) {
      std::cerr << "skipped " << id << ": " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
      std::cerr << "skipped " << id << ": " << e.what() << '\n';
    }
  }
  if (report.rows().empty()) throw spse::DataError("no matching utterances");

  const std::string table = report.FormatTable();
  std::ofstream out(a.out);
  if (!(out << table)) throw spse::DataError("cannot write " + a.out);
  if (!a.json.empty()) {
    std::ofstream js(a.json);
    if (!(js << report.ToJson().dump(2) << '\n')) throw spse::DataError("cannot write " + a.json);
  }
  std::cout << table;
  return 0;
}

// ---- plot

struct PlotArgs {
  std::string in;
  std::string out;
  std::string f0;
};

// Marks each voiced frame's f0 bin in white.
void OverlayF0(spse::eval::Image& img, const std::string& path, const spse::audio::StftConfig& stft) {
  std::ifstream in(path);
  if (!in) throw spse::DataError("cannot read " + path);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    int frame = 0, voiced = 0;
    double f0 = 0.0;
    if (!(ss >> frame >> f0 >> voiced)) continue;
    if (!voiced || frame < 0 || frame >= img.width) continue;
    const int bin = static_cast<int>(std::lround(f0 * stft.dft_len / stft.sample_rate_hz));
    if (bin < 0 || bin >= img.height) continue;
    std::uint8_t* p = img.pixel(frame, img.height - 1 - bin);
    p[0] = p[1] = p[2] = 255;
  }
}

int RunPlot(const GlobalFlags& g, const PlotArgs& a) {
  MakeRunConfig(g);
  const spse::audio::StftConfig stft;
  const auto w = spse::audio::ReadWav(a.in);
  if (w.size() < static_cast<size_t>(stft.win_len))
    throw spse::DataError(a.in + " is shorter than one analysis window");
  auto img = spse::eval::RenderSpectrogram(spse::audio::Stft(w, stft));
  if (!a.f0.empty()) OverlayF0(img, a.f0, stft);
  spse::eval::WritePng(img, a.out);
  return 0;
}

// ---- ablate

struct AblateArgs {
  std::string data;
  std::string out;
  std::vector<std::string> variants = {"full", "no_pe", "no_hc", "no_pl"};
};

spse::model::ModelConfig Variant(spse::model::ModelConfig m, const std::string& name) {
  if (name == "no_pe") m.use_phase_encoder = false;
  else if (name == "no_hc") m.use_harmonic_compensation = false;
  else if (name == "no_pl") m.use_progressive = false;
  else if (name != "full") throw spse::ConfigError("unknown variant " + name);
  return m;
}

int RunAblate(const GlobalFlags& g, const AblateArgs& a) {
  const RunConfig cfg = MakeRunConfig(g);
  const auto train_set = spse::data::LoadDataset(a.data, "train");
  const auto test_set = spse::data::LoadDataset(a.data, "test");
  if (train_set.empty() || test_set.empty())
    throw spse::DataError(a.data + " needs both train and test items");

  spse::eval::MetricReport report;
  for (const auto& ex : test_set)
    report.Add(spse::app::ScoreUtterance(ex.id, "noisy", ex.snr_db, ex.mixture, ex.clean,
                                         cfg.plugins, &std::cerr));
  for (const auto& name : a.variants) {
    const auto model_cfg = Variant(cfg.model, name);
    const fs::path dir = fs::path(a.out) / name;
    fs::create_directories(dir);
    std::ofstream log(dir / "train.log.jsonl");
    spse::model::SpeechEnhancer enh(model_cfg, cfg.seed);
    spse::app::TrainStages(enh, cfg.train, train_set, {}, &log, dir.string());
    for (const auto& ex : test_set) {
      const auto res = enh.Enhance(ex.mixture, enh.has_compensation());
      spse::app::RequireFinite(res.enhanced, name + " output for " + ex.id);
      report.Add(spse::app::ScoreUtterance(ex.id, name, ex.snr_db, res.enhanced, ex.clean,
                                           cfg.plugins, &std::cerr));
    }
    std::cerr << name << " done\n";
  }
  const std::string table = report.FormatTable();
  std::ofstream((fs::path(a.out) / "report.txt").string()) << table;
  std::ofstream((fs::path(a.out) / "report.json").string()) << report.ToJson().dump(2) << '\n';
  std::cout << table;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Progressive speech enhancement with harmonic compensation"};
  app.require_subcommand(1);
  GlobalFlags g;
  app.add_option("--config", g.config, "key = value configuration file");
  app.add_option("--seed", g.seed, "overrides every seed in the configuration");
  app.add_flag("--deterministic", g.deterministic, "single-threaded worker pools");

  SynthArgs sa;
  auto* synth = app.add_subcommand("synth", "mix sources into a training set");
  auto* manifest = synth->add_option("--manifest", sa.manifest, "manifest.jsonl");
  auto* toy = synth->add_option("--toy", sa.toy, "generate this many vowel utterances instead");
  manifest->excludes(toy);
  synth->add_option("--toy-snr-min", sa.toy_snr_min);
  synth->add_option("--toy-snr-max", sa.toy_snr_max);
  synth->add_option("--toy-seconds", sa.toy_seconds);
  synth->add_option("--out", sa.out)->required();

  TrainArgs ta;
  auto* train = app.add_subcommand("train", "train one stage");
  train->add_option("--stage", ta.stage)->required()->check(CLI::IsMember({"pl", "pitch", "hc"}));
  train->add_option("--data", ta.data, "synth output directory")->required();
  train->add_option("--out", ta.out, "checkpoint directory")->required();
  train->add_option("--init", ta.init, "checkpoint holding the earlier stages");
  train->add_option("--resume", ta.resume, "snapshot of this stage to continue");
  train->add_option("--log", ta.log, "step log (default <out>/<stage>.log.jsonl)");
  train->add_option("--max-steps", ta.max_steps, "stop after this global step");

  EnhanceArgs ea;
  auto* enhance = app.add_subcommand("enhance", "enhance one file");
  enhance->add_option("--in", ea.in)->required();
  enhance->add_option("--checkpoint", ea.checkpoint)->required();
  enhance->add_option("--out", ea.out)->required();
  enhance->add_option("--stage", ea.stage, "hc, or pl for the coarse estimate")
      ->check(CLI::IsMember({"pl", "pitch", "hc"}));
  enhance->add_flag("--dump-intermediates", ea.dump,
                    "also write <out>.s<k>.wav and <out>.f0.txt");

  EvalArgs va;
  auto* evalc = app.add_subcommand("eval", "score enhanced files against references");
  evalc->add_option("--enhanced", va.enhanced)->required();
  evalc->add_option("--reference", va.reference)->required();
  evalc->add_option("--out", va.out, "report table")->required();
  evalc->add_option("--json", va.json, "per-utterance report");
  evalc->add_option("--index", va.index, "synth index.jsonl giving input SNRs");
  evalc->add_option("--noisy", va.noisy, "mixtures, scored as system 'noisy'");
  evalc->add_option("--system", va.system);

  PlotArgs pa;
  auto* plot = app.add_subcommand("plot", "render a spectrogram PNG");
  plot->add_option("--in", pa.in)->required();
  plot->add_option("--out", pa.out)->required();
  plot->add_option("--f0", pa.f0, "f0 track written by enhance --dump-intermediates");

  AblateArgs aa;
  auto* ablate = app.add_subcommand("ablate", "train and score each ablation on one data set");
  ablate->add_option("--data", aa.data)->required();
  ablate->add_option("--out", aa.out)->required();
  ablate->add_option("--variants", aa.variants)->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (synth->parsed()) {
      if (sa.manifest.empty() && sa.toy <= 0) {
        std::cerr << "synth needs --manifest or --toy\n";
        return kExitUsage;
      }
      return RunSynth(g, sa);
    }
    if (train->parsed()) return RunTrain(g, ta);
    if (enhance->parsed()) return RunEnhance(g, ea);
    if (evalc->parsed()) return RunEval(g, va);
    if (plot->parsed()) return RunPlot(g, pa);
    if (ablate->parsed()) return RunAblate(g, aa);
  } catch (const spse::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const spse::NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const spse::DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}
