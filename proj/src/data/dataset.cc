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

#include "spse/data/dataset.h"

#include <atomic>
#include <filesystem>
#include <fstream>
#include <optional>
#include <thread>

#include <json.hpp>

#include "spse/audio/wav.h"
#include "spse/error.h"

namespace spse::data {

namespace fs = std::filesystem;

SynthItem SynthesizeItem(const ManifestEntry& entry, const SynthConfig& cfg) {
  const audio::Waveform dry = audio::ReadWav(entry.clean_path);
  const audio::Waveform noise = audio::ReadWav(entry.noise_path);
  audio::Waveform speech = dry, target = dry;
  if (entry.rir_path) {
    RoomImpulseResponse rir;
    rir.taps = audio::ReadWav(*entry.rir_path).samples;
    auto pair = EarlyReflectionTarget(dry, rir);
    speech = std::move(pair.reverberant);
    target = std::move(pair.target);
  }
  SynthItem item;
  item.id = entry.id;
  item.split = entry.split;
  item.snr_db = entry.snr_db;
  MixResult mix = MixAtSnr(speech, noise, entry.snr_db, entry.seed);
  // The reverberant tail counts as interference: the mixture is the target
  // plus everything else, and the ladder scales that residual.
  item.mixture = std::move(mix.mixture);
  std::vector<double> residual(target.size());
  for (size_t i = 0; i < residual.size(); ++i)
    residual[i] = item.mixture.samples[i] - target.samples[i];
  item.ladder = MakeProgressiveTargetsFromCrop(
      target, residual, audio::SnrDb(item.mixture.samples, target.samples),
      cfg.num_intermediate, cfg.delta_snr_db);
  item.labels = F0ToLabelMatrix(ExtractF0(dry, cfg.stft, cfg.bins), cfg.bins);
  return item;
}

namespace {

std::string ItemPath(const std::string& out_dir, const std::string& sub,
                     const std::string& id, const char* ext) {
  return (fs::path(out_dir) / sub / (id + ext)).string();
}

}  // namespace

void WriteItem(const std::string& out_dir, const SynthItem& item) {
  const int k_max = item.ladder.num_intermediate;
  for (int k = 1; k <= k_max; ++k) {
    const std::string sub = "target_" + std::to_string(k);
    fs::create_directories(fs::path(out_dir) / sub);
    audio::WriteWav(ItemPath(out_dir, sub, item.id, ".wav"), item.ladder.targets[k - 1]);
  }
  for (const char* sub : {"mix", "clean", "pitch"}) fs::create_directories(fs::path(out_dir) / sub);
  audio::WriteWav(ItemPath(out_dir, "mix", item.id, ".wav"), item.mixture);
  audio::WriteWav(ItemPath(out_dir, "clean", item.id, ".wav"), item.clean());
  WriteLabels(ItemPath(out_dir, "pitch", item.id, ".labels"), item.labels);
}

SynthSummary SynthesizeDataset(const std::vector<ManifestEntry>& entries,
                               const std::string& out_dir,
                               const SynthConfig& cfg) {
  fs::create_directories(out_dir);
  std::vector<std::optional<std::string>> errors(entries.size());
  std::vector<bool> ok(entries.size(), false);
  std::atomic<size_t> next{0};
  auto work = [&] {
    for (size_t i = next++; i < entries.size(); i = next++) {
      try {
        WriteItem(out_dir, SynthesizeItem(entries[i], cfg));
        ok[i] = true;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  for (int w = 1; w < cfg.workers; ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  SynthSummary summary;
  const std::string index = (fs::path(out_dir) / "index.jsonl").string();
  {
    std::ofstream out(index + ".tmp");
    if (!out) throw DataError("cannot write " + index);
    for (size_t i = 0; i < entries.size(); ++i) {
      const auto& e = entries[i];
      if (!ok[i]) {
        summary.failures.emplace_back(e.id, errors[i].value_or("unknown error"));
        continue;
      }
      nlohmann::json targets = nlohmann::json::array();
      for (int k = 1; k <= cfg.num_intermediate; ++k)
        targets.push_back("target_" + std::to_string(k) + "/" + e.id + ".wav");
      nlohmann::json j = {{"id", e.id},
                          {"split", e.split},
                          {"snr_db", e.snr_db},
                          {"seed", e.seed},
                          {"mix", "mix/" + e.id + ".wav"},
                          {"clean", "clean/" + e.id + ".wav"},
                          {"pitch", "pitch/" + e.id + ".labels"},
                          {"targets", targets}};
      out << j.dump() << '\n';
      ++summary.written;
    }
  }
  fs::rename(index + ".tmp", index);
  return summary;
}

std::vector<Example> LoadDataset(const std::string& out_dir,
                                 const std::string& split) {
  const std::string index = (fs::path(out_dir) / "index.jsonl").string();
  std::ifstream in(index);
  if (!in) throw DataError("cannot open " + index);
  std::vector<Example> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      throw DataError(index + ": " + e.what());
    }
    if (!split.empty() && j.value("split", "") != split) continue;
    Example ex;
    ex.id = j.at("id").get<std::string>();
    ex.split = j.value("split", "");
    ex.snr_db = j.at("snr_db").get<double>();
    ex.mixture = audio::ReadWav((fs::path(out_dir) / j.at("mix").get<std::string>()).string());
    ex.clean = audio::ReadWav((fs::path(out_dir) / j.at("clean").get<std::string>()).string());
    ex.labels = ReadLabels((fs::path(out_dir) / j.at("pitch").get<std::string>()).string());
    out.push_back(std::move(ex));
  }
  return out;
}

ProgressiveTargetSet LadderFromPair(const audio::Waveform& mixture,
                                    const audio::Waveform& clean,
                                    double input_snr_db, int num_intermediate,
                                    double delta_db) {
  if (mixture.size() != clean.size()) throw DataError("mixture/clean length mismatch");
  std::vector<double> residual(clean.size());
  for (size_t i = 0; i < residual.size(); ++i)
    residual[i] = mixture.samples[i] - clean.samples[i];
  return MakeProgressiveTargetsFromCrop(clean, residual, input_snr_db,
                                        num_intermediate, delta_db);
}

}  // namespace spse::data
