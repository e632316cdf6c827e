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

#include "spse/data/manifest.h"

#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "spse/error.h"

namespace spse::data {

namespace fs = std::filesystem;

namespace {

std::string Resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? p : (base / path).lexically_normal().string();
}

}  // namespace

std::vector<ManifestEntry> ReadManifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest " + path);
  const fs::path base = fs::path(path).parent_path();
  std::vector<ManifestEntry> entries;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      ManifestEntry e;
      e.clean_path = Resolve(base, j.at("clean_path").get<std::string>());
      e.noise_path = Resolve(base, j.at("noise_path").get<std::string>());
      if (j.contains("rir_path") && !j["rir_path"].is_null())
        e.rir_path = Resolve(base, j["rir_path"].get<std::string>());
      e.snr_db = j.at("snr_db").get<double>();
      e.seed = j.at("seed").get<std::uint64_t>();
      e.split = j.value("split", "train");
      e.id = j.value("id", fs::path(e.clean_path).stem().string());
      entries.push_back(std::move(e));
    } catch (const nlohmann::json::exception& ex) {
      throw DataError(path + ":" + std::to_string(line_no) + ": " + ex.what());
    }
  }
  return entries;
}

void WriteManifest(const std::string& path,
                   const std::vector<ManifestEntry>& entries) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp);
    if (!out) throw DataError("cannot write " + path);
    for (const auto& e : entries) {
      nlohmann::json j = {{"id", e.id},
                          {"clean_path", e.clean_path},
                          {"noise_path", e.noise_path},
                          {"snr_db", e.snr_db},
                          {"seed", e.seed},
                          {"split", e.split}};
      if (e.rir_path) j["rir_path"] = *e.rir_path;
      out << j.dump() << '\n';
    }
  }
  fs::rename(tmp, path);
}

}  // namespace spse::data
