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

#ifndef SPSE_DATA_MANIFEST_H_
#define SPSE_DATA_MANIFEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace spse::data {

struct ManifestEntry {
  std::string id;
  std::string clean_path;
  std::string noise_path;
  std::optional<std::string> rir_path;
  double snr_db = 0.0;
  std::uint64_t seed = 0;
  std::string split = "train";
};

// One JSON object per line. Blank lines are skipped; malformed lines throw
// DataError naming the line number. Relative paths resolve against the
// manifest's directory.
std::vector<ManifestEntry> ReadManifest(const std::string& path);
void WriteManifest(const std::string& path,
                   const std::vector<ManifestEntry>& entries);

}  // namespace spse::data

#endif  // SPSE_DATA_MANIFEST_H_
