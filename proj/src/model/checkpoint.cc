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

#include "spse/model/checkpoint.h"

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <unordered_map>

#include "spse/error.h"

namespace spse::model {

static_assert(std::endian::native == std::endian::little,
              "checkpoints are written in host order");

namespace {

constexpr char kMagic[8] = {'S', 'P', 'S', 'E', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

}  // namespace

const nn::Tensor* Checkpoint::Find(const std::string& name) const {
  for (const auto& t : tensors)
    if (t.name == name) return &t.tensor;
  return nullptr;
}

void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt) {
  nlohmann::json header;
  header["meta"] = ckpt.meta;
  header["tensors"] = nlohmann::json::array();
  for (const auto& t : ckpt.tensors)
    header["tensors"].push_back({{"name", t.name}, {"shape", t.tensor.shape()}});
  const std::string text = header.dump();
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw DataError("cannot write " + tmp);
    const std::uint32_t version = kVersion, reserved = 0;
    const std::uint64_t len = text.size();
    out.write(kMagic, sizeof(kMagic));
    out.write(reinterpret_cast<const char*>(&version), 4);
    out.write(reinterpret_cast<const char*>(&reserved), 4);
    out.write(reinterpret_cast<const char*>(&len), 8);
    out.write(text.data(), static_cast<std::streamsize>(text.size()));
    for (const auto& t : ckpt.tensors)
      out.write(reinterpret_cast<const char*>(t.tensor.data()),
                static_cast<std::streamsize>(t.tensor.size() * sizeof(float)));
    out.flush();
    if (!out) throw DataError("short write to " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

Checkpoint ReadCheckpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open checkpoint " + path);
  char magic[8];
  std::uint32_t version = 0, reserved = 0;
  std::uint64_t len = 0;
  in.read(magic, 8);
  in.read(reinterpret_cast<char*>(&version), 4);
  in.read(reinterpret_cast<char*>(&reserved), 4);
  in.read(reinterpret_cast<char*>(&len), 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0)
    throw DataError(path + " is not a checkpoint");
  if (version != kVersion)
    throw DataError(path + ": unsupported checkpoint version " + std::to_string(version));
  if (len > (1u << 30)) throw DataError(path + ": implausible header size");
  std::string text(len, '\0');
  if (!in.read(text.data(), static_cast<std::streamsize>(len)))
    throw DataError(path + ": truncated header");
  Checkpoint ckpt;
  nlohmann::json header;
  try {
    header = nlohmann::json::parse(text);
    ckpt.meta = header.at("meta");
    for (const auto& entry : header.at("tensors")) {
      NamedTensor t;
      t.name = entry.at("name").get<std::string>();
      t.tensor = nn::Tensor(entry.at("shape").get<nn::Shape>());
      ckpt.tensors.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw DataError(path + ": bad header: " + e.what());
  }
  for (auto& t : ckpt.tensors) {
    if (!in.read(reinterpret_cast<char*>(t.tensor.data()),
                 static_cast<std::streamsize>(t.tensor.size() * sizeof(float))))
      throw DataError(path + ": truncated data for " + t.name);
  }
  return ckpt;
}

std::vector<NamedTensor> ExportParameters(const nn::ParameterSet& ps) {
  std::vector<NamedTensor> out;
  for (const auto& group : ps.GroupNames())
    for (const auto& p : ps.Group(group))
      out.push_back({group + "/" + p.name, p.var.value()});
  return out;
}

int ImportParameters(nn::ParameterSet& ps, const Checkpoint& ckpt, bool require_all) {
  std::unordered_map<std::string, const nn::Tensor*> by_name;
  for (const auto& t : ckpt.tensors) by_name[t.name] = &t.tensor;
  int loaded = 0;
  for (const auto& group : ps.GroupNames()) {
    for (auto& p : ps.Group(group)) {
      const std::string name = group + "/" + p.name;
      const auto it = by_name.find(name);
      if (it == by_name.end()) {
        if (require_all) throw DataError("checkpoint lacks " + name);
        continue;
      }
      if (it->second->shape() != p.var.shape())
        throw DataError("shape mismatch for " + name + ": " +
                        nn::ShapeString(it->second->shape()) + " vs " +
                        nn::ShapeString(p.var.shape()));
      p.var.mutable_value() = *it->second;
      ++loaded;
    }
  }
  return loaded;
}

}  // namespace spse::model
