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

#ifndef SPSE_MODEL_CHECKPOINT_H_
#define SPSE_MODEL_CHECKPOINT_H_

#include <string>
#include <vector>

#include <json.hpp>

#include "spse/nn/parameter_set.h"
#include "spse/nn/tensor.h"

namespace spse::model {

struct NamedTensor {
  std::string name;
  nn::Tensor tensor;
};

// File layout: 8-byte magic "SPSECKPT", uint32 version, uint32 reserved,
// uint64 header length, the JSON header, then each tensor's little-endian
// float32 data in header order. The header holds caller metadata under
// "meta" and the tensor table under "tensors".
struct Checkpoint {
  nlohmann::json meta = nlohmann::json::object();
  std::vector<NamedTensor> tensors;

  const nn::Tensor* Find(const std::string& name) const;
};

// Written to path + ".tmp" first, then renamed into place.
void WriteCheckpoint(const std::string& path, const Checkpoint& ckpt);
// Throws DataError on a missing, truncated or foreign file.
Checkpoint ReadCheckpoint(const std::string& path);

// Tensors named "<group>/<name>", buffers included.
std::vector<NamedTensor> ExportParameters(const nn::ParameterSet& ps);
// Copies every matching tensor into ps. Shape mismatches throw DataError;
// with require_all, so does any parameter missing from the checkpoint.
// Returns the number of tensors loaded.
int ImportParameters(nn::ParameterSet& ps, const Checkpoint& ckpt, bool require_all);

}  // namespace spse::model

#endif  // SPSE_MODEL_CHECKPOINT_H_
