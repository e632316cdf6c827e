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

#ifndef SPSE_NN_PARAMETER_SET_H_
#define SPSE_NN_PARAMETER_SET_H_

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "spse/nn/autograd.h"

namespace spse::nn {

struct Parameter {
  std::string name;
  Var var;
  // Buffers (e.g. running statistics) are saved but never trained.
  bool is_buffer = false;
};

// Named parameter groups. Group names are what training stages freeze and
// unfreeze, so they stay stable for the lifetime of a model.
class ParameterSet {
 public:
  Var Create(const std::string& group, const std::string& name, Tensor init,
             bool is_buffer = false);

  const std::vector<std::string>& GroupNames() const { return order_; }
  bool HasGroup(const std::string& group) const;
  std::vector<Parameter>& Group(const std::string& group);
  const std::vector<Parameter>& Group(const std::string& group) const;
  const Parameter* Find(const std::string& group, const std::string& name) const;

  void SetTrainable(const std::string& group, bool trainable);
  bool IsTrainable(const std::string& group) const;
  void ZeroGrad();

  std::int64_t NumElements(const std::string& group) const;
  std::int64_t NumElements() const;
  // FNV-1a over the raw bytes of every tensor in the group.
  std::uint64_t Checksum(const std::string& group) const;

 private:
  std::vector<std::string> order_;
  std::map<std::string, std::vector<Parameter>> groups_;
};

Tensor UniformInit(Shape shape, float bound, std::mt19937_64& rng);
// Row blocks of size `block` x `block` along the column axis each get an
// orthogonal matrix; used for recurrent kernels [H, 4H].
Tensor OrthogonalBlocksInit(std::int64_t block, std::int64_t blocks,
                            std::mt19937_64& rng);

}  // namespace spse::nn

#endif  // SPSE_NN_PARAMETER_SET_H_
