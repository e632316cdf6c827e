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

#include "spse/nn/parameter_set.h"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

namespace spse::nn {

Var ParameterSet::Create(const std::string& group, const std::string& name,
                         Tensor init, bool is_buffer) {
  auto [it, inserted] = groups_.try_emplace(group);
  if (inserted) order_.push_back(group);
  for (const auto& p : it->second) {
    if (p.name == name) {
      throw std::invalid_argument("duplicate parameter " + group + "/" + name);
    }
  }
  Var v(std::move(init), !is_buffer);
  it->second.push_back({name, v, is_buffer});
  return v;
}

bool ParameterSet::HasGroup(const std::string& group) const {
  return groups_.count(group) > 0;
}

std::vector<Parameter>& ParameterSet::Group(const std::string& group) {
  auto it = groups_.find(group);
  if (it == groups_.end()) throw std::out_of_range("unknown parameter group " + group);
  return it->second;
}

const std::vector<Parameter>& ParameterSet::Group(const std::string& group) const {
  auto it = groups_.find(group);
  if (it == groups_.end()) throw std::out_of_range("unknown parameter group " + group);
  return it->second;
}

const Parameter* ParameterSet::Find(const std::string& group,
                                    const std::string& name) const {
  auto it = groups_.find(group);
  if (it == groups_.end()) return nullptr;
  for (const auto& p : it->second)
    if (p.name == name) return &p;
  return nullptr;
}

void ParameterSet::SetTrainable(const std::string& group, bool trainable) {
  for (auto& p : Group(group)) {
    if (!p.is_buffer) p.var.set_requires_grad(trainable);
  }
}

bool ParameterSet::IsTrainable(const std::string& group) const {
  for (const auto& p : Group(group))
    if (!p.is_buffer && p.var.requires_grad()) return true;
  return false;
}

void ParameterSet::ZeroGrad() {
  for (auto& [name, params] : groups_)
    for (auto& p : params) p.var.ZeroGrad();
}

std::int64_t ParameterSet::NumElements(const std::string& group) const {
  std::int64_t n = 0;
  for (const auto& p : Group(group)) n += p.var.value().size();
  return n;
}

std::int64_t ParameterSet::NumElements() const {
  std::int64_t n = 0;
  for (const auto& g : order_) n += NumElements(g);
  return n;
}

std::uint64_t ParameterSet::Checksum(const std::string& group) const {
  std::uint64_t h = 1469598103934665603ULL;
  for (const auto& p : Group(group)) {
    const auto* bytes = reinterpret_cast<const unsigned char*>(p.var.value().data());
    const size_t n = static_cast<size_t>(p.var.value().size()) * sizeof(float);
    for (size_t i = 0; i < n; ++i) {
      h ^= bytes[i];
      h *= 1099511628211ULL;
    }
  }
  return h;
}

Tensor UniformInit(Shape shape, float bound, std::mt19937_64& rng) {
  Tensor t(std::move(shape));
  std::uniform_real_distribution<float> dist(-bound, bound);
  for (auto& v : t.values()) v = dist(rng);
  return t;
}

Tensor OrthogonalBlocksInit(std::int64_t block, std::int64_t blocks,
                            std::mt19937_64& rng) {
  Tensor t({block, block * blocks});
  std::normal_distribution<double> dist(0.0, 1.0);
  const auto n = static_cast<size_t>(block);
  for (std::int64_t k = 0; k < blocks; ++k) {
    // Columns of a Gaussian matrix, orthonormalized by Gram-Schmidt (twice
    // for stability). This is Q of the QR with positive diagonal, which is
    // Haar distributed, and uses fixed-order loops so it is reproducible.
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j) q[j][i] = dist(rng);
    for (size_t j = 0; j < n; ++j) {
      for (int pass = 0; pass < 2; ++pass) {
        for (size_t p = 0; p < j; ++p) {
          double dot = 0.0;
          for (size_t i = 0; i < n; ++i) dot += q[p][i] * q[j][i];
          for (size_t i = 0; i < n; ++i) q[j][i] -= dot * q[p][i];
        }
      }
      double norm = 0.0;
      for (size_t i = 0; i < n; ++i) norm += q[j][i] * q[j][i];
      norm = std::sqrt(norm);
      for (size_t i = 0; i < n; ++i) q[j][i] /= norm;
    }
    for (size_t i = 0; i < n; ++i)
      for (size_t j = 0; j < n; ++j)
        t[static_cast<std::int64_t>(i) * block * blocks + k * block +
          static_cast<std::int64_t>(j)] = static_cast<float>(q[j][i]);
  }
  return t;
}

}  // namespace spse::nn
