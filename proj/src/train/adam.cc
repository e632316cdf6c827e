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

#include "spse/train/adam.h"

#include <cmath>

#include "spse/error.h"

namespace spse::train {

namespace {

template <typename Fn>
void ForEachTrainable(nn::ParameterSet& ps, Fn fn) {
  for (const auto& group : ps.GroupNames()) {
    if (!ps.IsTrainable(group)) continue;
    for (auto& p : ps.Group(group))
      if (!p.is_buffer && p.var.has_grad()) fn(group + "/" + p.name, p);
  }
}

}  // namespace

void Adam::Step(nn::ParameterSet& ps, double lr) {
  ++steps_;
  const double c1 = 1.0 - std::pow(opts_.beta1, static_cast<double>(steps_));
  const double c2 = 1.0 - std::pow(opts_.beta2, static_cast<double>(steps_));
  const float b1 = static_cast<float>(opts_.beta1), b2 = static_cast<float>(opts_.beta2);
  ForEachTrainable(ps, [&](const std::string& key, nn::Parameter& p) {
    auto it = state_.find(key);
    if (it == state_.end())
      it = state_.emplace(key, Moments{nn::Tensor(p.var.shape()), nn::Tensor(p.var.shape())}).first;
    float* m = it->second.m.data();
    float* v = it->second.v.data();
    const float* g = p.var.grad().data();
    float* w = p.var.mutable_value().data();
    for (std::int64_t i = 0; i < p.var.value().size(); ++i) {
      m[i] = b1 * m[i] + (1.0f - b1) * g[i];
      v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
      const double mhat = m[i] / c1, vhat = v[i] / c2;
      w[i] -= static_cast<float>(lr * mhat / (std::sqrt(vhat) + opts_.eps));
    }
  });
}

std::vector<model::NamedTensor> Adam::Export() const {
  std::vector<model::NamedTensor> out;
  for (const auto& [key, mom] : state_) {
    out.push_back({"adam.m/" + key, mom.m});
    out.push_back({"adam.v/" + key, mom.v});
  }
  return out;
}

void Adam::Import(const model::Checkpoint& ckpt, std::int64_t steps) {
  state_.clear();
  steps_ = steps;
  for (const auto& t : ckpt.tensors) {
    if (t.name.rfind("adam.m/", 0) != 0) continue;
    const std::string key = t.name.substr(7);
    const nn::Tensor* v = ckpt.Find("adam.v/" + key);
    if (v == nullptr || v->shape() != t.tensor.shape())
      throw DataError("checkpoint optimizer state is incomplete for " + key);
    state_[key] = Moments{t.tensor, *v};
  }
}

double ClipGlobalNorm(nn::ParameterSet& ps, double max_norm) {
  double sq = 0.0;
  ForEachTrainable(ps, [&](const std::string&, nn::Parameter& p) {
    for (float g : p.var.grad().values()) sq += double(g) * g;
  });
  const double norm = std::sqrt(sq);
  if (std::isfinite(norm) && norm > max_norm) {
    const float s = static_cast<float>(max_norm / norm);
    ForEachTrainable(ps, [&](const std::string&, nn::Parameter& p) {
      for (auto& g : p.var.node()->grad.values()) g *= s;
    });
  }
  return norm;
}

}  // namespace spse::train
