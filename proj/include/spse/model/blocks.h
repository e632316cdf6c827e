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

#ifndef SPSE_MODEL_BLOCKS_H_
#define SPSE_MODEL_BLOCKS_H_

#include <memory>
#include <random>
#include <string>

#include "spse/model/config.h"
#include "spse/nn/layers.h"

namespace spse::model {

// Maps a [B, T, F, D] stream to one of the same shape.
class SeBlock {
 public:
  virtual ~SeBlock() = default;
  virtual nn::Var Forward(const nn::Var& x) const = 0;
};

// Normalize, unfold kernel-wide windows along the sequence axis, run a
// BiLSTM, project back with overlap-add and add the input.
class UnfoldRnnPath {
 public:
  UnfoldRnnPath() = default;
  UnfoldRnnPath(nn::ParameterSet& ps, const std::string& group,
                const std::string& name, const ModelConfig& cfg,
                std::mt19937_64& rng);
  // x [N, L, D].
  nn::Var Forward(const nn::Var& x) const;

 private:
  nn::NormLayer norm_;
  nn::BiLstmLayer rnn_;
  nn::LinearLayer proj_;
  nn::Var bias_;
  int kernel_ = 4;
  int stride_ = 1;
  int dim_ = 0;
};

// Frequency recurrence, time recurrence, then multi-head self-attention
// across frames.
class GridNetBlock : public SeBlock {
 public:
  GridNetBlock(nn::ParameterSet& ps, const std::string& group,
               const ModelConfig& cfg, std::mt19937_64& rng);
  nn::Var Forward(const nn::Var& x) const override;

 private:
  nn::Var Attention(const nn::Var& x) const;

  UnfoldRnnPath freq_path_, time_path_;
  nn::LinearLayer query_, key_, value_, out_;
  nn::PReluLayer query_act_, key_act_, value_act_, out_act_;
  nn::NormLayer query_norm_, key_norm_, value_norm_, out_norm_;
  int heads_ = 1;
  int qk_dim_ = 1;  // per head, per frequency
  int bins_ = 0;
  int dim_ = 0;
};

// Time recurrence only; a cheap stand-in for tests.
class RecurrentBlock : public SeBlock {
 public:
  RecurrentBlock(nn::ParameterSet& ps, const std::string& group,
                 const ModelConfig& cfg, std::mt19937_64& rng);
  nn::Var Forward(const nn::Var& x) const override;

 private:
  UnfoldRnnPath time_path_;
};

std::unique_ptr<SeBlock> MakeSeBlock(nn::ParameterSet& ps,
                                     const std::string& group,
                                     const ModelConfig& cfg,
                                     std::mt19937_64& rng);

// [B, T, F, D] -> [B * F, T, D] and back.
nn::Var FramesAlongTime(const nn::Var& x);
nn::Var FramesFromTime(const nn::Var& y, std::int64_t batch, std::int64_t bins);

}  // namespace spse::model

#endif  // SPSE_MODEL_BLOCKS_H_
