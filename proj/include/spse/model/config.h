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

#ifndef SPSE_MODEL_CONFIG_H_
#define SPSE_MODEL_CONFIG_H_

#include <string>
#include <vector>

#include "spse/util/key_value.h"

namespace spse::model {

enum class SeBlockKind { kGridNet, kRecurrent };
// Spectrum the pitch estimator reads.
enum class PitchSource { kIntermediate, kMixture, kCoarse };

struct PitchEstimatorConfig {
  std::vector<int> conv_channels = {16, 32, 64, 128, 256};
  std::vector<int> rnn_hidden = {512, 256, 128};
  int out_dim = 226;
};

struct ModelConfig {
  int num_intermediate = 4;  // K; the network has K + 1 SE blocks
  int pe_channels = 4;
  int embed_dim = 32;
  int rnn_hidden = 100;
  int attn_heads = 4;
  int unfold_kernel = 4;
  int unfold_stride = 1;
  int enc_kernel_t = 3;
  int enc_kernel_f = 3;
  // Target width of the per-head query/key features, spread over frequency.
  int attn_qk_width = 512;
  int num_bins = 257;
  double gamma = 1.0 / 3.0;
  SeBlockKind block = SeBlockKind::kGridNet;
  PitchEstimatorConfig pitch;

  // Ablations.
  bool use_phase_encoder = true;
  bool use_harmonic_compensation = true;
  bool use_progressive = true;
  PitchSource pitch_source = PitchSource::kIntermediate;

  int num_blocks() const { return num_intermediate + 1; }
  // Decoders exist for k = 1..K+1, or only for K+1 without progressive learning.
  bool HasDecoder(int k) const { return use_progressive || k == num_blocks(); }
  // The progressive output the pitch estimator reads (1-based), or 0 for
  // the noisy mixture itself.
  int PitchSourceStage() const {
    switch (pitch_source) {
      case PitchSource::kMixture: return 0;
      case PitchSource::kCoarse: return num_blocks();
      case PitchSource::kIntermediate: break;
    }
    return use_progressive ? num_intermediate : num_blocks();
  }
  void Validate() const;

  // K = 2, embed 8, hidden 16, heads 2, with a small pitch estimator.
  static ModelConfig Toy();

  // Keys are prefixed "model." ("model.K", "model.embed_dim", ...).
  void Read(const KeyValueConfig& kv);
  void Write(KeyValueConfig& kv) const;
};

std::string BlockGroup(int index);    // "se_block[i]", 0-based
std::string DecoderGroup(int stage);  // "decoder[k]", 1-based

inline constexpr const char* kPhaseEncoderGroup = "phase_encoder";
inline constexpr const char* kEncoderGroup = "encoder";
inline constexpr const char* kPitchGroup = "pitch_estimator";
inline constexpr const char* kMaskGroup = "mask_module";

}  // namespace spse::model

#endif  // SPSE_MODEL_CONFIG_H_
