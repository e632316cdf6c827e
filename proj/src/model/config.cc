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

#include "spse/model/config.h"

#include <cstdio>

#include "spse/error.h"

namespace spse::model {

void ModelConfig::Validate() const {
  if (num_intermediate < 1) throw ConfigError("K must be at least 1");
  if (pe_channels <= 0 || embed_dim <= 0 || rnn_hidden <= 0 || attn_heads <= 0 ||
      unfold_kernel <= 0 || unfold_stride <= 0 || attn_qk_width <= 0)
    throw ConfigError("model dimensions must be positive");
  if (embed_dim % attn_heads != 0)
    throw ConfigError("embed_dim must divide by attn_heads");
  if (enc_kernel_t % 2 == 0 || enc_kernel_f % 2 == 0)
    throw ConfigError("encoder kernels must be odd");
  if (!(gamma > 0.0 && gamma <= 1.0)) throw ConfigError("gamma must lie in (0, 1]");
  if (pitch.conv_channels.empty() || pitch.rnn_hidden.empty() || pitch.out_dim < 2)
    throw ConfigError("bad pitch estimator config");
}

ModelConfig ModelConfig::Toy() {
  ModelConfig c;
  c.num_intermediate = 2;
  c.embed_dim = 8;
  c.rnn_hidden = 16;
  c.attn_heads = 2;
  c.pitch.conv_channels = {4, 8, 8, 16, 16};
  c.pitch.rnn_hidden = {32, 32, 32};
  return c;
}

namespace {

std::string JoinInts(const std::vector<int>& v) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + std::to_string(v[i]);
  return out;
}

}  // namespace

void ModelConfig::Read(const KeyValueConfig& kv) {
  if (kv.Has("model.preset")) {
    std::string preset;
    kv.Get("model.preset", preset);
    if (preset == "toy") {
      *this = Toy();
    } else if (preset != "full") {
      throw ConfigError("unknown model.preset " + preset);
    }
  }
  kv.Get("model.K", num_intermediate);
  kv.Get("model.pe_channels", pe_channels);
  kv.Get("model.embed_dim", embed_dim);
  kv.Get("model.rnn_hidden", rnn_hidden);
  kv.Get("model.attn_heads", attn_heads);
  kv.Get("model.unfold_kernel", unfold_kernel);
  kv.Get("model.unfold_stride", unfold_stride);
  kv.Get("model.enc_kernel_t", enc_kernel_t);
  kv.Get("model.enc_kernel_f", enc_kernel_f);
  kv.Get("model.attn_qk_width", attn_qk_width);
  kv.Get("model.num_bins", num_bins);
  kv.Get("model.gamma", gamma);
  std::string kind = block == SeBlockKind::kGridNet ? "gridnet" : "recurrent";
  kv.Get("model.block", kind);
  if (kind == "gridnet") {
    block = SeBlockKind::kGridNet;
  } else if (kind == "recurrent") {
    block = SeBlockKind::kRecurrent;
  } else {
    throw ConfigError("unknown model.block " + kind);
  }
  kv.Get("model.pitch_conv_channels", pitch.conv_channels);
  kv.Get("model.pitch_rnn_hidden", pitch.rnn_hidden);
  kv.Get("model.pitch_out_dim", pitch.out_dim);
  std::string source = pitch_source == PitchSource::kMixture ? "mixture"
                       : pitch_source == PitchSource::kCoarse ? "coarse" : "intermediate";
  kv.Get("model.pitch_source", source);
  if (source == "intermediate") {
    pitch_source = PitchSource::kIntermediate;
  } else if (source == "mixture") {
    pitch_source = PitchSource::kMixture;
  } else if (source == "coarse") {
    pitch_source = PitchSource::kCoarse;
  } else {
    throw ConfigError("unknown model.pitch_source " + source);
  }
  bool no_pe = !use_phase_encoder, no_hc = !use_harmonic_compensation, no_pl = !use_progressive;
  kv.Get("ablation.no_pe", no_pe);
  kv.Get("ablation.no_hc", no_hc);
  kv.Get("ablation.no_pl", no_pl);
  use_phase_encoder = !no_pe;
  use_harmonic_compensation = !no_hc;
  use_progressive = !no_pl;
  Validate();
}

void ModelConfig::Write(KeyValueConfig& kv) const {
  auto num = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  kv.Set("model.K", std::to_string(num_intermediate));
  kv.Set("model.pe_channels", std::to_string(pe_channels));
  kv.Set("model.embed_dim", std::to_string(embed_dim));
  kv.Set("model.rnn_hidden", std::to_string(rnn_hidden));
  kv.Set("model.attn_heads", std::to_string(attn_heads));
  kv.Set("model.unfold_kernel", std::to_string(unfold_kernel));
  kv.Set("model.unfold_stride", std::to_string(unfold_stride));
  kv.Set("model.enc_kernel_t", std::to_string(enc_kernel_t));
  kv.Set("model.enc_kernel_f", std::to_string(enc_kernel_f));
  kv.Set("model.attn_qk_width", std::to_string(attn_qk_width));
  kv.Set("model.num_bins", std::to_string(num_bins));
  kv.Set("model.gamma", num(gamma));
  kv.Set("model.block", block == SeBlockKind::kGridNet ? "gridnet" : "recurrent");
  kv.Set("model.pitch_conv_channels", JoinInts(pitch.conv_channels));
  kv.Set("model.pitch_rnn_hidden", JoinInts(pitch.rnn_hidden));
  kv.Set("model.pitch_out_dim", std::to_string(pitch.out_dim));
  kv.Set("model.pitch_source", pitch_source == PitchSource::kMixture ? "mixture"
                               : pitch_source == PitchSource::kCoarse ? "coarse" : "intermediate");
  kv.Set("ablation.no_pe", use_phase_encoder ? "false" : "true");
  kv.Set("ablation.no_hc", use_harmonic_compensation ? "false" : "true");
  kv.Set("ablation.no_pl", use_progressive ? "false" : "true");
}

std::string BlockGroup(int index) { return "se_block[" + std::to_string(index) + "]"; }
std::string DecoderGroup(int stage) { return "decoder[" + std::to_string(stage) + "]"; }

}  // namespace spse::model
