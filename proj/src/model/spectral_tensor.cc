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

#include "spse/model/spectral_tensor.h"

#include <cmath>
#include <stdexcept>

namespace spse::model {

namespace {

void CheckSameShape(int frames, int bins, int t, int f) {
  if (frames != t || bins != f)
    throw std::invalid_argument("batch items differ in shape: " + std::to_string(t) +
                                "x" + std::to_string(f) + " vs " + std::to_string(frames) +
                                "x" + std::to_string(bins));
}

}  // namespace

nn::Tensor StackSpectrograms(std::span<const audio::ComplexSpectrogram> specs) {
  if (specs.empty()) throw std::invalid_argument("empty batch");
  const int t = specs[0].frames(), f = specs[0].bins();
  nn::Tensor out({static_cast<std::int64_t>(specs.size()), t, f, 2});
  float* p = out.data();
  for (const auto& s : specs) {
    CheckSameShape(s.frames(), s.bins(), t, f);
    for (const auto& v : s.data()) {
      *p++ = static_cast<float>(v.real());
      *p++ = static_cast<float>(v.imag());
    }
  }
  return out;
}

nn::Tensor StackMagnitudes(std::span<const audio::ComplexSpectrogram> specs) {
  if (specs.empty()) throw std::invalid_argument("empty batch");
  const int t = specs[0].frames(), f = specs[0].bins();
  nn::Tensor out({static_cast<std::int64_t>(specs.size()), t, f, 1});
  float* p = out.data();
  for (const auto& s : specs) {
    CheckSameShape(s.frames(), s.bins(), t, f);
    for (const auto& v : s.data()) *p++ = static_cast<float>(std::abs(v));
  }
  return out;
}

nn::Tensor StackCompressed(std::span<const audio::CompressedSpectrum> specs) {
  if (specs.empty()) throw std::invalid_argument("empty batch");
  const int t = specs[0].frames, f = specs[0].bins;
  nn::Tensor out({static_cast<std::int64_t>(specs.size()), t, f, 2});
  float* p = out.data();
  for (const auto& s : specs) {
    CheckSameShape(s.frames, s.bins, t, f);
    for (size_t i = 0; i < s.real_c.size(); ++i) {
      *p++ = static_cast<float>(s.real_c[i]);
      *p++ = static_cast<float>(s.imag_c[i]);
    }
  }
  return out;
}

audio::CompressedSpectrum CompressedItem(const nn::Tensor& t, int b, double gamma) {
  audio::CompressedSpectrum c;
  c.frames = static_cast<int>(t.dim(1));
  c.bins = static_cast<int>(t.dim(2));
  c.gamma = gamma;
  const size_t n = static_cast<size_t>(c.frames) * c.bins;
  c.real_c.resize(n);
  c.imag_c.resize(n);
  const float* p = t.data() + static_cast<size_t>(b) * n * 2;
  for (size_t i = 0; i < n; ++i) {
    c.real_c[i] = p[2 * i];
    c.imag_c[i] = p[2 * i + 1];
  }
  return c;
}

void SetCompressedItem(nn::Tensor& t, int b, const audio::CompressedSpectrum& c,
                       double scale) {
  const size_t n = c.real_c.size();
  float* p = t.data() + static_cast<size_t>(b) * n * 2;
  for (size_t i = 0; i < n; ++i) {
    p[2 * i] = static_cast<float>(scale * c.real_c[i]);
    p[2 * i + 1] = static_cast<float>(scale * c.imag_c[i]);
  }
}

data::PitchLabelMatrix PosteriorItem(const nn::Tensor& logits, int b) {
  data::PitchLabelMatrix m;
  m.frames = static_cast<int>(logits.dim(1));
  m.dims = static_cast<int>(logits.dim(2));
  const size_t n = static_cast<size_t>(m.frames) * m.dims;
  m.values.resize(n);
  const float* p = logits.data() + static_cast<size_t>(b) * n;
  for (size_t i = 0; i < n; ++i) m.values[i] = 1.0f / (1.0f + std::exp(-p[i]));
  return m;
}

nn::Tensor StackLabels(std::span<const data::PitchLabelMatrix> labels) {
  if (labels.empty()) throw std::invalid_argument("empty batch");
  const int t = labels[0].frames, d = labels[0].dims;
  nn::Tensor out({static_cast<std::int64_t>(labels.size()), t, d});
  float* p = out.data();
  for (const auto& l : labels) {
    CheckSameShape(l.frames, l.dims, t, d);
    p = std::copy(l.values.begin(), l.values.end(), p);
  }
  return out;
}

}  // namespace spse::model
