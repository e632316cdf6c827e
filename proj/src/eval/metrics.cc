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

#include "spse/eval/metrics.h"

#include <cmath>
#include <cstdlib>
#include <limits>
#include <stdexcept>

namespace spse::eval {

double Sdr(std::span<const double> estimate, std::span<const double> reference) {
  if (estimate.size() != reference.size())
    throw std::invalid_argument("Sdr: estimate and reference lengths differ");
  double signal = 0.0, error = 0.0;
  for (size_t i = 0; i < reference.size(); ++i) {
    signal += reference[i] * reference[i];
    const double d = reference[i] - estimate[i];
    error += d * d;
  }
  if (signal == 0.0) throw std::invalid_argument("Sdr: reference is silent");
  if (error == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / error);
}

double PitchAccuracy(const data::PitchLabelMatrix& estimate,
                     const data::PitchLabelMatrix& reference,
                     const data::PitchBins& bins) {
  if (estimate.frames != reference.frames || estimate.dims != reference.dims)
    throw std::invalid_argument("PitchAccuracy: shape mismatch");
  if (reference.frames == 0) throw std::invalid_argument("PitchAccuracy: no frames");
  const int unvoiced = bins.unvoiced();
  int hits = 0;
  for (int t = 0; t < reference.frames; ++t) {
    const int a = estimate.Argmax(t), b = reference.Argmax(t);
    const bool ua = a == unvoiced, ub = b == unvoiced;
    if (ua || ub) {
      hits += ua && ub;
    } else {
      hits += std::abs(a - b) <= 1;
    }
  }
  return 100.0 * hits / reference.frames;
}

}  // namespace spse::eval
