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

#include "spse/train/schedule.h"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace spse::train {

double LrAtStep(std::int64_t step, double warmup, double scale) {
  if (step < 1) throw std::invalid_argument("LrAtStep: step must be >= 1, got " + std::to_string(step));
  if (!(warmup > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("LrAtStep: warmup and scale must be positive");
  const double phi = static_cast<double>(step);
  return std::min(1.0 / std::sqrt(phi), phi / std::sqrt(warmup * warmup * warmup)) /
         std::sqrt(scale);
}

}  // namespace spse::train
