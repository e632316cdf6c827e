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

#ifndef SPSE_TRAIN_SCHEDULE_H_
#define SPSE_TRAIN_SCHEDULE_H_

#include <cstdint>

namespace spse::train {

// Warmup learning rate min(1 / sqrt(step), step / sqrt(warmup^3)) / sqrt(scale).
// Rises linearly to its peak at step == warmup, then decays as 1 / sqrt(step).
// Throws std::invalid_argument for step < 1 or non-positive warmup/scale.
double LrAtStep(std::int64_t step, double warmup = 10000.0, double scale = 100.0);

}  // namespace spse::train

#endif  // SPSE_TRAIN_SCHEDULE_H_
