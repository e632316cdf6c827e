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

#ifndef SPSE_NN_LSTM_H_
#define SPSE_NN_LSTM_H_

#include "spse/nn/autograd.h"

namespace spse::nn {

// Gate order along the 4H axis: input, forget, cell, output.
struct LstmWeights {
  Var w_ih;  // [In, 4H]
  Var w_hh;  // [H, 4H]
  Var bias;  // [4H]
};

// Bidirectional LSTM over x [N, L, In] with zero initial state. Output is
// [N, L, 2H]; forward-direction states occupy [..., :H].
Var BiLstm(const Var& x, const LstmWeights& forward,
           const LstmWeights& backward);

}  // namespace spse::nn

#endif  // SPSE_NN_LSTM_H_
