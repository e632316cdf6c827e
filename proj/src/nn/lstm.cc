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

#include "spse/nn/lstm.h"

#include <stdexcept>

#include "spse/nn/eigen_maps.h"

namespace spse::nn {

namespace {

using ArrayRM = Eigen::Array<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Per-step blocks are stored time-major: rows [l * N, (l + 1) * N).
struct DirectionCache {
  MatRM gates;   // [L*N, 4H] post-activation (i, f, g, o)
  MatRM cell;    // [L*N, H]
  MatRM tanh_c;  // [L*N, H]
};

// Runs one direction. Hidden states are written to y[..., offset:offset+H].
DirectionCache RunDirection(const float* x, std::int64_t n, std::int64_t len,
                            std::int64_t in, std::int64_t hidden,
                            const LstmWeights& w, bool reverse, float* y,
                            std::int64_t offset) {
  const std::int64_t g4 = 4 * hidden, h = hidden;
  DirectionCache cache;
  cache.gates.resize(n * len, g4);
  cache.cell.resize(n * len, h);
  cache.tanh_c.resize(n * len, h);
  MatRM xw(n * len, g4);
  xw.noalias() = CMapRM(x, n * len, in) * CMapRM(w.w_ih.value().data(), in, g4);
  xw.rowwise() += Eigen::Map<const Eigen::RowVectorXf>(w.bias.value().data(), g4);
  CMapRM whh(w.w_hh.value().data(), h, g4);
  MatRM pre(n, g4), hbuf = MatRM::Zero(n, h);
  const std::int64_t ystride = len * 2 * h;
  for (std::int64_t s = 0; s < len; ++s) {
    const std::int64_t l = reverse ? len - 1 - s : s;
    const std::int64_t lp = reverse ? l + 1 : l - 1;
    pre = CStridedMapRM(xw.data() + l * g4, n, g4, Eigen::OuterStride<>(len * g4));
    if (s > 0) pre.noalias() += hbuf * whh;
    auto gates = cache.gates.middleRows(l * n, n);
    gates.array() = pre.array().logistic();
    gates.middleCols(2 * h, h).array() = pre.middleCols(2 * h, h).array().tanh();
    auto cell = cache.cell.middleRows(l * n, n);
    cell.array() = gates.leftCols(h).array() * gates.middleCols(2 * h, h).array();
    if (s > 0)
      cell.array() += gates.middleCols(h, h).array() * cache.cell.middleRows(lp * n, n).array();
    auto tc = cache.tanh_c.middleRows(l * n, n);
    tc.array() = cell.array().tanh();
    hbuf.array() = gates.rightCols(h).array() * tc.array();
    StridedMapRM(y + l * 2 * h + offset, n, h, Eigen::OuterStride<>(ystride)) = hbuf;
  }
  return cache;
}

void BackwardDirection(const float* x, const float* y, const float* gy,
                       std::int64_t n, std::int64_t len, std::int64_t in,
                       std::int64_t hidden, const LstmWeights& w,
                       const DirectionCache& cache, bool reverse,
                       std::int64_t offset, float* gx) {
  const std::int64_t g4 = 4 * hidden, h = hidden;
  const std::int64_t ystride = len * 2 * h;
  MatRM dpre(n * len, g4);  // batch-major, matching x
  MatRM dh = MatRM::Zero(n, h), dh_next = MatRM::Zero(n, h);
  ArrayRM dc(n, h), dc_next = ArrayRM::Zero(n, h);
  MatRM dg(n, g4);
  CMapRM whh(w.w_hh.value().data(), h, g4);
  const bool need_whh = w.w_hh.requires_grad();
  for (std::int64_t s = len - 1; s >= 0; --s) {
    const std::int64_t l = reverse ? len - 1 - s : s;
    const std::int64_t lp = reverse ? l + 1 : l - 1;
    const auto a = cache.gates.middleRows(l * n, n).array();
    const auto ig = a.leftCols(h), fg = a.middleCols(h, h),
               gg = a.middleCols(2 * h, h), og = a.rightCols(h);
    const auto tc = cache.tanh_c.middleRows(l * n, n).array();
    dh = CStridedMapRM(gy + l * 2 * h + offset, n, h, Eigen::OuterStride<>(ystride));
    dh += dh_next;
    const auto dha = dh.array();
    dc = dc_next + dha * og * (1.0f - tc.square());
    dg.leftCols(h).array() = dc * gg * ig * (1.0f - ig);
    if (s > 0) {
      dg.middleCols(h, h).array() =
          dc * cache.cell.middleRows(lp * n, n).array() * fg * (1.0f - fg);
    } else {
      dg.middleCols(h, h).setZero();
    }
    dg.middleCols(2 * h, h).array() = dc * ig * (1.0f - gg.square());
    dg.rightCols(h).array() = dha * tc * og * (1.0f - og);
    dc_next = dc * fg;
    StridedMapRM(dpre.data() + l * g4, n, g4, Eigen::OuterStride<>(len * g4)) = dg;
    if (s > 0) dh_next.noalias() = dg * whh.transpose();
  }
  if (need_whh) {
    // Previous hidden state of every step, zero at the first one.
    MatRM hprev(n * len, h);
    for (std::int64_t r = 0; r < n; ++r)
      for (std::int64_t l = 0; l < len; ++l) {
        const std::int64_t lp = reverse ? l + 1 : l - 1;
        if (lp < 0 || lp >= len) {
          hprev.row(r * len + l).setZero();
        } else {
          hprev.row(r * len + l) =
              Eigen::Map<const Eigen::RowVectorXf>(y + r * ystride + lp * 2 * h + offset, h);
        }
      }
    MapRM(w.w_hh.node()->EnsureGrad().data(), h, g4).noalias() +=
        hprev.transpose() * dpre;
  }
  if (w.w_ih.requires_grad()) {
    MapRM(w.w_ih.node()->EnsureGrad().data(), in, g4).noalias() +=
        CMapRM(x, n * len, in).transpose() * dpre;
  }
  if (w.bias.requires_grad()) {
    AddColumnSums(dpre, w.bias.node()->EnsureGrad().data());
  }
  if (gx != nullptr) {
    MapRM(gx, n * len, in).noalias() +=
        dpre * CMapRM(w.w_ih.value().data(), in, g4).transpose();
  }
}

}  // namespace

Var BiLstm(const Var& x, const LstmWeights& forward,
           const LstmWeights& backward) {
  if (x.value().rank() != 3) throw std::invalid_argument("BiLstm: x must be [N,L,In]");
  const std::int64_t n = x.value().dim(0), len = x.value().dim(1),
                     in = x.value().dim(2);
  const std::int64_t hidden = forward.w_hh.value().dim(0);
  for (const auto* w : {&forward, &backward}) {
    if (w->w_ih.value().dim(0) != in || w->w_ih.value().dim(1) != 4 * hidden ||
        w->w_hh.value().dim(1) != 4 * hidden || w->bias.value().size() != 4 * hidden) {
      throw std::invalid_argument("BiLstm: weight shapes inconsistent with input " +
                                  ShapeString(x.shape()));
    }
  }
  Tensor out({n, len, 2 * hidden});
  auto fcache = std::make_shared<DirectionCache>(
      RunDirection(x.value().data(), n, len, in, hidden, forward, false, out.data(), 0));
  auto bcache = std::make_shared<DirectionCache>(RunDirection(
      x.value().data(), n, len, in, hidden, backward, true, out.data(), hidden));
  if (!GradEnabled()) return Var(std::move(out));
  std::vector<Var> inputs = {x, forward.w_ih, forward.w_hh, forward.bias,
                             backward.w_ih, backward.w_hh, backward.bias};
  return MakeOpResult(
      std::move(out), inputs,
      [x, forward, backward, fcache, bcache, n, len, in, hidden](Node& self) {
        float* gx = x.requires_grad() ? x.node()->EnsureGrad().data() : nullptr;
        BackwardDirection(x.value().data(), self.value.data(), self.grad.data(),
                          n, len, in, hidden, forward, *fcache, false, 0, gx);
        BackwardDirection(x.value().data(), self.value.data(), self.grad.data(),
                          n, len, in, hidden, backward, *bcache, true, hidden, gx);
      });
}

}  // namespace spse::nn
