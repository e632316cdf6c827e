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

#include "spse/nn/ops.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "spse/nn/eigen_maps.h"

namespace spse::nn {

namespace {

void CheckSameShape(const Var& a, const Var& b, const char* op) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument(std::string(op) + ": shape mismatch " +
                                ShapeString(a.shape()) + " vs " +
                                ShapeString(b.shape()));
  }
}

void Accumulate(const Var& v, const Tensor& g) {
  if (!v.requires_grad()) return;
  Tensor& dst = v.node()->EnsureGrad();
  float* d = dst.data();
  const float* s = g.data();
  for (std::int64_t i = 0; i < g.size(); ++i) d[i] += s[i];
}

std::int64_t LeadingCount(const Shape& s, int trailing) {
  std::int64_t n = 1;
  for (size_t i = 0; i + trailing < s.size(); ++i) n *= s[i];
  return n;
}

}  // namespace

Var Add(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Add");
  Tensor out = a.value();
  const float* pb = b.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] += pb[i];
  return MakeOpResult(std::move(out), {a, b}, [a, b](Node& self) {
    Accumulate(a, self.grad);
    Accumulate(b, self.grad);
  });
}

Var Sub(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Sub");
  Tensor out = a.value();
  const float* pb = b.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] -= pb[i];
  return MakeOpResult(std::move(out), {a, b}, [a, b](Node& self) {
    Accumulate(a, self.grad);
    if (b.requires_grad()) {
      Tensor& gb = b.node()->EnsureGrad();
      for (std::int64_t i = 0; i < gb.size(); ++i) gb[i] -= self.grad[i];
    }
  });
}

Var Mul(const Var& a, const Var& b) {
  CheckSameShape(a, b, "Mul");
  Tensor out = a.value();
  const float* pb = b.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] *= pb[i];
  return MakeOpResult(std::move(out), {a, b}, [a, b](Node& self) {
    if (a.requires_grad()) {
      Tensor& ga = a.node()->EnsureGrad();
      for (std::int64_t i = 0; i < ga.size(); ++i)
        ga[i] += self.grad[i] * b.value()[i];
    }
    if (b.requires_grad()) {
      Tensor& gb = b.node()->EnsureGrad();
      for (std::int64_t i = 0; i < gb.size(); ++i)
        gb[i] += self.grad[i] * a.value()[i];
    }
  });
}

Var Scale(const Var& a, float s) {
  Tensor out = a.value();
  for (auto& v : out.values()) v *= s;
  return MakeOpResult(std::move(out), {a}, [a, s](Node& self) {
    Tensor& ga = a.node()->EnsureGrad();
    for (std::int64_t i = 0; i < ga.size(); ++i) ga[i] += s * self.grad[i];
  });
}

Var AddBias(const Var& x, const Var& bias) {
  const std::int64_t c = x.value().dim(-1);
  if (bias.value().size() != c) {
    throw std::invalid_argument("AddBias: bias size does not match last axis");
  }
  Tensor out = x.value();
  const float* pb = bias.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] += pb[i % c];
  return MakeOpResult(std::move(out), {x, bias}, [x, bias, c](Node& self) {
    Accumulate(x, self.grad);
    if (bias.requires_grad()) {
      Tensor& gb = bias.node()->EnsureGrad();
      for (std::int64_t i = 0; i < self.grad.size(); ++i)
        gb[i % c] += self.grad[i];
    }
  });
}

Var Sigmoid(const Var& x) {
  Tensor out(x.shape());
  const float* px = x.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i)
    out[i] = 1.0f / (1.0f + std::exp(-px[i]));
  Var result = MakeOpResult(std::move(out), {x}, nullptr);
  if (result.requires_grad()) {
    Node* rn = result.node();
    rn->backward = [x](Node& self) {
      Tensor& gx = x.node()->EnsureGrad();
      for (std::int64_t i = 0; i < gx.size(); ++i) {
        float y = self.value[i];
        gx[i] += self.grad[i] * y * (1.0f - y);
      }
    };
  }
  return result;
}

Var Log1p(const Var& x) {
  Tensor out(x.shape());
  const float* px = x.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) out[i] = std::log1p(px[i]);
  return MakeOpResult(std::move(out), {x}, [x](Node& self) {
    Tensor& gx = x.node()->EnsureGrad();
    for (std::int64_t i = 0; i < gx.size(); ++i)
      gx[i] += self.grad[i] / (1.0f + x.value()[i]);
  });
}

Var PRelu(const Var& x, const Var& alpha, std::int64_t inner) {
  const std::int64_t p = alpha.value().size();
  if (p < 1 || inner < 1) throw std::invalid_argument("PRelu: bad alpha");
  Tensor out = x.value();
  const float* pa = alpha.value().data();
  for (std::int64_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0.0f) out[i] *= pa[(i / inner) % p];
  }
  return MakeOpResult(std::move(out), {x, alpha}, [x, alpha, p, inner](
                                                      Node& self) {
    const float* px = x.value().data();
    const float* pa = alpha.value().data();
    if (x.requires_grad()) {
      Tensor& gx = x.node()->EnsureGrad();
      for (std::int64_t i = 0; i < gx.size(); ++i)
        gx[i] += px[i] < 0.0f ? self.grad[i] * pa[(i / inner) % p]
                              : self.grad[i];
    }
    if (alpha.requires_grad()) {
      Tensor& ga = alpha.node()->EnsureGrad();
      for (std::int64_t i = 0; i < self.grad.size(); ++i)
        if (px[i] < 0.0f) ga[(i / inner) % p] += self.grad[i] * px[i];
    }
  });
}

Var Linear(const Var& x, const Var& weight, const Var& bias) {
  const std::int64_t in = weight.value().dim(0);
  const std::int64_t out_dim = weight.value().dim(1);
  if (x.value().dim(-1) != in) {
    throw std::invalid_argument("Linear: input " + ShapeString(x.shape()) +
                                " vs weight " + ShapeString(weight.shape()));
  }
  const std::int64_t rows = x.value().size() / in;
  Shape out_shape = x.shape();
  out_shape.back() = out_dim;
  Tensor out(out_shape);
  MapRM y(out.data(), rows, out_dim);
  CMapRM xm(x.value().data(), rows, in);
  CMapRM wm(weight.value().data(), in, out_dim);
  y.noalias() = xm * wm;
  if (bias.defined()) {
    Eigen::Map<const Eigen::RowVectorXf> b(bias.value().data(), out_dim);
    y.rowwise() += b;
  }
  std::vector<Var> inputs = {x, weight};
  if (bias.defined()) inputs.push_back(bias);
  return MakeOpResult(
      std::move(out), inputs, [x, weight, bias, rows, in, out_dim](Node& self) {
        CMapRM gy(self.grad.data(), rows, out_dim);
        if (x.requires_grad()) {
          MapRM gx(x.node()->EnsureGrad().data(), rows, in);
          CMapRM wm(weight.value().data(), in, out_dim);
          gx.noalias() += gy * wm.transpose();
        }
        if (weight.requires_grad()) {
          MapRM gw(weight.node()->EnsureGrad().data(), in, out_dim);
          CMapRM xm(x.value().data(), rows, in);
          gw.noalias() += xm.transpose() * gy;
        }
        if (bias.defined() && bias.requires_grad()) {
          AddColumnSums(gy, bias.node()->EnsureGrad().data());
        }
      });
}

Var Reshape(const Var& x, Shape shape) {
  Tensor out = x.value().Reshaped(std::move(shape));
  return MakeOpResult(std::move(out), {x}, [x](Node& self) {
    Tensor& gx = x.node()->EnsureGrad();
    for (std::int64_t i = 0; i < gx.size(); ++i) gx[i] += self.grad[i];
  });
}

namespace {

// Maps each output flat index to the source flat index for a permutation.
std::vector<std::int64_t> PermutationIndex(const Shape& in_shape,
                                           const std::vector<int>& perm,
                                           Shape* out_shape) {
  const int r = static_cast<int>(in_shape.size());
  if (static_cast<int>(perm.size()) != r) {
    throw std::invalid_argument("Permute: rank mismatch");
  }
  std::vector<std::int64_t> in_stride(r, 1);
  for (int i = r - 2; i >= 0; --i) in_stride[i] = in_stride[i + 1] * in_shape[i + 1];
  out_shape->assign(r, 0);
  std::vector<bool> used(r, false);
  for (int i = 0; i < r; ++i) {
    if (perm[i] < 0 || perm[i] >= r || used[perm[i]]) {
      throw std::invalid_argument("Permute: invalid permutation");
    }
    used[perm[i]] = true;
    (*out_shape)[i] = in_shape[perm[i]];
  }
  const std::int64_t n = NumElements(in_shape);
  std::vector<std::int64_t> index(static_cast<size_t>(n));
  std::vector<std::int64_t> counter(r, 0);
  std::int64_t src = 0;
  for (std::int64_t o = 0; o < n; ++o) {
    index[o] = src;
    for (int ax = r - 1; ax >= 0; --ax) {
      src += in_stride[perm[ax]];
      if (++counter[ax] < (*out_shape)[ax]) break;
      src -= in_stride[perm[ax]] * (*out_shape)[ax];
      counter[ax] = 0;
    }
  }
  return index;
}

}  // namespace

Var Permute(const Var& x, const std::vector<int>& perm) {
  Shape out_shape;
  auto index = PermutationIndex(x.shape(), perm, &out_shape);
  Tensor out(out_shape);
  const float* px = x.value().data();
  for (std::int64_t o = 0; o < out.size(); ++o) out[o] = px[index[o]];
  return MakeOpResult(std::move(out), {x},
                      [x, index = std::move(index)](Node& self) {
                        Tensor& gx = x.node()->EnsureGrad();
                        for (std::int64_t o = 0; o < self.grad.size(); ++o)
                          gx[index[o]] += self.grad[o];
                      });
}

Var Concat(const std::vector<Var>& xs) {
  if (xs.empty()) throw std::invalid_argument("Concat: no inputs");
  Shape lead = xs[0].shape();
  lead.pop_back();
  std::vector<std::int64_t> widths;
  std::int64_t total = 0;
  for (const auto& v : xs) {
    Shape s = v.shape();
    widths.push_back(s.back());
    total += s.back();
    s.pop_back();
    if (s != lead) throw std::invalid_argument("Concat: leading axes differ");
  }
  const std::int64_t rows = NumElements(lead);
  Shape out_shape = lead;
  out_shape.push_back(total);
  Tensor out(out_shape);
  std::int64_t offset = 0;
  for (size_t k = 0; k < xs.size(); ++k) {
    const float* src = xs[k].value().data();
    for (std::int64_t r = 0; r < rows; ++r)
      std::copy_n(src + r * widths[k], widths[k], out.data() + r * total + offset);
    offset += widths[k];
  }
  return MakeOpResult(std::move(out), xs, [xs, widths, rows, total](Node& self) {
    std::int64_t offset = 0;
    for (size_t k = 0; k < xs.size(); ++k) {
      if (xs[k].requires_grad()) {
        float* dst = xs[k].node()->EnsureGrad().data();
        for (std::int64_t r = 0; r < rows; ++r)
          for (std::int64_t c = 0; c < widths[k]; ++c)
            dst[r * widths[k] + c] += self.grad[r * total + offset + c];
      }
      offset += widths[k];
    }
  });
}

Var GroupNorm(const Var& x, std::int64_t group, const Var& gamma,
              const Var& beta, float eps) {
  const std::int64_t n = x.value().size();
  const std::int64_t p = gamma.value().size();
  if (group <= 0 || n % group != 0 || p <= 0 || n % p != 0 ||
      beta.value().size() != p) {
    throw std::invalid_argument("GroupNorm: inconsistent group/params for " +
                                ShapeString(x.shape()));
  }
  const std::int64_t groups = n / group;
  Tensor out(x.shape());
  Tensor xhat(x.shape());
  std::vector<float> inv_std(static_cast<size_t>(groups));
  const float* px = x.value().data();
  const float* pg = gamma.value().data();
  const float* pb = beta.value().data();
  for (std::int64_t g = 0; g < groups; ++g) {
    const float* xs = px + g * group;
    double mean = 0.0;
    for (std::int64_t i = 0; i < group; ++i) mean += xs[i];
    mean /= static_cast<double>(group);
    double var = 0.0;
    for (std::int64_t i = 0; i < group; ++i) {
      double d = xs[i] - mean;
      var += d * d;
    }
    var /= static_cast<double>(group);
    const float is = static_cast<float>(1.0 / std::sqrt(var + eps));
    const float m = static_cast<float>(mean);
    inv_std[g] = is;
    float* xh = xhat.data() + g * group;
    float* ys = out.data() + g * group;
    std::int64_t k = (g * group) % p;
    for (std::int64_t i = 0; i < group; ++i) {
      xh[i] = (xs[i] - m) * is;
      ys[i] = xh[i] * pg[k] + pb[k];
      if (++k == p) k = 0;
    }
  }
  return MakeOpResult(
      std::move(out), {x, gamma, beta},
      [x, gamma, beta, group, groups, p, xhat = std::move(xhat),
       inv_std = std::move(inv_std)](Node& self) {
        const float* gy = self.grad.data();
        const float* pg = gamma.value().data();
        const std::int64_t n = self.grad.size();
        if (gamma.requires_grad()) {
          float* gg = gamma.node()->EnsureGrad().data();
          for (std::int64_t base = 0; base < n; base += p)
            for (std::int64_t k = 0; k < p; ++k) gg[k] += gy[base + k] * xhat[base + k];
        }
        if (beta.requires_grad()) {
          float* gb = beta.node()->EnsureGrad().data();
          for (std::int64_t base = 0; base < n; base += p)
            for (std::int64_t k = 0; k < p; ++k) gb[k] += gy[base + k];
        }
        if (!x.requires_grad()) return;
        Tensor& gx = x.node()->EnsureGrad();
        std::vector<float> scaled(static_cast<size_t>(group));
        for (std::int64_t g = 0; g < groups; ++g) {
          const float* gys = gy + g * group;
          const float* xh = xhat.data() + g * group;
          double m1 = 0.0, m2 = 0.0;
          std::int64_t k = (g * group) % p;
          for (std::int64_t i = 0; i < group; ++i) {
            const float d = gys[i] * pg[k];
            if (++k == p) k = 0;
            scaled[i] = d;
            m1 += d;
            m2 += static_cast<double>(d) * xh[i];
          }
          const float a = static_cast<float>(m1 / group);
          const float b = static_cast<float>(m2 / group);
          float* gxs = gx.data() + g * group;
          for (std::int64_t i = 0; i < group; ++i)
            gxs[i] += inv_std[g] * (scaled[i] - a - xh[i] * b);
        }
      });
}

namespace {

struct ConvGeometry {
  std::int64_t batch, t, f, cin, kt, kf, cout, to, fo;
  Conv2dOptions opts;
  std::int64_t patch() const { return kt * kf * cin; }
};

void Im2Col(const float* x, const ConvGeometry& g, float* cols) {
  const std::int64_t patch = g.patch();
  for (std::int64_t to = 0; to < g.to; ++to) {
    for (std::int64_t fo = 0; fo < g.fo; ++fo) {
      float* row = cols + (to * g.fo + fo) * patch;
      for (std::int64_t dt = 0; dt < g.kt; ++dt) {
        const std::int64_t ti = to * g.opts.stride_t + dt - g.opts.pad_t;
        for (std::int64_t df = 0; df < g.kf; ++df) {
          const std::int64_t fi = fo * g.opts.stride_f + df - g.opts.pad_f;
          float* dst = row + (dt * g.kf + df) * g.cin;
          if (ti < 0 || ti >= g.t || fi < 0 || fi >= g.f) {
            std::fill_n(dst, g.cin, 0.0f);
          } else {
            std::copy_n(x + (ti * g.f + fi) * g.cin, g.cin, dst);
          }
        }
      }
    }
  }
}

void Col2Im(const float* cols, const ConvGeometry& g, float* x) {
  const std::int64_t patch = g.patch();
  for (std::int64_t to = 0; to < g.to; ++to) {
    for (std::int64_t fo = 0; fo < g.fo; ++fo) {
      const float* row = cols + (to * g.fo + fo) * patch;
      for (std::int64_t dt = 0; dt < g.kt; ++dt) {
        const std::int64_t ti = to * g.opts.stride_t + dt - g.opts.pad_t;
        if (ti < 0 || ti >= g.t) continue;
        for (std::int64_t df = 0; df < g.kf; ++df) {
          const std::int64_t fi = fo * g.opts.stride_f + df - g.opts.pad_f;
          if (fi < 0 || fi >= g.f) continue;
          const float* src = row + (dt * g.kf + df) * g.cin;
          float* dst = x + (ti * g.f + fi) * g.cin;
          for (std::int64_t c = 0; c < g.cin; ++c) dst[c] += src[c];
        }
      }
    }
  }
}

}  // namespace

Var Conv2d(const Var& x, const Var& weight, const Var& bias,
           const Conv2dOptions& opts) {
  if (x.value().rank() != 4 || weight.value().rank() != 4) {
    throw std::invalid_argument("Conv2d expects [B,T,F,C] input and "
                                "[kt,kf,Cin,Cout] weight");
  }
  ConvGeometry g{};
  g.batch = x.value().dim(0);
  g.t = x.value().dim(1);
  g.f = x.value().dim(2);
  g.cin = x.value().dim(3);
  g.kt = weight.value().dim(0);
  g.kf = weight.value().dim(1);
  g.cout = weight.value().dim(3);
  g.opts = opts;
  if (weight.value().dim(2) != g.cin) {
    throw std::invalid_argument("Conv2d: channel mismatch " +
                                ShapeString(x.shape()) + " vs " +
                                ShapeString(weight.shape()));
  }
  g.to = (g.t + 2 * opts.pad_t - g.kt) / opts.stride_t + 1;
  g.fo = (g.f + 2 * opts.pad_f - g.kf) / opts.stride_f + 1;
  if (g.to <= 0 || g.fo <= 0) throw std::invalid_argument("Conv2d: empty output");

  Tensor out({g.batch, g.to, g.fo, g.cout});
  const std::int64_t rows = g.to * g.fo;
  std::vector<float> cols(static_cast<size_t>(rows * g.patch()));
  CMapRM w(weight.value().data(), g.patch(), g.cout);
  for (std::int64_t b = 0; b < g.batch; ++b) {
    Im2Col(x.value().data() + b * g.t * g.f * g.cin, g, cols.data());
    MapRM y(out.data() + b * rows * g.cout, rows, g.cout);
    y.noalias() = CMapRM(cols.data(), rows, g.patch()) * w;
    if (bias.defined()) {
      y.rowwise() += Eigen::Map<const Eigen::RowVectorXf>(bias.value().data(),
                                                         g.cout);
    }
  }
  std::vector<Var> inputs = {x, weight};
  if (bias.defined()) inputs.push_back(bias);
  return MakeOpResult(std::move(out), inputs, [x, weight, bias, g](Node& self) {
    const std::int64_t rows = g.to * g.fo;
    std::vector<float> cols(static_cast<size_t>(rows * g.patch()));
    CMapRM w(weight.value().data(), g.patch(), g.cout);
    for (std::int64_t b = 0; b < g.batch; ++b) {
      CMapRM gy(self.grad.data() + b * rows * g.cout, rows, g.cout);
      if (weight.requires_grad()) {
        Im2Col(x.value().data() + b * g.t * g.f * g.cin, g, cols.data());
        MapRM gw(weight.node()->EnsureGrad().data(), g.patch(), g.cout);
        gw.noalias() += CMapRM(cols.data(), rows, g.patch()).transpose() * gy;
      }
      if (bias.defined() && bias.requires_grad()) {
        AddColumnSums(gy, bias.node()->EnsureGrad().data());
      }
      if (x.requires_grad()) {
        MapRM gcols(cols.data(), rows, g.patch());
        gcols.noalias() = gy * w.transpose();
        Col2Im(cols.data(), g,
               x.node()->EnsureGrad().data() + b * g.t * g.f * g.cin);
      }
    }
  });
}

Var Unfold(const Var& x, int kernel, int stride) {
  const Shape& s = x.shape();
  if (s.size() < 2 || kernel < 1 || stride < 1) {
    throw std::invalid_argument("Unfold: bad arguments");
  }
  const std::int64_t len = s[s.size() - 2];
  const std::int64_t c = s.back();
  if (len < kernel || (len - kernel) % stride != 0) {
    throw std::invalid_argument("Unfold: length " + std::to_string(len) +
                                " incompatible with kernel/stride");
  }
  const std::int64_t out_len = (len - kernel) / stride + 1;
  const std::int64_t lead = LeadingCount(s, 2);
  Shape out_shape = s;
  out_shape[s.size() - 2] = out_len;
  out_shape.back() = kernel * c;
  Tensor out(out_shape);
  const float* px = x.value().data();
  for (std::int64_t n = 0; n < lead; ++n) {
    for (std::int64_t l = 0; l < out_len; ++l) {
      const float* src = px + (n * len + l * stride) * c;
      std::copy_n(src, kernel * c, out.data() + (n * out_len + l) * kernel * c);
    }
  }
  return MakeOpResult(std::move(out), {x},
                      [x, kernel, stride, len, c, out_len, lead](Node& self) {
                        float* gx = x.node()->EnsureGrad().data();
                        for (std::int64_t n = 0; n < lead; ++n)
                          for (std::int64_t l = 0; l < out_len; ++l) {
                            const float* src = self.grad.data() +
                                               (n * out_len + l) * kernel * c;
                            float* dst = gx + (n * len + l * stride) * c;
                            for (std::int64_t i = 0; i < kernel * c; ++i)
                              dst[i] += src[i];
                          }
                      });
}

Var Fold(const Var& y, int kernel, int stride, std::int64_t out_len) {
  const Shape& s = y.shape();
  if (s.size() < 2 || s.back() % kernel != 0) {
    throw std::invalid_argument("Fold: last axis must be kernel * C");
  }
  const std::int64_t in_len = s[s.size() - 2];
  const std::int64_t c = s.back() / kernel;
  if ((in_len - 1) * stride + kernel != out_len) {
    throw std::invalid_argument("Fold: output length mismatch");
  }
  const std::int64_t lead = LeadingCount(s, 2);
  Shape out_shape = s;
  out_shape[s.size() - 2] = out_len;
  out_shape.back() = c;
  Tensor out(out_shape);
  const float* py = y.value().data();
  for (std::int64_t n = 0; n < lead; ++n)
    for (std::int64_t l = 0; l < in_len; ++l) {
      const float* src = py + (n * in_len + l) * kernel * c;
      float* dst = out.data() + (n * out_len + l * stride) * c;
      for (std::int64_t i = 0; i < kernel * c; ++i) dst[i] += src[i];
    }
  return MakeOpResult(std::move(out), {y},
                      [y, kernel, stride, in_len, out_len, c, lead](Node& self) {
                        float* gy = y.node()->EnsureGrad().data();
                        for (std::int64_t n = 0; n < lead; ++n)
                          for (std::int64_t l = 0; l < in_len; ++l) {
                            const float* src = self.grad.data() +
                                               (n * out_len + l * stride) * c;
                            float* dst = gy + (n * in_len + l) * kernel * c;
                            for (std::int64_t i = 0; i < kernel * c; ++i)
                              dst[i] += src[i];
                          }
                      });
}

Var BatchedMatMul(const Var& a, const Var& b, bool transpose_b) {
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  if (sa.size() < 2 || sb.size() != sa.size()) {
    throw std::invalid_argument("BatchedMatMul: rank mismatch");
  }
  const std::int64_t m = sa[sa.size() - 2], k = sa.back();
  const std::int64_t kb = transpose_b ? sb.back() : sb[sb.size() - 2];
  const std::int64_t p = transpose_b ? sb[sb.size() - 2] : sb.back();
  const std::int64_t batch = LeadingCount(sa, 2);
  if (kb != k || LeadingCount(sb, 2) != batch) {
    throw std::invalid_argument("BatchedMatMul: " + ShapeString(sa) + " x " +
                                ShapeString(sb));
  }
  Shape out_shape = sa;
  out_shape.back() = p;
  Tensor out(out_shape);
  for (std::int64_t n = 0; n < batch; ++n) {
    CMapRM am(a.value().data() + n * m * k, m, k);
    MapRM om(out.data() + n * m * p, m, p);
    if (transpose_b) {
      om.noalias() = am * CMapRM(b.value().data() + n * p * k, p, k).transpose();
    } else {
      om.noalias() = am * CMapRM(b.value().data() + n * k * p, k, p);
    }
  }
  return MakeOpResult(std::move(out), {a, b},
                      [a, b, transpose_b, m, k, p, batch](Node& self) {
                        for (std::int64_t n = 0; n < batch; ++n) {
                          CMapRM g(self.grad.data() + n * m * p, m, p);
                          if (a.requires_grad()) {
                            MapRM ga(a.node()->EnsureGrad().data() + n * m * k, m, k);
                            if (transpose_b) {
                              ga.noalias() += g * CMapRM(b.value().data() + n * p * k, p, k);
                            } else {
                              ga.noalias() += g * CMapRM(b.value().data() + n * k * p, k, p).transpose();
                            }
                          }
                          if (b.requires_grad()) {
                            CMapRM am(a.value().data() + n * m * k, m, k);
                            if (transpose_b) {
                              MapRM gb(b.node()->EnsureGrad().data() + n * p * k, p, k);
                              gb.noalias() += g.transpose() * am;
                            } else {
                              MapRM gb(b.node()->EnsureGrad().data() + n * k * p, k, p);
                              gb.noalias() += am.transpose() * g;
                            }
                          }
                        }
                      });
}

Var SoftmaxLastDim(const Var& x) {
  const std::int64_t c = x.value().dim(-1);
  const std::int64_t rows = x.value().size() / c;
  Tensor out(x.shape());
  const float* px = x.value().data();
  for (std::int64_t r = 0; r < rows; ++r) {
    const float* xs = px + r * c;
    float* ys = out.data() + r * c;
    float mx = *std::max_element(xs, xs + c);
    double sum = 0.0;
    for (std::int64_t i = 0; i < c; ++i) {
      ys[i] = std::exp(xs[i] - mx);
      sum += ys[i];
    }
    for (std::int64_t i = 0; i < c; ++i) ys[i] = static_cast<float>(ys[i] / sum);
  }
  Var result = MakeOpResult(std::move(out), {x}, nullptr);
  if (result.requires_grad()) {
    result.node()->backward = [x, c, rows](Node& self) {
      float* gx = x.node()->EnsureGrad().data();
      for (std::int64_t r = 0; r < rows; ++r) {
        const float* y = self.value.data() + r * c;
        const float* g = self.grad.data() + r * c;
        double dot = 0.0;
        for (std::int64_t i = 0; i < c; ++i) dot += g[i] * y[i];
        for (std::int64_t i = 0; i < c; ++i)
          gx[r * c + i] += y[i] * static_cast<float>(g[i] - dot);
      }
    };
  }
  return result;
}

Var SumAll(const Var& x) {
  double s = 0.0;
  for (float v : x.value().values()) s += v;
  return MakeOpResult(Tensor({1}, static_cast<float>(s)), {x}, [x](Node& self) {
    Tensor& gx = x.node()->EnsureGrad();
    for (auto& v : gx.values()) v += self.grad[0];
  });
}

Var WeightedSum(const Var& x, const Tensor& w) {
  if (w.shape() != x.shape()) throw std::invalid_argument("WeightedSum: shape");
  double s = 0.0;
  for (std::int64_t i = 0; i < w.size(); ++i)
    s += static_cast<double>(x.value()[i]) * w[i];
  return MakeOpResult(Tensor({1}, static_cast<float>(s)), {x}, [x, w](Node& self) {
    Tensor& gx = x.node()->EnsureGrad();
    for (std::int64_t i = 0; i < gx.size(); ++i) gx[i] += self.grad[0] * w[i];
  });
}

}  // namespace spse::nn
