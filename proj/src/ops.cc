// Copyright 2026 The relgraph Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relgraph/ops.h"

#include <algorithm>
#include <cmath>
#include <memory>
#include <string>

#include "relgraph/errors.h"

namespace relgraph {
namespace {

using ImplPtr = std::shared_ptr<TensorImpl>;

// Gradient buffer of an input, or null when the input is not differentiable.
double* GradOf(const ImplPtr& t) {
  if (!t->requires_grad) return nullptr;
  t->EnsureGrad();
  return t->grad.data();
}

[[noreturn]] void Mismatch(const char* op, const std::string& detail) {
  throw ShapeError(std::string(op) + ": " + detail);
}

void Require2d(const char* op, const Tensor& a, const char* which = "input") {
  if (a.rank() != 2) {
    Mismatch(op, std::string(which) + " must be 2-D, got " + ShapeString(a.shape()));
  }
}

// Offset into `b` for every element of `a` under broadcasting. Empty when the
// shapes are identical.
std::vector<std::size_t> BroadcastIndex(const char* op, const Shape& a, const Shape& b) {
  if (a == b) return {};
  if (b.size() > a.size()) {
    Mismatch(op, "cannot broadcast " + ShapeString(b) + " onto " + ShapeString(a));
  }
  Shape padded(a.size() - b.size(), 1);
  padded.insert(padded.end(), b.begin(), b.end());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (padded[i] != a[i] && padded[i] != 1) {
      Mismatch(op, "cannot broadcast " + ShapeString(b) + " onto " + ShapeString(a) +
                       " (axis " + std::to_string(i) + ")");
    }
  }
  std::size_t n = NumElements(a);
  std::vector<std::size_t> index(n);
  std::vector<std::size_t> b_strides(a.size(), 0);
  std::size_t stride = 1;
  for (std::size_t i = a.size(); i-- > 0;) {
    b_strides[i] = padded[i] == 1 ? 0 : stride;
    stride *= padded[i];
  }
  std::vector<std::size_t> coord(a.size(), 0);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t off = 0;
    for (std::size_t i = 0; i < a.size(); ++i) off += coord[i] * b_strides[i];
    index[flat] = off;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (++coord[i] < a[i]) break;
      coord[i] = 0;
    }
  }
  return index;
}

template <typename Fwd, typename Bwd>
Tensor Unary(OpKind kind, const Tensor& a, Fwd fwd, Bwd dfdx) {
  std::vector<double> out(a.size());
  auto x = a.values();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = fwd(x[i]);
  ImplPtr in = a.impl();
  return MakeResult(kind, a.shape(), std::move(out), {a}, [in, dfdx](const TensorImpl& o) {
    double* g = GradOf(in);
    if (!g) return;
    for (std::size_t i = 0; i < o.data.size(); ++i) {
      g[i] += o.grad[i] * dfdx(in->data[i], o.data[i]);
    }
  });
}

enum class Binary { kAdd, kSub, kMul };

Tensor BinaryOp(OpKind kind, Binary which, const Tensor& a, const Tensor& b) {
  const char* op = OpName(kind);
  auto index = std::make_shared<std::vector<std::size_t>>(BroadcastIndex(op, a.shape(), b.shape()));
  const bool same = index->empty();
  auto x = a.values();
  auto y = b.values();
  std::vector<double> out(a.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    double yv = y[same ? i : (*index)[i]];
    switch (which) {
      case Binary::kAdd: out[i] = x[i] + yv; break;
      case Binary::kSub: out[i] = x[i] - yv; break;
      case Binary::kMul: out[i] = x[i] * yv; break;
    }
  }
  ImplPtr ia = a.impl();
  ImplPtr ib = b.impl();
  return MakeResult(kind, a.shape(), std::move(out), {a, b}, [ia, ib, index, which](const TensorImpl& o) {
    const bool same = index->empty();
    double* ga = GradOf(ia);
    double* gb = GradOf(ib);
    for (std::size_t i = 0; i < o.data.size(); ++i) {
      std::size_t j = same ? i : (*index)[i];
      double g = o.grad[i];
      switch (which) {
        case Binary::kAdd:
          if (ga) ga[i] += g;
          if (gb) gb[j] += g;
          break;
        case Binary::kSub:
          if (ga) ga[i] += g;
          if (gb) gb[j] -= g;
          break;
        case Binary::kMul:
          if (ga) ga[i] += g * ib->data[j];
          if (gb) gb[j] += g * ia->data[i];
          break;
      }
    }
  });
}

}  // namespace

const char* DirectionName(Direction direction) {
  return direction == Direction::kForward ? "forward" : "backward";
}

Tensor MatMul(const Tensor& a, const Tensor& b) {
  Require2d("matmul", a, "lhs");
  Require2d("matmul", b, "rhs");
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k) {
    Mismatch("matmul", "inner dimensions differ: lhs " + ShapeString(a.shape()) + " rhs " +
                           ShapeString(b.shape()));
  }
  std::vector<double> out(m * n, 0.0);
  const double* x = a.values().data();
  const double* y = b.values().data();
  for (std::size_t i = 0; i < m; ++i) {
    double* row = out.data() + i * n;
    for (std::size_t p = 0; p < k; ++p) {
      const double s = x[i * k + p];
      if (s == 0.0) continue;
      const double* yrow = y + p * n;
      for (std::size_t j = 0; j < n; ++j) row[j] += s * yrow[j];
    }
  }
  ImplPtr ia = a.impl();
  ImplPtr ib = b.impl();
  return MakeResult(OpKind::kMatMul, {m, n}, std::move(out), {a, b}, [ia, ib, m, k, n](const TensorImpl& o) {
    const double* go = o.grad.data();
    if (double* ga = GradOf(ia)) {
      // ga += go * b^T, accumulated row by row over a transposed copy of b.
      const double* y = ib->data.data();
      std::vector<double> yt(n * k);
      for (std::size_t p = 0; p < k; ++p) {
        for (std::size_t j = 0; j < n; ++j) yt[j * k + p] = y[p * n + j];
      }
      for (std::size_t i = 0; i < m; ++i) {
        double* garow = ga + i * k;
        for (std::size_t j = 0; j < n; ++j) {
          const double s = go[i * n + j];
          if (s == 0.0) continue;
          const double* ytrow = yt.data() + j * k;
          for (std::size_t p = 0; p < k; ++p) garow[p] += s * ytrow[p];
        }
      }
    }
    if (double* gb = GradOf(ib)) {
      const double* x = ia->data.data();
      for (std::size_t i = 0; i < m; ++i) {
        const double* grow = go + i * n;
        for (std::size_t p = 0; p < k; ++p) {
          const double s = x[i * k + p];
          if (s == 0.0) continue;
          double* gbrow = gb + p * n;
          for (std::size_t j = 0; j < n; ++j) gbrow[j] += s * grow[j];
        }
      }
    }
  });
}

Tensor Transpose(const Tensor& a) {
  Require2d("transpose", a);
  const std::size_t r = a.dim(0), c = a.dim(1);
  std::vector<double> out(r * c);
  auto x = a.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[j * r + i] = x[i * c + j];
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kTranspose, {c, r}, std::move(out), {a}, [in, r, c](const TensorImpl& o) {
    double* g = GradOf(in);
    if (!g) return;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += o.grad[j * r + i];
  });
}

Tensor Add(const Tensor& a, const Tensor& b) { return BinaryOp(OpKind::kAdd, Binary::kAdd, a, b); }
Tensor Sub(const Tensor& a, const Tensor& b) { return BinaryOp(OpKind::kSub, Binary::kSub, a, b); }
Tensor Mul(const Tensor& a, const Tensor& b) { return BinaryOp(OpKind::kMul, Binary::kMul, a, b); }

Tensor Scale(const Tensor& a, double factor) {
  return Unary(
      OpKind::kScale, a, [factor](double x) { return factor * x; },
      [factor](double, double) { return factor; });
}

Tensor Relu(const Tensor& a) {
  return Unary(
      OpKind::kRelu, a, [](double x) { return x > 0.0 ? x : 0.0; },
      [](double x, double) { return x > 0.0 ? 1.0 : 0.0; });
}

Tensor SquaredRelu(const Tensor& a) {
  return Unary(
      OpKind::kSquaredRelu, a, [](double x) { return x > 0.0 ? x * x : 0.0; },
      [](double x, double) { return x > 0.0 ? 2.0 * x : 0.0; });
}

Tensor Sigmoid(const Tensor& a) {
  return Unary(
      OpKind::kSigmoid, a,
      [](double x) {
        if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
        const double e = std::exp(x);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Tensor Tanh(const Tensor& a) {
  return Unary(
      OpKind::kTanh, a, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor Exp(const Tensor& a) {
  return Unary(
      OpKind::kExp, a, [](double x) { return std::exp(x); }, [](double, double y) { return y; });
}

Tensor Log(const Tensor& a) {
  return Unary(
      OpKind::kLog, a, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor SumAxis(const Tensor& a, std::size_t axis) {
  Require2d("sum_axis", a);
  if (axis > 1) Mismatch("sum_axis", "axis " + std::to_string(axis) + " out of range for 2-D input");
  const std::size_t r = a.dim(0), c = a.dim(1);
  Shape shape = axis == 0 ? Shape{1, c} : Shape{r, 1};
  std::vector<double> out(axis == 0 ? c : r, 0.0);
  auto x = a.values();
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) out[axis == 0 ? j : i] += x[i * c + j];
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kSumAxis, std::move(shape), std::move(out), {a}, [in, r, c, axis](const TensorImpl& o) {
    double* g = GradOf(in);
    if (!g) return;
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j) g[i * c + j] += o.grad[axis == 0 ? j : i];
  });
}

Tensor SumAll(const Tensor& a) {
  double total = 0.0;
  for (double v : a.values()) total += v;
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kSumAll, {}, {total}, {a}, [in](const TensorImpl& o) {
    double* g = GradOf(in);
    if (!g) return;
    for (std::size_t i = 0; i < in->data.size(); ++i) g[i] += o.grad[0];
  });
}

Tensor Mean(const Tensor& a) {
  return Scale(SumAll(a), 1.0 / static_cast<double>(a.size()));
}

Tensor Concat(std::span<const Tensor> parts, std::size_t axis) {
  if (parts.empty()) Mismatch("concat", "no inputs");
  if (axis > 1) Mismatch("concat", "axis " + std::to_string(axis) + " out of range for 2-D inputs");
  for (const Tensor& p : parts) Require2d("concat", p);
  const std::size_t other = axis == 0 ? parts[0].dim(1) : parts[0].dim(0);
  std::size_t total = 0;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    const std::size_t o = axis == 0 ? parts[i].dim(1) : parts[i].dim(0);
    if (o != other) {
      Mismatch("concat", "input " + std::to_string(i) + " has shape " + ShapeString(parts[i].shape()) +
                             ", expected extent " + std::to_string(other) + " on axis " +
                             std::to_string(1 - axis));
    }
    total += parts[i].dim(axis);
  }
  Shape shape = axis == 0 ? Shape{total, other} : Shape{other, total};
  const std::size_t cols = shape[1];
  std::vector<double> out(total * other);
  std::vector<std::size_t> offsets;
  std::size_t off = 0;
  for (const Tensor& p : parts) {
    offsets.push_back(off);
    auto x = p.values();
    const std::size_t pr = p.dim(0), pc = p.dim(1);
    for (std::size_t i = 0; i < pr; ++i)
      for (std::size_t j = 0; j < pc; ++j) {
        const std::size_t row = axis == 0 ? off + i : i;
        const std::size_t col = axis == 0 ? j : off + j;
        out[row * cols + col] = x[i * pc + j];
      }
    off += p.dim(axis);
  }
  std::vector<ImplPtr> ins;
  for (const Tensor& p : parts) ins.push_back(p.impl());
  return MakeResult(OpKind::kConcat, std::move(shape), std::move(out),
                    std::vector<Tensor>(parts.begin(), parts.end()),
                    [ins, offsets, axis, cols](const TensorImpl& o) {
                      for (std::size_t n = 0; n < ins.size(); ++n) {
                        double* g = GradOf(ins[n]);
                        if (!g) continue;
                        const std::size_t pr = ins[n]->shape[0], pc = ins[n]->shape[1];
                        for (std::size_t i = 0; i < pr; ++i)
                          for (std::size_t j = 0; j < pc; ++j) {
                            const std::size_t row = axis == 0 ? offsets[n] + i : i;
                            const std::size_t col = axis == 0 ? j : offsets[n] + j;
                            g[i * pc + j] += o.grad[row * cols + col];
                          }
                      }
                    });
}

Tensor Slice(const Tensor& a, std::size_t axis, std::size_t begin, std::size_t end) {
  Require2d("slice", a);
  if (axis > 1) Mismatch("slice", "axis " + std::to_string(axis) + " out of range for 2-D input");
  if (begin >= end || end > a.dim(axis)) {
    Mismatch("slice", "range [" + std::to_string(begin) + "," + std::to_string(end) +
                          ") invalid for extent " + std::to_string(a.dim(axis)) + " of " +
                          ShapeString(a.shape()));
  }
  const std::size_t r = a.dim(0), c = a.dim(1);
  const std::size_t rows = axis == 0 ? end - begin : r;
  const std::size_t cols = axis == 0 ? c : end - begin;
  const std::size_t r0 = axis == 0 ? begin : 0;
  const std::size_t c0 = axis == 0 ? 0 : begin;
  std::vector<double> out(rows * cols);
  auto x = a.values();
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) out[i * cols + j] = x[(r0 + i) * c + c0 + j];
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kSlice, {rows, cols}, std::move(out), {a},
                    [in, rows, cols, r0, c0, c](const TensorImpl& o) {
                      double* g = GradOf(in);
                      if (!g) return;
                      for (std::size_t i = 0; i < rows; ++i)
                        for (std::size_t j = 0; j < cols; ++j)
                          g[(r0 + i) * c + c0 + j] += o.grad[i * cols + j];
                    });
}

Tensor CausalConv1d(const Tensor& x, const Tensor& weight, const Tensor& bias, std::size_t width,
                    Direction direction) {
  Require2d("causal_conv1d", x, "input");
  Require2d("causal_conv1d", weight, "weight");
  if (width == 0) Mismatch("causal_conv1d", "kernel width must be positive");
  const std::size_t steps = x.dim(0), cin = x.dim(1), cout = weight.dim(1);
  if (weight.dim(0) != width * cin) {
    Mismatch("causal_conv1d", "weight " + ShapeString(weight.shape()) + " does not match width " +
                                  std::to_string(width) + " x channels " + std::to_string(cin));
  }
  if (bias.defined() && bias.size() != cout) {
    Mismatch("causal_conv1d", "bias " + ShapeString(bias.shape()) + " does not match " +
                                  std::to_string(cout) + " output channels");
  }
  const bool fwd = direction == Direction::kForward;
  // Source position read by tap k at output t, or -1 in the padding.
  auto source = [=](std::size_t t, std::size_t k) -> long {
    const long lag = static_cast<long>(width - 1 - k);
    const long s = fwd ? static_cast<long>(t) - lag : static_cast<long>(t) + lag;
    return (s < 0 || s >= static_cast<long>(steps)) ? -1 : s;
  };
  std::vector<double> out(steps * cout, 0.0);
  const double* xv = x.values().data();
  const double* wv = weight.values().data();
  for (std::size_t t = 0; t < steps; ++t) {
    double* row = out.data() + t * cout;
    if (bias.defined())
      for (std::size_t o = 0; o < cout; ++o) row[o] = bias.values()[o];
    for (std::size_t k = 0; k < width; ++k) {
      const long s = source(t, k);
      if (s < 0) continue;
      for (std::size_t c = 0; c < cin; ++c) {
        const double v = xv[s * cin + c];
        const double* wrow = wv + (k * cin + c) * cout;
        for (std::size_t o = 0; o < cout; ++o) row[o] += v * wrow[o];
      }
    }
  }
  ImplPtr ix = x.impl();
  ImplPtr iw = weight.impl();
  ImplPtr ib = bias.defined() ? bias.impl() : nullptr;
  std::vector<Tensor> inputs{x, weight};
  if (bias.defined()) inputs.push_back(bias);
  return MakeResult(OpKind::kCausalConv1d, {steps, cout}, std::move(out), std::move(inputs),
                    [=](const TensorImpl& o) {
                      double* gx = GradOf(ix);
                      double* gw = GradOf(iw);
                      double* gb = ib ? GradOf(ib) : nullptr;
                      for (std::size_t t = 0; t < steps; ++t) {
                        const double* grow = o.grad.data() + t * cout;
                        if (gb)
                          for (std::size_t oc = 0; oc < cout; ++oc) gb[oc] += grow[oc];
                        for (std::size_t k = 0; k < width; ++k) {
                          const long s = source(t, k);
                          if (s < 0) continue;
                          for (std::size_t c = 0; c < cin; ++c) {
                            const std::size_t wr = (k * cin + c) * cout;
                            if (gx) {
                              double acc = 0.0;
                              for (std::size_t oc = 0; oc < cout; ++oc) acc += grow[oc] * iw->data[wr + oc];
                              gx[s * cin + c] += acc;
                            }
                            if (gw) {
                              const double v = ix->data[s * cin + c];
                              for (std::size_t oc = 0; oc < cout; ++oc) gw[wr + oc] += v * grow[oc];
                            }
                          }
                        }
                      }
                    });
}

Tensor EmbeddingLookup(const Tensor& table, std::span<const int> ids) {
  Require2d("embedding_lookup", table, "table");
  const std::size_t vocab = table.dim(0), d = table.dim(1);
  std::vector<double> out(ids.size() * d);
  auto x = table.values();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= vocab) {
      throw ValidationError("embedding_lookup: token id " + std::to_string(ids[i]) + " at position " +
                            std::to_string(i) + " outside vocabulary of size " + std::to_string(vocab));
    }
    std::copy_n(x.begin() + ids[i] * d, d, out.begin() + i * d);
  }
  ImplPtr in = table.impl();
  std::vector<int> saved(ids.begin(), ids.end());
  return MakeResult(OpKind::kEmbeddingLookup, {ids.size(), d}, std::move(out), {table},
                    [in, saved = std::move(saved), d](const TensorImpl& o) {
                      double* g = GradOf(in);
                      if (!g) return;
                      for (std::size_t i = 0; i < saved.size(); ++i)
                        for (std::size_t j = 0; j < d; ++j) g[saved[i] * d + j] += o.grad[i * d + j];
                    });
}

Tensor SoftmaxAxis(const Tensor& a, std::size_t axis, std::span<const std::uint8_t> mask) {
  Require2d("softmax_axis", a);
  if (axis > 1) Mismatch("softmax_axis", "axis " + std::to_string(axis) + " out of range for 2-D input");
  if (!mask.empty() && mask.size() != a.size()) {
    Mismatch("softmax_axis", "mask has " + std::to_string(mask.size()) + " entries for input " +
                                 ShapeString(a.shape()));
  }
  const std::size_t r = a.dim(0), c = a.dim(1);
  // Each slice is a line of `len` elements separated by `stride`.
  const std::size_t lines = axis == 0 ? c : r;
  const std::size_t len = axis == 0 ? r : c;
  const std::size_t stride = axis == 0 ? c : 1;
  auto start = [=](std::size_t line) { return axis == 0 ? line : line * c; };
  auto x = a.values();
  std::vector<double> out(a.size(), 0.0);
  for (std::size_t line = 0; line < lines; ++line) {
    double hi = -INFINITY;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t e = start(line) + i * stride;
      if (mask.empty() || mask[e]) hi = std::max(hi, x[e]);
    }
    if (hi == -INFINITY) continue;
    double total = 0.0;
    for (std::size_t i = 0; i < len; ++i) {
      const std::size_t e = start(line) + i * stride;
      if (mask.empty() || mask[e]) {
        out[e] = std::exp(x[e] - hi);
        total += out[e];
      }
    }
    for (std::size_t i = 0; i < len; ++i) out[start(line) + i * stride] /= total;
  }
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kSoftmaxAxis, a.shape(), std::move(out), {a}, [=](const TensorImpl& o) {
    double* g = GradOf(in);
    if (!g) return;
    for (std::size_t line = 0; line < lines; ++line) {
      double dot = 0.0;
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t e = start(line) + i * stride;
        dot += o.grad[e] * o.data[e];
      }
      for (std::size_t i = 0; i < len; ++i) {
        const std::size_t e = start(line) + i * stride;
        g[e] += o.data[e] * (o.grad[e] - dot);
      }
    }
  });
}

Tensor NormalizeColumns(const Tensor& a) {
  Require2d("normalize_columns", a);
  const std::size_t n = a.dim(0);
  if (a.dim(1) != n) Mismatch("normalize_columns", "input must be square, got " + ShapeString(a.shape()));
  auto x = a.values();
  std::vector<double> sums(n, 0.0);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t t = 0; t < n; ++t) sums[t] += x[j * n + t];
  std::vector<double> out(n * n, 0.0);
  for (std::size_t t = 0; t < n; ++t) {
    if (sums[t] == 0.0) {
      out[t * n + t] = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) out[j * n + t] = x[j * n + t] / sums[t];
  }
  ImplPtr in = a.impl();
  return MakeResult(OpKind::kNormalizeColumns, a.shape(), std::move(out), {a},
                    [in, n, sums = std::move(sums)](const TensorImpl& o) {
                      double* g = GradOf(in);
                      if (!g) return;
                      for (std::size_t t = 0; t < n; ++t) {
                        if (sums[t] == 0.0) continue;
                        // d y_j / d x_i = (delta_ij - y_j) / s
                        double dot = 0.0;
                        for (std::size_t j = 0; j < n; ++j) dot += o.grad[j * n + t] * o.data[j * n + t];
                        for (std::size_t i = 0; i < n; ++i) g[i * n + t] += (o.grad[i * n + t] - dot) / sums[t];
                      }
                    });
}

Tensor CrossEntropyRows(const Tensor& logits, std::span<const int> targets, std::span<const double> weights) {
  Require2d("cross_entropy_rows", logits, "logits");
  const std::size_t rows = logits.dim(0), vocab = logits.dim(1);
  if (targets.size() != rows || weights.size() != rows) {
    Mismatch("cross_entropy_rows", "logits " + ShapeString(logits.shape()) + " with " +
                                       std::to_string(targets.size()) + " targets and " +
                                       std::to_string(weights.size()) + " weights");
  }
  auto x = logits.values();
  std::vector<double> out(rows, 0.0);
  auto probs = std::make_shared<std::vector<double>>(rows * vocab, 0.0);
  for (std::size_t r = 0; r < rows; ++r) {
    if (weights[r] == 0.0) continue;
    if (targets[r] < 0 || static_cast<std::size_t>(targets[r]) >= vocab) {
      throw ValidationError("cross_entropy_rows: target " + std::to_string(targets[r]) + " at row " +
                            std::to_string(r) + " outside " + std::to_string(vocab) + " classes");
    }
    const double* row = x.data() + r * vocab;
    double hi = *std::max_element(row, row + vocab);
    double total = 0.0;
    for (std::size_t v = 0; v < vocab; ++v) total += std::exp(row[v] - hi);
    const double log_z = hi + std::log(total);
    for (std::size_t v = 0; v < vocab; ++v) (*probs)[r * vocab + v] = std::exp(row[v] - log_z);
    out[r] = weights[r] * (log_z - row[targets[r]]);
  }
  ImplPtr in = logits.impl();
  std::vector<int> t(targets.begin(), targets.end());
  std::vector<double> w(weights.begin(), weights.end());
  return MakeResult(OpKind::kCrossEntropyRows, {rows}, std::move(out), {logits},
                    [in, probs, t = std::move(t), w = std::move(w), vocab](const TensorImpl& o) {
                      double* g = GradOf(in);
                      if (!g) return;
                      for (std::size_t r = 0; r < t.size(); ++r) {
                        if (w[r] == 0.0) continue;
                        const double scale = o.grad[r] * w[r];
                        for (std::size_t v = 0; v < vocab; ++v) g[r * vocab + v] += scale * (*probs)[r * vocab + v];
                        g[r * vocab + t[r]] -= scale;
                      }
                    });
}

Tensor Apply(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs) {
  auto need = [&](std::size_t n) {
    if (inputs.size() != n) {
      throw ShapeError(std::string(OpName(kind)) + ": expects " + std::to_string(n) + " inputs, got " +
                       std::to_string(inputs.size()));
    }
  };
  switch (kind) {
    case OpKind::kMatMul: need(2); return MatMul(inputs[0], inputs[1]);
    case OpKind::kTranspose: need(1); return Transpose(inputs[0]);
    case OpKind::kAdd: need(2); return Add(inputs[0], inputs[1]);
    case OpKind::kSub: need(2); return Sub(inputs[0], inputs[1]);
    case OpKind::kMul: need(2); return Mul(inputs[0], inputs[1]);
    case OpKind::kScale: need(1); return Scale(inputs[0], attrs.factor);
    case OpKind::kRelu: need(1); return Relu(inputs[0]);
    case OpKind::kSquaredRelu: need(1); return SquaredRelu(inputs[0]);
    case OpKind::kSigmoid: need(1); return Sigmoid(inputs[0]);
    case OpKind::kTanh: need(1); return Tanh(inputs[0]);
    case OpKind::kExp: need(1); return Exp(inputs[0]);
    case OpKind::kLog: need(1); return Log(inputs[0]);
    case OpKind::kSumAxis: need(1); return SumAxis(inputs[0], attrs.axis);
    case OpKind::kSumAll: need(1); return SumAll(inputs[0]);
    case OpKind::kConcat: return Concat(inputs, attrs.axis);
    case OpKind::kSlice: need(1); return Slice(inputs[0], attrs.axis, attrs.begin, attrs.end);
    case OpKind::kCausalConv1d:
      if (inputs.size() == 2) return CausalConv1d(inputs[0], inputs[1], Tensor(), attrs.width, attrs.direction);
      need(3);
      return CausalConv1d(inputs[0], inputs[1], inputs[2], attrs.width, attrs.direction);
    case OpKind::kEmbeddingLookup: need(1); return EmbeddingLookup(inputs[0], attrs.ids);
    case OpKind::kSoftmaxAxis: need(1); return SoftmaxAxis(inputs[0], attrs.axis, attrs.mask);
    case OpKind::kNormalizeColumns: need(1); return NormalizeColumns(inputs[0]);
    case OpKind::kCrossEntropyRows: need(1); return CrossEntropyRows(inputs[0], attrs.ids, attrs.weights);
    case OpKind::kLeaf: break;
  }
  throw std::invalid_argument("apply: unknown operation kind " + std::to_string(static_cast<int>(kind)));
}

}  // namespace relgraph
