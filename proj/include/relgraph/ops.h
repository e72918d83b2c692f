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

// Differentiable operations over Tensor. Every op records a tape node when
// one of its inputs requires a gradient and is otherwise a pure function.

#ifndef RELGRAPH_OPS_H_
#define RELGRAPH_OPS_H_

#include <cstdint>
#include <span>
#include <vector>

#include "relgraph/tensor.h"

namespace relgraph {

enum class Direction : std::uint8_t { kForward = 0, kBackward = 1 };

const char* DirectionName(Direction direction);

// [m,k] x [k,n] -> [m,n].
Tensor MatMul(const Tensor& a, const Tensor& b);
Tensor Transpose(const Tensor& a);

// Elementwise with numpy-style broadcasting of `b` onto the shape of `a`.
Tensor Add(const Tensor& a, const Tensor& b);
Tensor Sub(const Tensor& a, const Tensor& b);
Tensor Mul(const Tensor& a, const Tensor& b);
Tensor Scale(const Tensor& a, double factor);

Tensor Relu(const Tensor& a);
// max(0, x)^2
Tensor SquaredRelu(const Tensor& a);
Tensor Sigmoid(const Tensor& a);
Tensor Tanh(const Tensor& a);
Tensor Exp(const Tensor& a);
Tensor Log(const Tensor& a);

// Sums a 2-D tensor along `axis`, keeping it with extent 1.
Tensor SumAxis(const Tensor& a, std::size_t axis);
// Rank-0 sum of every element.
Tensor SumAll(const Tensor& a);
Tensor Mean(const Tensor& a);

// 2-D concatenation along `axis`.
Tensor Concat(std::span<const Tensor> parts, std::size_t axis);
// 2-D slice [begin, end) along `axis`.
Tensor Slice(const Tensor& a, std::size_t axis, std::size_t begin,
             std::size_t end);

// x: [T, C_in], weight: [width * C_in, C_out], bias: [C_out] or undefined.
// Forward: out[t] = sum_k x[t - (width-1) + k] . weight[k], zero-padded on
// the left, so out[t] never reads positions > t. Backward is the mirror image
// and never reads positions < t. Tap k = width-1 is the current position.
Tensor CausalConv1d(const Tensor& x, const Tensor& weight, const Tensor& bias,
                    std::size_t width, Direction direction);

// table: [V, d] -> [ids.size(), d]. Id out of range throws ValidationError
// naming the position.
Tensor EmbeddingLookup(const Tensor& table, std::span<const int> ids);

// Softmax of a 2-D tensor along `axis`. Entries with mask == 0 are excluded
// and come out exactly 0. An empty mask span means no masking.
Tensor SoftmaxAxis(const Tensor& a, std::size_t axis,
                   std::span<const std::uint8_t> mask = {});

// Column normalization of a nonnegative square matrix. A column whose sum is
// exactly zero becomes one-hot on the diagonal and carries no gradient.
Tensor NormalizeColumns(const Tensor& a);

// Per-row weighted negative log-likelihood of `targets` under
// softmax(logits). logits: [N, V]; result: [N]. Rows with weight 0 contribute
// exactly 0 and receive no gradient.
Tensor CrossEntropyRows(const Tensor& logits, std::span<const int> targets,
                        std::span<const double> weights);

// Attribute bag for the generic dispatcher.
struct OpAttrs {
  std::size_t axis = 0;
  std::size_t begin = 0;
  std::size_t end = 0;
  std::size_t width = 0;
  double factor = 1.0;
  Direction direction = Direction::kForward;
  std::vector<int> ids;
  std::vector<double> weights;
  std::vector<std::uint8_t> mask;
};

// Generic entry point by kind. Rejects kLeaf and out-of-range kinds.
Tensor Apply(OpKind kind, std::span<const Tensor> inputs, const OpAttrs& attrs);

}  // namespace relgraph

#endif  // RELGRAPH_OPS_H_
