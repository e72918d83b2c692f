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

#include "relgraph/transfer.h"

#include <vector>

#include "relgraph/errors.h"
#include "relgraph/ops.h"

namespace relgraph {

AffinityStack CumulativeProducts(const AffinityStack& graphs) {
  AffinityStack out = graphs;
  for (int l = 1; l < graphs.layers; ++l) {
    for (int h = 0; h < graphs.heads; ++h) {
      out.graphs[l * graphs.heads + h] = MatMul(out.at(l - 1, h), graphs.at(l, h));
    }
  }
  return out;
}

MixtureSpec MixtureSpec::Create(ParameterSet& params, const std::string& prefix, int layers, int heads) {
  const std::size_t n = 2 * static_cast<std::size_t>(layers) * static_cast<std::size_t>(heads);
  return {params.AddConstant(prefix + ".fwd", {1, n}, 0.0), params.AddConstant(prefix + ".bwd", {1, n}, 0.0)};
}

Tensor MixGraphs(const AffinityStack& graphs, const AffinityStack& products, const Tensor& logits) {
  const std::size_t count = graphs.graphs.size();
  if (products.graphs.size() != count || products.length != graphs.length) {
    throw ShapeError("mix_graphs: graph and product stacks are not aligned");
  }
  if (logits.rank() != 2 || logits.dim(0) != 1 || logits.dim(1) != 2 * count) {
    throw ShapeError("mix_graphs: " + std::to_string(2 * count) + " components but logits shaped " +
                     ShapeString(logits.shape()));
  }
  if (count == 0) throw ShapeError("mix_graphs: empty stack");
  Tensor weights = SoftmaxAxis(logits, 1);
  Tensor mix;
  for (std::size_t i = 0; i < 2 * count; ++i) {
    const Tensor& component = i < count ? graphs.graphs[i] : products.graphs[i - count];
    Tensor term = Mul(component, Slice(weights, 1, i, i + 1));
    mix = mix.defined() ? Add(mix, term) : term;
  }
  return mix;
}

Tensor UniformGraph(std::size_t length, Direction direction) {
  std::vector<double> values(length * length, 0.0);
  for (std::size_t t = 0; t < length; ++t) {
    const std::size_t allowed = direction == Direction::kForward ? t + 1 : length - t;
    for (std::size_t j = 0; j < length; ++j) {
      if (Allowed(j, t, direction)) values[j * length + t] = 1.0 / static_cast<double>(allowed);
    }
  }
  return Tensor::FromData({length, length}, std::move(values));
}

FusionParams FusionParams::Create(ParameterSet& params, const std::string& prefix, std::size_t width, Rng& rng) {
  return {params.AddUniform(prefix + ".w1", {2 * width, width}, rng),
          params.AddUniform(prefix + ".w2", {2 * width, width}, rng)};
}

Tensor Fuse(const Tensor& h, const Tensor& forward_mix, const Tensor& backward_mix, const FusionParams& params) {
  if (h.rank() != 2) throw ShapeError("fuse: H must be 2-D, got " + ShapeString(h.shape()));
  const std::size_t n = h.dim(0);
  for (const Tensor* m : {&forward_mix, &backward_mix}) {
    if (m->rank() != 2 || m->dim(0) != n || m->dim(1) != n) {
      throw ShapeError("fuse: graph " + ShapeString(m->shape()) + " does not match H " + ShapeString(h.shape()));
    }
  }
  if (params.w1.shape() != Shape{2 * h.dim(1), h.dim(1)} || params.w2.shape() != params.w1.shape()) {
    throw ShapeError("fuse: W1/W2 must be [" + std::to_string(2 * h.dim(1)) + ", " + std::to_string(h.dim(1)) +
                     "], got " + ShapeString(params.w1.shape()) + " and " + ShapeString(params.w2.shape()));
  }
  Tensor hm = Scale(Add(MatMul(Transpose(forward_mix), h), MatMul(Transpose(backward_mix), h)), 0.5);
  const Tensor x_parts[] = {h, hm};
  Tensor x = Concat(x_parts, 1);
  Tensor gated = Mul(MatMul(x, params.w1), Sigmoid(MatMul(x, params.w2)));
  const Tensor out_parts[] = {h, gated};
  return Concat(out_parts, 1);
}

}  // namespace relgraph
