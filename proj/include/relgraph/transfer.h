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

// Transfer-time graph algebra: products of affinity matrices across layers,
// learned mixtures over all graphs of one direction, and gated fusion of
// graph-propagated features.

#ifndef RELGRAPH_TRANSFER_H_
#define RELGRAPH_TRANSFER_H_

#include <string>

#include "relgraph/graph_predictor.h"
#include "relgraph/params.h"

namespace relgraph {

// Per head: Lambda^l = G^1 G^2 ... G^l (Lambda^1 = G^1). Same indexing as
// the input stack.
AffinityStack CumulativeProducts(const AffinityStack& graphs);

// Mixture logits over the 2 * L * n_h matrices of one direction: entry
// l * n_h + h weights G^{l,h}, entry L * n_h + l * n_h + h weights
// Lambda^{l,h}. Stored as [1, 2 L n_h]; starts at zero (uniform mixture).
struct MixtureSpec {
  Tensor forward_logits;
  Tensor backward_logits;

  static MixtureSpec Create(ParameterSet& params, const std::string& prefix, int layers, int heads);
  const Tensor& logits(Direction direction) const {
    return direction == Direction::kForward ? forward_logits : backward_logits;
  }
};

// Softmax-weighted sum of every G and Lambda matrix. Throws ShapeError when
// the logit count does not match the stacks.
Tensor MixGraphs(const AffinityStack& graphs, const AffinityStack& products, const Tensor& logits);

// Column t uniform over the positions allowed for t.
Tensor UniformGraph(std::size_t length, Direction direction);

// W1, W2: [2 d_h, d_h].
struct FusionParams {
  Tensor w1;
  Tensor w2;

  static FusionParams Create(ParameterSet& params, const std::string& prefix, std::size_t width, Rng& rng);
};

// HM_t = 0.5 (sum_j Mf_jt h_j + sum_j Mb_jt h_j), X = [H, HM],
// gated = (X W1) * sigmoid(X W2). Returns [H, gated], shaped [T, 2 d_h].
Tensor Fuse(const Tensor& h, const Tensor& forward_mix, const Tensor& backward_mix, const FusionParams& params);

}  // namespace relgraph

#endif  // RELGRAPH_TRANSFER_H_
